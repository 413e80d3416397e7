// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

//! \file uplink.hpp
//! Fractional power control laws and uplink SIR coverage.

#pragma once

#include "iotact/numerics.hpp"
#include "iotact/params.hpp"

namespace iotact {

enum class LinkDirection
{
    uplink,
    downlink
};

/// Transmit power scaled by distance^(alpha * exponent), normalized so the
/// mean never exceeds the reference power.
struct PowerControlLaw
{
    LinkDirection kind = LinkDirection::uplink;
    double exponent = 0.0;          // nu (uplink) or beta (downlink)
    double reference_power = 0.0;   // Q_bar or P_bar

    /// exponent > -2/alpha, reference power finite and > 0.
    void validate(double alpha) const;

    static PowerControlLaw uplink(double nu, const NetworkParams& params);
    static PowerControlLaw downlink(double beta, const NetworkParams& params);
};

/// Power used at nearest-BS distance nearest_dist (meters).
double power_sample(const PowerControlLaw& law, double nearest_dist, const NetworkParams& params);

/// Same law written in the squared distance, as the simulations draw it.
double power_from_distance_sq(const PowerControlLaw& law, double dist_sq, const NetworkParams& params);

/// Reference power times (lambda_ref / lambda_b)^{alpha exponent / 2}.
double mean_uplink_power(double nu, const NetworkParams& params);
double mean_downlink_power(double beta, const NetworkParams& params);

struct UplinkLoad
{
    double n_a = 0.0;
    double density_ratio = 0.0;  // lambda_d / lambda_b
    double rho = 0.0;
    double eta_a = 0.0;
    double sir_factor = 0.0;     // theta_c^{2/alpha}
    double j0 = 0.0;             // J(0, 1)

    double product() const { return density_ratio * rho * eta_a * sir_factor * j0; }
};

UplinkLoad uplink_load(const NetworkParams& params, double eta_a);

/// eta_c(nu, n_a) = ∫_0^∞ exp(-[n_a Gamma(1+nu) u^{1-nu} + u]) du.
double uplink_coverage_power_control(double nu, double n_a, const ToleranceSpec& tol = {});

/// 1 / (1 + n_a) for constant power and Rayleigh fading.
double uplink_coverage_no_pc(const NetworkParams& params, double eta_a);

/// Jensen bound exp(-n_a Gamma(1+nu) Gamma(2-nu)) under Rayleigh fading;
/// 0 for nu >= 2 where the bound degenerates.
double uplink_coverage_lower_bound(const NetworkParams& params, double eta_a, double nu);

/// True when nu > -2/alpha and eta_c(nu, n_a) >= eta_c(0, n_a) - tol.
bool in_beneficial_set(double nu, double n_a, double alpha, double tol = 1e-9);

}  // namespace iotact
