// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotact/uplink.hpp"

#include <cmath>

#include "iotact/activation.hpp"
#include "iotact/errors.hpp"

namespace iotact {

namespace {

void check_exponent(double exponent, double alpha)
{
    if (!(exponent > -2.0 / alpha) || !std::isfinite(exponent)) {
        throw DomainError("power exponent must exceed -2/alpha");
    }
}

double reference_density(double exponent, const NetworkParams& params)
{
    return exponent >= 0.0 ? params.lambda_b_min : params.lambda_b_max;
}

double mean_power(double exponent, double reference, const NetworkParams& params)
{
    params.validate();
    check_exponent(exponent, params.alpha);
    const double ratio = reference_density(exponent, params) / params.lambda_b;
    return reference * std::pow(ratio, 0.5 * params.alpha * exponent);
}

}  // namespace

void PowerControlLaw::validate(double alpha) const
{
    check_exponent(exponent, alpha);
    if (!(reference_power > 0.0) || !std::isfinite(reference_power)) {
        throw DomainError("PowerControlLaw: reference power must be finite and > 0");
    }
}

PowerControlLaw PowerControlLaw::uplink(double nu, const NetworkParams& params)
{
    return {LinkDirection::uplink, nu, params.q_bar};
}

PowerControlLaw PowerControlLaw::downlink(double beta, const NetworkParams& params)
{
    return {LinkDirection::downlink, beta, params.p_bar};
}

double power_from_distance_sq(const PowerControlLaw& law, double dist_sq, const NetworkParams& params)
{
    law.validate(params.alpha);
    if (!(dist_sq > 0.0)) {
        throw DomainError("power_sample: distance must be > 0");
    }
    if (law.exponent == 0.0) {
        return law.reference_power;
    }
    const double a = 0.5 * params.alpha * law.exponent;
    const double ref = kPi * reference_density(law.exponent, params);
    return law.reference_power * std::exp(a * std::log(dist_sq * ref) - std::lgamma(1.0 + a));
}

double power_sample(const PowerControlLaw& law, double nearest_dist, const NetworkParams& params)
{
    if (!(nearest_dist > 0.0)) {
        throw DomainError("power_sample: distance must be > 0");
    }
    return power_from_distance_sq(law, nearest_dist * nearest_dist, params);
}

double mean_uplink_power(double nu, const NetworkParams& params)
{
    return mean_power(nu, params.q_bar, params);
}

double mean_downlink_power(double beta, const NetworkParams& params)
{
    return mean_power(beta, params.p_bar, params);
}

UplinkLoad uplink_load(const NetworkParams& params, double eta_a)
{
    params.validate();
    if (!(eta_a >= 0.0 && eta_a <= 1.0)) {
        throw DomainError("uplink_load: eta_a must lie in [0,1]");
    }
    UplinkLoad load;
    load.density_ratio = params.density_ratio();
    load.rho = params.rho;
    load.eta_a = eta_a;
    load.sir_factor = std::pow(params.theta_c, params.delta());
    load.j0 = fading_stable_constant(params.m, params.alpha);
    load.n_a = load.product();
    return load;
}

double uplink_coverage_power_control(double nu, double n_a, const ToleranceSpec& tol)
{
    if (!(nu > -1.0) || !std::isfinite(nu)) {
        throw DomainError("uplink_coverage_power_control: nu must be > -1");
    }
    if (!(n_a >= 0.0) || !std::isfinite(n_a)) {
        throw DomainError("uplink_coverage_power_control: n_a must be finite and >= 0");
    }
    const double k = n_a * std::tgamma(1.0 + nu);
    auto f = [k, nu](double u) { return std::exp(-(k * std::pow(u, 1.0 - nu) + u)); };
    return integrate(f, 0.0, kInf, tol);
}

double uplink_coverage_no_pc(const NetworkParams& params, double eta_a)
{
    params.validate();
    if (params.m != 1.0) {
        throw DomainError("uplink_coverage_no_pc: requires m = 1");
    }
    return 1.0 / (1.0 + uplink_load(params, eta_a).n_a);
}

double uplink_coverage_lower_bound(const NetworkParams& params, double eta_a, double nu)
{
    params.validate();
    if (params.m != 1.0) {
        throw DomainError("uplink_coverage_lower_bound: requires m = 1");
    }
    check_exponent(nu, params.alpha);
    if (nu >= 2.0) {
        return 0.0;
    }
    const double n_a = uplink_load(params, eta_a).n_a;
    return std::exp(-n_a * std::tgamma(1.0 + nu) * std::tgamma(2.0 - nu));
}

bool in_beneficial_set(double nu, double n_a, double alpha, double tol)
{
    if (!(n_a > 0.0)) {
        throw DomainError("in_beneficial_set: n_a must be > 0");
    }
    if (!(nu > -2.0 / alpha)) {
        return false;
    }
    return uplink_coverage_power_control(nu, n_a) >= uplink_coverage_power_control(0.0, n_a) - tol;
}

}  // namespace iotact
