// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

//! \file montecarlo.hpp
//! Simulation of the activation signaling process and of the uplink SIR.
//!
//! Every trial owns a random substream derived from (master_seed, trial
//! index), so results do not depend on the worker count and trial i sees the
//! same randomness under any K, beta or sweep point (common random numbers).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iotact/activation.hpp"
#include "iotact/geometry.hpp"
#include "iotact/params.hpp"

namespace iotact {

enum class Execution
{
    serial,
    parallel  // OpenMP over chunks of trials
};

struct McConfig
{
    std::uint64_t trials = 100000;
    std::uint64_t master_seed = 1;
    WindowSpec window{0.0, 0.01};  // radius 0 derives it from the truncation bound
    double confidence = 0.95;      // 0.9, 0.95 or 0.99
    int workers = 0;               // 0 uses the OpenMP default
    Execution execution = Execution::parallel;
    bool far_field_compensation = true;  // add the mean of the omitted field

    /// Throws ConfigError.
    void validate() const;
};

struct McEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::string tag;
};

/// Normal quantile for a supported two-sided confidence level.
double confidence_z(double confidence);

/// Wald interval for a Bernoulli frequency.
McEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials, double confidence, std::string tag);

/// Sample mean, standard error and Wald interval.
McEstimate sample_mean_estimate(const std::vector<double>& values, double confidence, std::string tag);

//---------------------------------------------------------------------------//
// Activation signaling
//---------------------------------------------------------------------------//

struct ActivationSnapshot
{
    double w = 0.0;              // omega_1 D_K + I_K
    bool serving_active = false; // shared mark of the K coordinated BSs
    double desired = 0.0;        // D_K, the K nearest BSs regardless of activity
    double interference = 0.0;   // I_K, active BSs beyond the K nearest
};

/// Disk radius whose omitted mean interference equals fraction * theta_a.
double activation_window_radius(const NetworkParams& params, double beta, double fraction);

/// One realization of W_K at the origin. The window radius is derived when
/// window.radius == 0; an explicit radius too small for the truncation bound
/// raises ConfigError.
ActivationSnapshot simulate_activation_snapshot(const NetworkParams& params,
                                                int K,
                                                double beta,
                                                const WindowSpec& window,
                                                RngStream& rng,
                                                bool far_field_compensation = true);

struct ActivationEstimate
{
    McEstimate q_a;
    McEstimate p_a;
    McEstimate eta_a;
    double window_radius = 0.0;

    /// |eta - (mu p + (1-mu) q)| over the combined z-scaled standard error.
    double decomposition_score(double mu, double confidence) const;
};

/// p_a and q_a are estimated on every trial from both branches,
/// 1[D_K + I_K >= theta_a] and 1[I_K >= theta_a], which is valid because the
/// shared mark is independent of D_K and I_K. eta_a uses the drawn mark.
ActivationEstimate estimate_activation_probs(const NetworkParams& params,
                                             int K,
                                             double beta,
                                             const McConfig& mc);

/// I_K for every trial (same substreams as estimate_activation_probs).
std::vector<double> sample_interference(const NetworkParams& params, int K, double beta, const McConfig& mc);

/// Mean of exp(-s x) over the samples.
McEstimate empirical_laplace(const std::vector<double>& samples, double s, double confidence = 0.95);

/// 20 geometric points where the coordinated base transform spans [0.05, 0.95].
std::vector<double> default_epsilon_grid(const NetworkParams& params, double beta, int points = 20);

/// Least-squares eps_K from empirical transforms: minimizes
/// sum_s (log Lhat(s) + A(s) + K log(1 - mu eps))^2 with
/// A(s) = -log coordinated_base_laplace(s).
EpsilonEstimate fit_epsilon(const std::vector<double>& s_grid,
                            const std::vector<double>& laplace_hat,
                            const std::vector<double>& base_exponent,
                            int K,
                            double mu);

EpsilonEstimate estimate_epsilon_K(const NetworkParams& params,
                                   int K,
                                   double beta,
                                   const McConfig& mc,
                                   std::vector<double> s_grid = {});

/// Both products of one simulation pass.
struct CoordinatedMcResult
{
    ActivationEstimate probs;
    EpsilonEstimate eps;
};

CoordinatedMcResult estimate_coordinated(const NetworkParams& params,
                                         int K,
                                         double beta,
                                         const McConfig& mc,
                                         std::vector<double> s_grid = {});

//---------------------------------------------------------------------------//
// Uplink
//---------------------------------------------------------------------------//

/// One SIR draw at a BS at the origin whose device sits at Exp(pi lambda_b)
/// squared distance; interferers form a PPP of density rho eta_a lambda_d.
/// Uses params.theta_c to size the window.
double simulate_uplink_sir(const NetworkParams& params,
                           double nu,
                           double eta_a,
                           const WindowSpec& window,
                           RngStream& rng,
                           bool far_field_compensation = true);

McEstimate estimate_uplink_coverage(const NetworkParams& params,
                                    double nu,
                                    double eta_a,
                                    double theta_c,
                                    const McConfig& mc);

}  // namespace iotact
