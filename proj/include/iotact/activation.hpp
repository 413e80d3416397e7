// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

//! \file activation.hpp
//! Laplace transforms of the activation signaling process and the false, true
//! and total activation probabilities derived from them.

#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "iotact/numerics.hpp"
#include "iotact/params.hpp"

namespace iotact {

enum class ActivationMethod
{
    exact_inversion,
    epsilon_approx,
    alpha4_closed
};

std::string_view to_string(ActivationMethod method);

struct ActivationProbabilities
{
    double q_a = 0.0;    // false activation probability
    double p_a = 0.0;    // true activation probability
    double eta_a = 0.0;  // total activation probability
    double eps_K = 0.0;
    int K = 1;
    ActivationMethod method = ActivationMethod::exact_inversion;

    /// |eta_a - (mu p_a + (1 - mu) q_a)|
    double decomposition_error(double mu) const;
};

/// Fitted epsilon_K together with the data it was fitted on.
struct EpsilonEstimate
{
    double eps_K = 0.0;
    int K = 1;
    double residual = 0.0;  // sum of squared log-transform residuals
    std::vector<double> s_grid;
    bool at_boundary = false;  // clamped to 0 or 1 - 1e-9
    bool degenerate = false;   // objective flat in eps (mu K ~ 0)
};

/// How approximate probabilities that leave [0,1] are treated.
enum class RangePolicy
{
    checked,  // clamp violations up to 1e-9, throw AccuracyError beyond
    raw       // return the formula values untouched
};

//---------------------------------------------------------------------------//
// The J functional
//---------------------------------------------------------------------------//

/// Gamma(m + 2/a) Gamma(1 - 2/a) / (Gamma(m) m^{2/a}), so that
/// J(0, y) = y^{2/a} * fading_stable_constant(m, a).
double fading_stable_constant(double m, double alpha);

/// J(x, y) = ∫_x^∞ [1 - (1 + y u^{-a/2} / m)^{-m}] du.
double j_function(double x, double y, double m, double alpha, const ToleranceSpec& tol = {});

//---------------------------------------------------------------------------//
// Laplace transforms (constant BS power, K = 1)
//---------------------------------------------------------------------------//

/// L_W as a stable-tagged spectrum: exp(-pi lambda_b mu J(0, s P)).
LaplaceSpectrum laplace_W_spectrum(const NetworkParams& params);
double laplace_W(double s, const NetworkParams& params);

/// Transform of the interference given the serving BS is idle, by quadrature
/// over the serving distance. Valid on the plane cut along (-inf, 0].
std::complex<double> laplace_I1_exact(std::complex<double> s,
                                      const NetworkParams& params,
                                      const ToleranceSpec& tol = {});
double laplace_I1_exact(double s, const NetworkParams& params, const ToleranceSpec& tol = {});

/// L_W(s) / (1 - mu eps_1), clamped to <= 1.
double laplace_I1_approx(double s, const NetworkParams& params, double eps_1);

enum class D1I1Via
{
    exact,           // s is the physical transform argument
    rayleigh_scaled  // s is the argument after scaling by ||X_1||^a / P (m = 1)
};

/// Transform of desired plus interference power given the serving BS is active.
/// With rayleigh_scaled, returns (1/mu)[1/(1 + mu J(0,s)) - (1-mu)/(1 + mu J(1,s))].
double laplace_D1I1(double s,
                    const NetworkParams& params,
                    D1I1Via via = D1I1Via::exact,
                    const ToleranceSpec& tol = {});

/// 1 / (1 + mu J(1, s)): L_I1 at the argument s ||X_1||^a / P (m = 1 only).
double laplace_I1_rayleigh_scaled(double s, const NetworkParams& params);

//---------------------------------------------------------------------------//
// Activation probabilities
//---------------------------------------------------------------------------//

/// Default tolerance of the contour inversions behind the exact probabilities.
inline constexpr ToleranceSpec kInversionTolerance{1e-9, 1e-9, 200000};

/// q_a and p_a by inverting the exact transforms; eta_a from L_W.
ActivationProbabilities activation_probs_exact(const NetworkParams& params,
                                               const ToleranceSpec& tol = kInversionTolerance);

/// eta_a alone, by inverting L_W (any alpha).
double total_activation_probability(const NetworkParams& params,
                                    const ToleranceSpec& tol = kInversionTolerance,
                                    InversionMethod method = InversionMethod::automatic);

/// The eps_1 approximations with the exact eta_a.
ActivationProbabilities activation_probs_approx(const NetworkParams& params,
                                                double eps_1,
                                                RangePolicy policy = RangePolicy::checked);

/// The erf argument pi^{3/2} lambda_b mu E[H^{1/2}] E[P^{1/2}] / (2 sqrt(theta_a))
/// for alpha = 4 and BS power exponent beta.
double alpha4_erf_argument(const NetworkParams& params, double beta = 0.0);

/// Closed forms at alpha = 4: erf for eta_a, erfc-based q_a and p_a.
ActivationProbabilities activation_probs_closed_alpha4(const NetworkParams& params,
                                                       double eps_1,
                                                       RangePolicy policy = RangePolicy::checked);

//---------------------------------------------------------------------------//
// Downlink power control and coordination
//---------------------------------------------------------------------------//

/// E[P^{2/a}] under the downlink power law with exponent beta.
double downlink_power_fractional_moment(double beta, const NetworkParams& params);

enum class CoordinatedTransform
{
    I_K,
    D_K_plus_I_K,
    W_K
};

/// exp(-pi lambda_b mu J(0,s) E[P^{2/a}]), the common factor of the
/// coordinated approximations.
double coordinated_base_laplace(double s, const NetworkParams& params, double beta);

double coordinated_laplace(double s,
                           const NetworkParams& params,
                           int K,
                           double eps_K,
                           double beta,
                           CoordinatedTransform which);

enum class CoordinatedMethod
{
    inversion,  // stable-law inversion, any alpha
    alpha4      // erfc closed forms
};

ActivationProbabilities coordinated_activation_probs(const NetworkParams& params,
                                                     int K,
                                                     double eps_K,
                                                     double beta,
                                                     CoordinatedMethod method,
                                                     RangePolicy policy = RangePolicy::checked);

/// [1 - (1-mu) eps]^{K-1} (1 - mu eps)^{K+1}
double coordination_benefit_product(double mu, double eps_K, int K);
/// true iff coordination_benefit_product < 1.
bool coordination_benefit_check(double mu, double eps_K, int K);

/// zeta_a = (1 - eta_a)(p_a / q_a - 1). Throws UnboundedIndexError when q_a = 0.
double activation_performance_index(const ActivationProbabilities& probs);

}  // namespace iotact
