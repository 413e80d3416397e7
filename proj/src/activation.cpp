// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotact/activation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iotact/errors.hpp"

namespace iotact {

std::string_view to_string(ActivationMethod method)
{
    switch (method) {
        case ActivationMethod::exact_inversion:
            return "exact-inversion";
        case ActivationMethod::epsilon_approx:
            return "epsilon-approx";
        case ActivationMethod::alpha4_closed:
            return "alpha4-closed";
    }
    return "unknown";
}

double ActivationProbabilities::decomposition_error(double mu) const
{
    return std::abs(eta_a - (mu * p_a + (1.0 - mu) * q_a));
}

namespace {

using cplx = std::complex<double>;

// Below this activity level L_{D1+I1} is integrated directly instead of being
// recovered from (L_W - (1 - mu) L_I1) / mu.
constexpr double kCancellationMu = 1e-3;
constexpr double kClampSlack = 1e-9;

void check_alpha_m(double alpha, double m)
{
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
        throw DomainError("alpha must be > 2");
    }
    if (!(m >= 0.5) || !std::isfinite(m)) {
        throw DomainError("m must be >= 0.5");
    }
}

void check_eps(double eps)
{
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw DomainError("eps must lie in [0,1)");
    }
}

bool is_rayleigh_alpha4(double m, double alpha)
{
    return m == 1.0 && alpha == 4.0;
}

// 1 - (1 + a u^{-alpha/2} / m)^{-m}
double j_integrand(double u, double a, double m, double alpha)
{
    const double z = a * std::pow(u, -0.5 * alpha) / m;
    if (m == 1.0) {
        return z / (1.0 + z);
    }
    return -std::expm1(-m * std::log1p(z));
}

cplx log1p(cplx z)
{
    return 2.0 * std::atanh(z / (2.0 + z));
}

cplx expm1(cplx w)
{
    const double half_sin = std::sin(0.5 * w.imag());
    return {std::expm1(w.real()) * std::cos(w.imag()) - 2.0 * half_sin * half_sin,
            std::exp(w.real()) * std::sin(w.imag())};
}

cplx j_integrand(double u, cplx a, double m, double alpha)
{
    const cplx z = a * std::pow(u, -0.5 * alpha) / m;
    if (m == 1.0) {
        return z / (1.0 + z);
    }
    // the tail substitution multiplies this by a large Jacobian; avoid 1 - (1+z)^{-m}
    return -expm1(-m * log1p(z));
}

// J(x, a) for real or complex a off the negative real axis.
template<class T>
T j_value(double x, T a, double m, double alpha, const ToleranceSpec& tol)
{
    const double delta = 2.0 / alpha;
    const T head = std::pow(a, delta) * fading_stable_constant(m, alpha);
    if (x == 0.0) {
        return head;
    }
    if (is_rayleigh_alpha4(m, alpha)) {
        const T root = std::sqrt(a);
        if (x < std::abs(root)) {
            return root * (0.5 * kPi - std::atan(x / root));
        }
        return root * std::atan(root / x);
    }
    auto g = [&](double u) { return j_integrand(u, a, m, alpha); };
    const double scale = std::pow(std::abs(a), delta);
    if (x < scale) {
        return head - integrate(g, 0.0, x, tol);
    }
    // u = x t^{-1/p} with p = alpha/2 - 1 flattens the u^{-alpha/2} tail.
    const double p = 0.5 * alpha - 1.0;
    auto tail = [&](double t) -> T {
        const double u = x * std::pow(t, -1.0 / p);
        return g(u) * (x / p) * std::pow(t, -1.0 / p - 1.0);
    };
    return integrate(tail, 0.0, 1.0, tol);
}

ToleranceSpec inner_tolerance(const NetworkParams& params)
{
    // An error e in J perturbs the transform by a factor exp(pi lambda_b mu e).
    return {1e-13 / (kPi * params.lambda_b * params.mu), 1e-13, 400000};
}

ToleranceSpec outer_tolerance(const ToleranceSpec& tol)
{
    return {1e-300, std::min(tol.rel_tol, 1e-11), tol.max_evals};
}

cplx i1_transform(cplx s, const NetworkParams& params, const ToleranceSpec& outer)
{
    const cplx a = s * params.p_bar;
    const double pil = kPi * params.lambda_b;
    const auto inner = inner_tolerance(params);
    auto f = [&](double v) -> cplx {
        const double x = v / pil;
        return std::exp(-v - pil * params.mu * j_value(x, a, params.m, params.alpha, inner));
    };
    return integrate(f, 0.0, kInf, outer);
}

cplx d1i1_transform_direct(cplx s, const NetworkParams& params, const ToleranceSpec& outer)
{
    const cplx a = s * params.p_bar;
    const double pil = kPi * params.lambda_b;
    const auto inner = inner_tolerance(params);
    auto f = [&](double v) -> cplx {
        if (v == 0.0) {
            return cplx{};
        }
        const double x = v / pil;
        const cplx desired = std::pow(1.0 + a * std::pow(x, -0.5 * params.alpha) / params.m, -params.m);
        return desired * std::exp(-v - pil * params.mu * j_value(x, a, params.m, params.alpha, inner));
    };
    return integrate(f, 0.0, kInf, outer);
}

cplx w_transform(cplx s, const NetworkParams& params)
{
    const double c = kPi * params.lambda_b * params.mu * fading_stable_constant(params.m, params.alpha)
                     * std::pow(params.p_bar, params.delta());
    return std::exp(-c * std::pow(s, params.delta()));
}

// Transform value at a contour node for inversion at t. Nodes next to the
// branch cut can defeat the quadrature (a sharp oscillating spike) but carry
// the weight exp(t Re s). Where that weight underflows the node adds exactly
// nothing to the double-precision sum. Elsewhere a failed node is kept when
// its weighted size is far below the inversion tolerance. The node-doubling
// agreement test still has the last word.
template<class F>
cplx contour_node(F&& transform, cplx s, double t, const ToleranceSpec& tol)
{
    constexpr double kUnderflow = -745.0;
    if (t * s.real() < kUnderflow) {
        return {};
    }
    try {
        return transform(s, outer_tolerance(tol));
    } catch (const AccuracyError& e) {
        const double size = e.best_modulus() + e.error_estimate();
        const double weighted = std::exp(t * s.real()) * size * 64.0;
        if (s.real() < 0.0 && std::isfinite(size) && weighted < 1e-3 * tol.abs_tol) {
            return {e.best_estimate(), 0.0};
        }
        throw;
    }
}

// Clamp or reject probabilities that leave [0,1]; keep the decomposition.
ActivationProbabilities finalize(ActivationProbabilities probs, double mu, RangePolicy policy)
{
    if (policy == RangePolicy::raw) {
        return probs;
    }
    bool clamped = false;
    for (double* v : {&probs.q_a, &probs.p_a, &probs.eta_a}) {
        if (!std::isfinite(*v) || *v < -kClampSlack || *v > 1.0 + kClampSlack) {
            throw AccuracyError("activation probability outside [0,1]: " + std::to_string(*v), *v, 0.0);
        }
        const double c = std::clamp(*v, 0.0, 1.0);
        clamped = clamped || c != *v;
        *v = c;
    }
    if (clamped) {
        probs.eta_a = mu * probs.p_a + (1.0 - mu) * probs.q_a;
    }
    return probs;
}

}  // namespace

//---------------------------------------------------------------------------//

double fading_stable_constant(double m, double alpha)
{
    check_alpha_m(alpha, m);
    const double delta = 2.0 / alpha;
    return std::exp(std::lgamma(m + delta) + std::lgamma(1.0 - delta) - std::lgamma(m)
                    - delta * std::log(m));
}

double j_function(double x, double y, double m, double alpha, const ToleranceSpec& tol)
{
    check_alpha_m(alpha, m);
    if (!(x >= 0.0) || !(y > 0.0)) {
        throw DomainError("j_function: need x >= 0 and y > 0");
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    return j_value(x, y, m, alpha, tol);
}

LaplaceSpectrum laplace_W_spectrum(const NetworkParams& params)
{
    params.validate();
    const double c = kPi * params.lambda_b * params.mu * fading_stable_constant(params.m, params.alpha)
                     * std::pow(params.p_bar, params.delta());
    return LaplaceSpectrum::stable(c, params.delta());
}

double laplace_W(double s, const NetworkParams& params)
{
    params.validate();
    if (!(s >= 0.0)) {
        throw DomainError("laplace_W: s must be >= 0");
    }
    return w_transform(cplx(s, 0.0), params).real();
}

cplx laplace_I1_exact(cplx s, const NetworkParams& params, const ToleranceSpec& tol)
{
    params.validate();
    if (s == cplx{}) {
        return 1.0;
    }
    if (s.imag() == 0.0 && s.real() < 0.0) {
        throw DomainError("laplace_I1_exact: s on the branch cut");
    }
    return i1_transform(s, params, outer_tolerance(tol));
}

double laplace_I1_exact(double s, const NetworkParams& params, const ToleranceSpec& tol)
{
    if (!(s >= 0.0)) {
        throw DomainError("laplace_I1_exact: s must be >= 0");
    }
    return std::clamp(laplace_I1_exact(cplx(s, 0.0), params, tol).real(), 0.0, 1.0);
}

double laplace_I1_approx(double s, const NetworkParams& params, double eps_1)
{
    check_eps(eps_1);
    return std::min(1.0, laplace_W(s, params) / (1.0 - params.mu * eps_1));
}

double laplace_I1_rayleigh_scaled(double s, const NetworkParams& params)
{
    params.validate();
    if (params.m != 1.0) {
        throw DomainError("laplace_I1_rayleigh_scaled: requires m = 1");
    }
    if (!(s > 0.0)) {
        throw DomainError("laplace_I1_rayleigh_scaled: s must be > 0");
    }
    return 1.0 / (1.0 + params.mu * j_function(1.0, s, 1.0, params.alpha));
}

double laplace_D1I1(double s, const NetworkParams& params, D1I1Via via, const ToleranceSpec& tol)
{
    params.validate();
    if (!(s > 0.0)) {
        throw DomainError("laplace_D1I1: s must be > 0");
    }
    const double mu = params.mu;
    if (via == D1I1Via::rayleigh_scaled) {
        if (params.m != 1.0) {
            throw DomainError("laplace_D1I1: rayleigh-scaled form requires m = 1");
        }
        const double w = 1.0 / (1.0 + mu * j_function(0.0, s, 1.0, params.alpha));
        const double value = (w - (1.0 - mu) * laplace_I1_rayleigh_scaled(s, params)) / mu;
        // cancellation leaves about 1e-16 / mu of absolute accuracy
        if (value < 4e-16 / mu) {
            throw AccuracyError("laplace_D1I1: cancellation below accuracy floor", value, 4e-16 / mu);
        }
        return std::min(value, 1.0);
    }
    if (mu >= kCancellationMu) {
        const double value = (laplace_W(s, params) - (1.0 - mu) * laplace_I1_exact(s, params, tol)) / mu;
        const double floor = 1e-11 / mu;
        if (value > floor) {
            return std::min(value, 1.0);
        }
    }
    return std::clamp(d1i1_transform_direct(cplx(s, 0.0), params, outer_tolerance(tol)).real(), 0.0, 1.0);
}

//---------------------------------------------------------------------------//

double total_activation_probability(const NetworkParams& params,
                                    const ToleranceSpec& tol,
                                    InversionMethod method)
{
    params.validate();
    if (std::isinf(params.theta_a)) {
        return 0.0;
    }
    return 1.0 - inverse_laplace_cdf(laplace_W_spectrum(params), params.theta_a, tol, method);
}

ActivationProbabilities activation_probs_exact(const NetworkParams& params, const ToleranceSpec& tol)
{
    params.validate();
    ActivationProbabilities out;
    out.method = ActivationMethod::exact_inversion;
    if (std::isinf(params.theta_a)) {
        return out;
    }
    const double mu = params.mu;
    const double eta = total_activation_probability(params, tol);

    auto i1_at = [&params](cplx s, const ToleranceSpec& outer) { return i1_transform(s, params, outer); };
    LaplaceSpectrum i1([&](cplx s) { return contour_node(i1_at, s, params.theta_a, tol); });
    const double q = 1.0 - inverse_laplace_cdf(i1, params.theta_a, tol, InversionMethod::contour);

    out.q_a = q;
    if (mu >= kCancellationMu) {
        out.p_a = 1.0 - (1.0 - eta) / mu + (1.0 - mu) / mu * (1.0 - q);
        out.eta_a = eta;
        const double slack = std::max(kClampSlack, 10.0 * tol.abs_tol / mu);
        if (out.p_a < -slack || out.p_a > 1.0 + slack) {
            throw AccuracyError("activation_probs_exact: p_a outside [0,1]", out.p_a, slack);
        }
        if (out.p_a < 0.0 || out.p_a > 1.0) {
            out.p_a = std::clamp(out.p_a, 0.0, 1.0);
            out.eta_a = mu * out.p_a + (1.0 - mu) * q;
        }
    } else {
        auto d1i1_at = [&params](cplx s, const ToleranceSpec& outer) {
            return d1i1_transform_direct(s, params, outer);
        };
        LaplaceSpectrum d1i1([&](cplx s) { return contour_node(d1i1_at, s, params.theta_a, tol); });
        out.p_a = 1.0 - inverse_laplace_cdf(d1i1, params.theta_a, tol, InversionMethod::contour);
        out.eta_a = mu * out.p_a + (1.0 - mu) * q;
    }
    return out;
}

ActivationProbabilities activation_probs_approx(const NetworkParams& params, double eps_1, RangePolicy policy)
{
    params.validate();
    check_eps(eps_1);
    const double mu = params.mu;
    const double eta = total_activation_probability(params);
    const double tail = 1.0 - eta;
    ActivationProbabilities out;
    out.method = ActivationMethod::epsilon_approx;
    out.eps_K = eps_1;
    out.q_a = 1.0 - tail / (1.0 - mu * eps_1);
    out.p_a = 1.0 - (1.0 - eps_1) * tail / (1.0 - mu * eps_1);
    out.eta_a = eta;
    return finalize(out, mu, policy);
}

double alpha4_erf_argument(const NetworkParams& params, double beta)
{
    params.validate();
    if (params.alpha != 4.0) {
        throw DomainError("alpha4 closed form requires alpha = 4");
    }
    const double c = kPi * params.lambda_b * params.mu * fading_stable_constant(params.m, 4.0)
                     * downlink_power_fractional_moment(beta, params);
    return c / (2.0 * std::sqrt(params.theta_a));
}

ActivationProbabilities activation_probs_closed_alpha4(const NetworkParams& params,
                                                       double eps_1,
                                                       RangePolicy policy)
{
    check_eps(eps_1);
    const double z = alpha4_erf_argument(params, 0.0);
    const double mu = params.mu;
    const double tail = iotact::erfc(z);
    ActivationProbabilities out;
    out.method = ActivationMethod::alpha4_closed;
    out.eps_K = eps_1;
    out.q_a = 1.0 - tail / (1.0 - eps_1 * mu);
    out.p_a = 1.0 - (1.0 - eps_1) / (1.0 - eps_1 * mu) * tail;
    out.eta_a = iotact::erf(z);
    return finalize(out, mu, policy);
}

//---------------------------------------------------------------------------//

double downlink_power_fractional_moment(double beta, const NetworkParams& params)
{
    params.validate();
    const double delta = params.delta();
    if (!(beta > -delta) || !std::isfinite(beta)) {
        throw DomainError("power exponent must exceed -2/alpha");
    }
    const double ref = beta >= 0.0 ? params.lambda_b_min : params.lambda_b_max;
    const double log_moment = delta * std::log(params.p_bar) + std::lgamma(1.0 + beta)
                              - delta * std::lgamma(1.0 + 0.5 * params.alpha * beta)
                              + beta * std::log(ref / params.lambda_b);
    return std::exp(log_moment);
}

double coordinated_base_laplace(double s, const NetworkParams& params, double beta)
{
    if (!(s >= 0.0)) {
        throw DomainError("coordinated_laplace: s must be >= 0");
    }
    const double moment = downlink_power_fractional_moment(beta, params);
    const double exponent = kPi * params.lambda_b * params.mu * fading_stable_constant(params.m, params.alpha)
                            * std::pow(s, params.delta()) * moment;
    return std::exp(-exponent);
}

double coordinated_laplace(double s,
                           const NetworkParams& params,
                           int K,
                           double eps_K,
                           double beta,
                           CoordinatedTransform which)
{
    if (K < 1) {
        throw DomainError("coordinated_laplace: K must be >= 1");
    }
    check_eps(eps_K);
    const double base = coordinated_base_laplace(s, params, beta);
    const double mu = params.mu;
    const double idle = std::pow(1.0 - mu * eps_K, -K);
    const double active = std::pow(1.0 - (1.0 - mu) * eps_K, K);
    switch (which) {
        case CoordinatedTransform::I_K:
            return std::min(1.0, idle * base);
        case CoordinatedTransform::D_K_plus_I_K:
            return active * base;
        case CoordinatedTransform::W_K:
            return std::min(1.0, (mu * active + (1.0 - mu) * idle) * base);
    }
    return base;
}

ActivationProbabilities coordinated_activation_probs(const NetworkParams& params,
                                                     int K,
                                                     double eps_K,
                                                     double beta,
                                                     CoordinatedMethod method,
                                                     RangePolicy policy)
{
    params.validate();
    if (K < 1) {
        throw DomainError("coordinated_activation_probs: K must be >= 1");
    }
    check_eps(eps_K);
    double tail = 0.0;
    if (method == CoordinatedMethod::alpha4) {
        tail = iotact::erfc(alpha4_erf_argument(params, beta));
    } else if (!std::isinf(params.theta_a)) {
        const double c = kPi * params.lambda_b * params.mu * fading_stable_constant(params.m, params.alpha)
                         * downlink_power_fractional_moment(beta, params);
        tail = inverse_laplace_cdf(LaplaceSpectrum::stable(c, params.delta()), params.theta_a,
                                   kInversionTolerance);
    }
    const double mu = params.mu;
    const double idle = std::pow(1.0 - mu * eps_K, -K);
    const double active = std::pow(1.0 - (1.0 - mu) * eps_K, K);
    ActivationProbabilities out;
    out.method = method == CoordinatedMethod::alpha4 ? ActivationMethod::alpha4_closed
                                                     : ActivationMethod::epsilon_approx;
    out.K = K;
    out.eps_K = eps_K;
    out.q_a = 1.0 - idle * tail;
    out.p_a = 1.0 - active * tail;
    out.eta_a = 1.0 - (mu * active + (1.0 - mu) * idle) * tail;
    return finalize(out, mu, policy);
}

double coordination_benefit_product(double mu, double eps_K, int K)
{
    if (!(mu > 0.0 && mu < 1.0) || !(eps_K > 0.0 && eps_K < 1.0) || K < 1) {
        throw DomainError("coordination_benefit_check: need mu, eps in (0,1) and K >= 1");
    }
    return std::pow(1.0 - (1.0 - mu) * eps_K, K - 1) * std::pow(1.0 - mu * eps_K, K + 1);
}

bool coordination_benefit_check(double mu, double eps_K, int K)
{
    return coordination_benefit_product(mu, eps_K, K) < 1.0;
}

double activation_performance_index(const ActivationProbabilities& probs)
{
    if (probs.q_a == 0.0) {
        throw UnboundedIndexError("activation_performance_index: q_a = 0");
    }
    return (1.0 - probs.eta_a) * (probs.p_a / probs.q_a - 1.0);
}

}  // namespace iotact
