// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotact/numerics.hpp"

#include <cmath>

namespace iotact {

void ToleranceSpec::validate() const
{
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_evals < 1) {
        throw DomainError("ToleranceSpec: abs_tol, rel_tol must be > 0 and max_evals >= 1");
    }
}

double gamma_fn(double x)
{
    if (std::isnan(x)) {
        throw DomainError("gamma_fn: NaN argument");
    }
    if (x <= 0.0 && x == std::floor(x)) {
        throw DomainError("gamma_fn: pole at non-positive integer");
    }
    return std::tgamma(x);
}

double erf(double z)
{
    if (!(z >= 0.0)) {
        throw DomainError("erf: argument must be >= 0");
    }
    return std::erf(z);
}

double erfc(double z)
{
    if (!(z >= 0.0)) {
        throw DomainError("erfc: argument must be >= 0");
    }
    return std::erfc(z);
}

//---------------------------------------------------------------------------//

LaplaceSpectrum::LaplaceSpectrum(Function fn, std::optional<StableForm> stable)
    : fn_(std::move(fn)), stable_(stable)
{
    if (!fn_) {
        throw DomainError("LaplaceSpectrum: empty function");
    }
    if (stable_ && (!(stable_->scale >= 0.0) || !(stable_->index > 0.0 && stable_->index < 1.0))) {
        throw DomainError("LaplaceSpectrum: stable form needs scale >= 0 and index in (0,1)");
    }
}

LaplaceSpectrum LaplaceSpectrum::stable(double scale, double index)
{
    StableForm form{scale, index};
    return LaplaceSpectrum(
        [scale, index](std::complex<double> s) { return std::exp(-scale * std::pow(s, index)); },
        form);
}

bool LaplaceSpectrum::check_invariants(const ToleranceSpec& tol) const
{
    for (double s = 1e-12; s <= 1e12; s *= 10.0) {
        const double value = (*this)(s);
        if (!std::isfinite(value) || value < 0.0 || value > 1.0 + tol.rel_tol) {
            return false;
        }
        if (stable_) {
            const double exponent = stable_->scale * std::pow(s, stable_->index);
            // identity is only testable while F(s) has not underflowed
            if (exponent < 600.0 && std::abs(value * std::exp(exponent) - 1.0) > tol.rel_tol) {
                return false;
            }
        }
    }
    return true;
}

//---------------------------------------------------------------------------//

double talbot_invert(const std::function<std::complex<double>(std::complex<double>)>& g,
                     double t,
                     int nodes)
{
    if (!(t > 0.0)) {
        throw DomainError("talbot_invert: t must be > 0");
    }
    if (nodes < 2) {
        throw DomainError("talbot_invert: need at least two nodes");
    }
    const double r = 2.0 * nodes / (5.0 * t);
    double sum = 0.5 * (g(std::complex<double>(r, 0.0)) * std::exp(r * t)).real();
    for (int k = 1; k < nodes; ++k) {
        const double theta = k * kPi / nodes;
        const double cot = 1.0 / std::tan(theta);
        const std::complex<double> s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        const std::complex<double> term = std::exp(t * s) * g(s) * std::complex<double>(1.0, sigma);
        sum += term.real();
    }
    return r / nodes * sum;
}

std::optional<double> stable_cdf_series(double scale, double index, double tau)
{
    if (!(tau > 0.0)) {
        throw DomainError("stable_cdf_series: tau must be > 0");
    }
    if (!(index > 0.0 && index < 1.0) || !(scale >= 0.0)) {
        throw DomainError("stable_cdf_series: needs scale >= 0 and index in (0,1)");
    }
    if (scale == 0.0) {
        return 1.0;
    }
    const double z = scale * std::pow(tau, -index);
    const double log_z = std::log(z);
    double sum = 0.0;
    double largest = 0.0;
    double previous_log = -kInf;
    for (int k = 1; k < 5000; ++k) {
        const double log_mag = std::lgamma(k * index) - std::lgamma(k + 1.0) + k * log_z;
        const double mag = std::exp(log_mag);
        largest = std::max(largest, mag);
        if (largest > 1e3) {
            return std::nullopt;
        }
        sum += ((k % 2 == 1) ? 1.0 : -1.0) * mag * std::sin(k * kPi * index);
        // past the peak the terms decay super-exponentially
        if (log_mag < previous_log && mag < 1e-18) {
            return std::clamp(1.0 - sum / kPi, 0.0, 1.0);
        }
        previous_log = log_mag;
    }
    return std::nullopt;
}

double stable_cdf_integral(double scale, double index, double tau, const ToleranceSpec& tol)
{
    if (!(tau > 0.0)) {
        throw DomainError("stable_cdf_integral: tau must be > 0");
    }
    if (!(index > 0.0 && index < 1.0) || !(scale >= 0.0)) {
        throw DomainError("stable_cdf_integral: needs scale >= 0 and index in (0,1)");
    }
    if (scale == 0.0) {
        return 1.0;
    }
    const double d = index;
    // z^{1/(1-d)} in logs; large z drives everything to 0 without overflow
    const double log_lead = (std::log(scale) - d * std::log(tau)) / (1.0 - d);
    auto f = [&](double u) {
        const double log_k = (std::log(std::sin(d * u)) - std::log(std::sin(u))) / (1.0 - d)
                             + std::log(std::sin((1.0 - d) * u)) - std::log(std::sin(d * u));
        return std::exp(-std::exp(log_lead + log_k));
    };
    // relative accuracy matters for tiny CDF values, so no absolute floor
    const ToleranceSpec inner{1e-300, std::min(tol.rel_tol, 1e-12), tol.max_evals};
    return std::clamp(integrate(f, 0.0, kPi, inner) / kPi, 0.0, 1.0);
}

double inverse_laplace_cdf(const LaplaceSpectrum& spectrum,
                           double tau,
                           const ToleranceSpec& tol,
                           InversionMethod method)
{
    tol.validate();
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw DomainError("inverse_laplace_cdf: tau must be finite and > 0");
    }
    const auto& stable = spectrum.stable_form();
    if ((method == InversionMethod::stable_series || method == InversionMethod::stable_integral) && !stable) {
        throw DomainError("inverse_laplace_cdf: stable method requested for untagged spectrum");
    }
    if (stable && stable->scale == 0.0) {
        return 1.0;
    }
    if (method == InversionMethod::stable_integral) {
        return stable_cdf_integral(stable->scale, stable->index, tau, tol);
    }
    if (stable && method != InversionMethod::contour) {
        if (auto value = stable_cdf_series(stable->scale, stable->index, tau)) {
            return *value;
        }
        if (method == InversionMethod::stable_series) {
            throw AccuracyError("inverse_laplace_cdf: stable series ill-conditioned", kInf, kInf);
        }
        return stable_cdf_integral(stable->scale, stable->index, tau, tol);
    }

    auto cdf_transform = [&spectrum](std::complex<double> s) { return spectrum(s) / s; };
    // Accuracy peaks at moderate node counts and then decays as roundoff is
    // amplified, so the ladder is fine enough for neighbours to meet at the
    // peak. Doubling can jump straight past it.
    constexpr std::array<int, 8> kLadder = {8, 12, 16, 20, 24, 32, 48, 64};
    double previous = talbot_invert(cdf_transform, tau, kLadder[0]);
    double diff = kInf;
    double current = previous;
    for (std::size_t i = 1; i < kLadder.size(); ++i) {
        current = talbot_invert(cdf_transform, tau, kLadder[i]);
        if (!std::isfinite(current)) {
            throw AccuracyError("inverse_laplace_cdf: contour sum overflowed", previous, kInf);
        }
        diff = std::abs(current - previous);
        if (diff <= tol.target(std::abs(current))) {
            break;
        }
        previous = current;
    }
    if (!(diff <= tol.target(std::abs(current)))) {
        throw AccuracyError("inverse_laplace_cdf: contour sums did not settle", current, diff);
    }
    const double slack = std::max(10.0 * tol.abs_tol, 1e-9);
    if (current < -slack || current > 1.0 + slack) {
        throw AccuracyError("inverse_laplace_cdf: result outside [0,1]", current, diff);
    }
    return std::clamp(current, 0.0, 1.0);
}

}  // namespace iotact
