// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

//! \file numerics.hpp
//! Special functions, adaptive quadrature and numerical inversion of Laplace
//! transforms. Everything here is pure and reentrant.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "iotact/errors.hpp"

namespace iotact {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ToleranceSpec
{
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_evals = 200000;

    void validate() const;

    double target(double magnitude) const { return std::max(abs_tol, rel_tol * magnitude); }
};

/// Γ(x). Throws DomainError at the poles x = 0, -1, -2, ...
double gamma_fn(double x);

/// Error function restricted to z >= 0.
double erf(double z);
double erfc(double z);

//---------------------------------------------------------------------------//
// Adaptive Gauss-Kronrod quadrature
//---------------------------------------------------------------------------//

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// 7-point Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template<class V>
struct Segment
{
    double a;
    double b;
    V value;
    double error;
};

template<class V, class F>
Segment<V> gauss_kronrod_15(F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const V fc = f(center);
    V kronrod = fc * kKronrodWeights[7];
    V gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const V f1 = f(center - dx);
        const V f2 = f(center + dx);
        kronrod += (f1 + f2) * kKronrodWeights[j];
        if (j % 2 == 1) {
            gauss += (f1 + f2) * kGaussWeights[j / 2];
        }
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

template<class V>
double magnitude(const V& v)
{
    return std::abs(v);
}

template<class V>
double real_part(const V& v)
{
    if constexpr (std::is_same_v<V, double>) {
        return v;
    } else {
        return v.real();
    }
}

template<class V, class F>
V integrate_finite(F& f, double lower, double upper, const ToleranceSpec& tol)
{
    auto by_error = [](const Segment<V>& x, const Segment<V>& y) { return x.error < y.error; };
    std::vector<Segment<V>> heap;
    heap.push_back(gauss_kronrod_15<V>(f, lower, upper));
    int evals = 15;
    V total = heap.front().value;
    double total_error = heap.front().error;

    while (true) {
        if (!std::isfinite(magnitude(total)) || !std::isfinite(total_error)) {
            throw AccuracyError("integrate: non-finite integrand", real_part(total), total_error, magnitude(total));
        }
        if (total_error <= tol.target(magnitude(total))) {
            // re-sum to shed drift from the running updates
            V exact_total{};
            double exact_error = 0.0;
            for (const auto& s : heap) {
                exact_total += s.value;
                exact_error += s.error;
            }
            total = exact_total;
            total_error = exact_error;
            if (total_error <= tol.target(magnitude(total))) {
                return total;
            }
        }
        if (evals + 30 > tol.max_evals) {
            throw AccuracyError("integrate: evaluation budget exhausted", real_part(total), total_error,
                                magnitude(total));
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Segment<V> worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw AccuracyError("integrate: interval collapsed below machine resolution",
                                real_part(total), total_error, magnitude(total));
        }
        const auto left = gauss_kronrod_15<V>(f, worst.a, mid);
        const auto right = gauss_kronrod_15<V>(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
    }
}

}  // namespace detail

/// Adaptive G7-K15 quadrature of f over [lower, upper]. upper may be +inf, in
/// which case u = lower - ln(v) maps the range onto (0, 1]. f may return
/// double or std::complex<double>.
///
/// Throws AccuracyError (with the best estimate) when the error bound
/// max(abs_tol, rel_tol * |result|) is not met within tol.max_evals.
template<class F>
auto integrate(F&& f, double lower, double upper, const ToleranceSpec& tol = {})
{
    using V = std::decay_t<std::invoke_result_t<F&, double>>;
    tol.validate();
    if (std::isnan(lower) || std::isnan(upper) || std::isinf(lower)) {
        throw DomainError("integrate: lower limit must be finite");
    }
    if (lower == upper) {
        return V{};
    }
    if (upper < lower) {
        return V(-integrate(std::forward<F>(f), upper, lower, tol));
    }
    if (std::isinf(upper)) {
        auto mapped = [&f, lower](double v) -> V { return f(lower - std::log(v)) / v; };
        return detail::integrate_finite<V>(mapped, 0.0, 1.0, tol);
    }
    return detail::integrate_finite<V>(f, lower, upper, tol);
}

//---------------------------------------------------------------------------//
// Laplace spectra and their inversion
//---------------------------------------------------------------------------//

/// F(s) = exp(-scale * s^index), the transform of a one-sided stable law.
struct StableForm
{
    double scale;  // c >= 0
    double index;  // delta in (0, 1)
};

/// Laplace transform F(s) of a probability measure on [0, inf), evaluable on
/// the cut plane C \ (-inf, 0]. Optionally tagged with its stable form.
class LaplaceSpectrum
{
  public:
    using Function = std::function<std::complex<double>(std::complex<double>)>;

    explicit LaplaceSpectrum(Function fn, std::optional<StableForm> stable = std::nullopt);

    /// exp(-scale * s^index)
    static LaplaceSpectrum stable(double scale, double index);

    std::complex<double> operator()(std::complex<double> s) const { return fn_(s); }
    double operator()(double s) const { return fn_(std::complex<double>(s, 0.0)).real(); }

    const std::optional<StableForm>& stable_form() const noexcept { return stable_; }

    /// Positivity/finiteness on a log grid of real s, plus the stable-form
    /// identity F(s) exp(c s^delta) = 1 when tagged.
    bool check_invariants(const ToleranceSpec& tol = {}) const;

  private:
    Function fn_;
    std::optional<StableForm> stable_;
};

enum class InversionMethod
{
    automatic,       // tagged: series if well-conditioned, else the stable integral; untagged: contour
    contour,         // fixed Talbot contour
    stable_series,   // one-sided stable CDF series; DomainError if untagged
    stable_integral  // Kanter's real integral; DomainError if untagged
};

/// Fixed-Talbot inversion of G(s) at t > 0 with a given node count.
double talbot_invert(const std::function<std::complex<double>(std::complex<double>)>& g,
                     double t,
                     int nodes);

/// CDF of the one-sided stable law exp(-c s^delta) at tau via its convergent
/// power series in c tau^{-delta}. Returns nullopt when cancellation in the
/// series would cost more than ~1e-12 absolute accuracy.
std::optional<double> stable_cdf_series(double scale, double index, double tau);

/// CDF of the one-sided stable law exp(-c s^delta) at tau from Kanter's
/// representation, (1/pi) ∫_0^pi exp(-z^{1/(1-delta)} K(u)) du with
/// z = c tau^{-delta}. The integrand lies in [0,1] for every z, so this stays
/// accurate deep in the left tail where the series and the contour break down.
double stable_cdf_integral(double scale, double index, double tau, const ToleranceSpec& tol = {});

/// ∫_0^tau L^{-1}{F}(t) dt = L^{-1}{F(s)/s}(tau), the CDF at tau of the
/// measure whose transform is F. Contour node counts climb 8, 12, 16, 20, 24,
/// 32, 48, 64 until two neighbours agree within tol. Roundoff grows like
/// e^{2M/5}, which puts the useful floor near 1e-11.
double inverse_laplace_cdf(const LaplaceSpectrum& spectrum,
                           double tau,
                           const ToleranceSpec& tol = {},
                           InversionMethod method = InversionMethod::automatic);

}  // namespace iotact
