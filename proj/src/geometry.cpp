// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotact/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "iotact/errors.hpp"
#include "iotact/numerics.hpp"

namespace iotact {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
{
    std::uint64_t state = master_seed;
    std::uint64_t mixed = splitmix64(state) ^ stream_id;
    engine_.seed(splitmix64(mixed));
}

void WindowSpec::validate(bool allow_auto) const
{
    const bool radius_ok = (radius > 0.0 && std::isfinite(radius)) || (allow_auto && radius == 0.0);
    if (!radius_ok) {
        throw DomainError("WindowSpec: radius must be finite and > 0");
    }
    if (!(truncation_fraction > 0.0 && truncation_fraction <= 0.01)) {
        throw DomainError("WindowSpec: truncation_fraction must lie in (0, 0.01]");
    }
}

void FadingModel::validate() const
{
    if (!(m >= 0.5) || !std::isfinite(m)) {
        throw DomainError("FadingModel: m must be >= 0.5");
    }
}

PointField sample_ppp(double density, const WindowSpec& window, RngStream& rng)
{
    if (!(density > 0.0) || !std::isfinite(density)) {
        throw DomainError("sample_ppp: density must be finite and > 0");
    }
    window.validate();
    const double mean = density * kPi * window.radius * window.radius;
    if (mean > 1e8) {
        throw ResourceError("sample_ppp: expected point count exceeds 1e8");
    }
    PointField field;
    field.density = density;
    field.radius = window.radius;
    std::poisson_distribution<long long> count_dist(mean);
    const long long count = mean > 0.0 ? count_dist(rng.engine()) : 0;
    field.points.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
        const double r = window.radius * std::sqrt(rng.uniform());
        const double phi = 2.0 * kPi * rng.uniform();
        field.points.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
    return field;
}

std::vector<double> ordered_distances_sq(const PointField& field)
{
    std::vector<double> d2;
    d2.reserve(field.points.size());
    for (const auto& p : field.points) {
        d2.push_back(p.x * p.x + p.y * p.y);
    }
    std::stable_sort(d2.begin(), d2.end());
    return d2;
}

double sample_nearest_distance_sq(double lambda_b, RngStream& rng)
{
    if (!(lambda_b > 0.0)) {
        throw DomainError("sample_nearest_distance_sq: lambda_b must be > 0");
    }
    return rng.exponential(kPi * lambda_b);
}

double sample_kth_distance_sq(double lambda_b, int k, RngStream& rng)
{
    if (!(lambda_b > 0.0) || k < 1) {
        throw DomainError("sample_kth_distance_sq: need lambda_b > 0 and k >= 1");
    }
    std::gamma_distribution<double> dist(static_cast<double>(k), 1.0 / (kPi * lambda_b));
    return dist(rng.engine());
}

double sample_fading_gain(const FadingModel& model, RngStream& rng)
{
    if (model.m == 1.0) {
        return rng.exponential(1.0);
    }
    model.validate();
    std::gamma_distribution<double> dist(model.m, 1.0 / model.m);
    double h = dist(rng.engine());
    while (!(h > 0.0)) {
        h = dist(rng.engine());
    }
    return h;
}

//---------------------------------------------------------------------------//

namespace {

constexpr double kShape = 3.5;

// Negative binomial with shape 7/2 and odds r: the cell-load law.
double negative_binomial_pmf(long n, double r)
{
    if (n < 0) {
        throw DomainError("cell load pmf: n must be >= 0");
    }
    if (r == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double log_p = std::lgamma(n + kShape) - std::lgamma(n + 1.0) - std::lgamma(kShape)
                         + n * std::log(r) - (n + kShape) * std::log1p(r);
    return std::exp(log_p);
}

}  // namespace

double cell_load_pmf(long n, double lambda_d, double lambda_b)
{
    if (!(lambda_d > 0.0) || !(lambda_b > 0.0)) {
        throw DomainError("cell_load_pmf: densities must be > 0");
    }
    return negative_binomial_pmf(n, lambda_d / (kShape * lambda_b));
}

double activated_cell_load_pmf(long n, double lambda_d, double lambda_b, double eta_a)
{
    if (!(lambda_d > 0.0) || !(lambda_b > 0.0)) {
        throw DomainError("activated_cell_load_pmf: densities must be > 0");
    }
    if (!(eta_a >= 0.0 && eta_a <= 1.0)) {
        throw DomainError("activated_cell_load_pmf: eta_a must lie in [0,1]");
    }
    return negative_binomial_pmf(n, eta_a * lambda_d / (kShape * lambda_b));
}

std::vector<double> activated_cell_load_table(double lambda_d,
                                              double lambda_b,
                                              double eta_a,
                                              double tail_tol)
{
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
        throw DomainError("activated_cell_load_table: tail_tol must lie in (0,1)");
    }
    std::vector<double> table;
    double total = 0.0;
    for (long n = 0; total < 1.0 - tail_tol; ++n) {
        if (n > 100000000L) {
            throw ResourceError("activated_cell_load_table: tail too heavy to truncate");
        }
        const double p = activated_cell_load_pmf(n, lambda_d, lambda_b, eta_a);
        table.push_back(p);
        total += p;
    }
    return table;
}

}  // namespace iotact
