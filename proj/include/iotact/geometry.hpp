// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

//! \file geometry.hpp
//! Random streams, Poisson fields, distance and fading laws, cell-load PMFs.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace iotact {

/// One step of the splitmix64 generator; advances state.
std::uint64_t splitmix64(std::uint64_t& state);

/// A 64-bit Mersenne Twister seeded from (master, stream) through splitmix64,
/// so distinct stream ids give statistically independent sequences.
class RngStream
{
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::mt19937_64& engine() noexcept { return engine_; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Exponential with the given rate.
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::mt19937_64 engine_;
};

struct WindowSpec
{
    double radius = 0.0;                // meters; 0 asks the caller to derive it
    double truncation_fraction = 0.01;  // bound on omitted far-field mean

    /// radius > 0 (or == 0 when allow_auto) and fraction in (0, 0.01].
    void validate(bool allow_auto = false) const;
};

struct Point
{
    double x;
    double y;
};

struct PointField
{
    std::vector<Point> points;
    double density = 0.0;
    double radius = 0.0;
};

struct FadingModel
{
    double m = 1.0;  // Nakagami shape; power gain ~ Gamma(m, rate m)

    void validate() const;
};

/// Homogeneous PPP in the disk of window.radius centred at the origin.
/// Throws ResourceError when the mean count exceeds 1e8.
PointField sample_ppp(double density, const WindowSpec& window, RngStream& rng);

/// Squared norms of the field's points in increasing order (stable sort).
std::vector<double> ordered_distances_sq(const PointField& field);

/// ||X_1||^2 ~ Exp(rate pi lambda_b).
double sample_nearest_distance_sq(double lambda_b, RngStream& rng);

/// ||X_k||^2 ~ Gamma(k, rate pi lambda_b).
double sample_kth_distance_sq(double lambda_b, int k, RngStream& rng);

/// Exact Gamma(m, rate m) draw; m = 1 uses the exponential directly.
double sample_fading_gain(const FadingModel& model, RngStream& rng);

/// Probability that a cell holds n devices (gamma-approximated cell area).
double cell_load_pmf(long n, double lambda_d, double lambda_b);

/// Probability that n devices in a cell are activated; the activated devices
/// form a PPP of density eta_a lambda_d.
double activated_cell_load_pmf(long n, double lambda_d, double lambda_b, double eta_a);

/// PMF terms n = 0, 1, ... up to the first N whose cumulative mass reaches
/// 1 - tail_tol.
std::vector<double> activated_cell_load_table(double lambda_d,
                                              double lambda_b,
                                              double eta_a,
                                              double tail_tol = 1e-12);

}  // namespace iotact
