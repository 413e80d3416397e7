// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotact/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iotact/errors.hpp"
#include "iotact/uplink.hpp"

namespace iotact {

namespace {

constexpr std::uint64_t kChunk = 2048;
constexpr std::uint64_t kActivationStreams = 1ULL << 40;
constexpr std::uint64_t kUplinkStreams = 2ULL << 40;

// r^{-alpha} from r^2; alpha = 4 is the common case and pow dominates the trial
inline double path_gain(double dist_sq, double alpha)
{
    return alpha == 4.0 ? 1.0 / (dist_sq * dist_sq) : std::pow(dist_sq, -0.5 * alpha);
}

// Runs trial(rng, index) for every index, each on its own substream. Chunks
// are the unit of scheduling only; results must be written by index.
template<class Trial>
void for_each_trial(const McConfig& mc, std::uint64_t stream_base, Trial&& trial)
{
    const auto chunks = static_cast<std::int64_t>((mc.trials + kChunk - 1) / kChunk);
    auto run_chunk = [&](std::int64_t c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t end = std::min(mc.trials, begin + kChunk);
        for (std::uint64_t i = begin; i < end; ++i) {
            RngStream rng(mc.master_seed, stream_base + i);
            trial(rng, i);
        }
    };
    if (mc.execution == Execution::serial) {
        for (std::int64_t c = 0; c < chunks; ++c) {
            run_chunk(c);
        }
        return;
    }
    const int threads = mc.workers > 0 ? mc.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t c = 0; c < chunks; ++c) {
        run_chunk(c);
    }
}

struct ActivationModel
{
    double pil;          // pi lambda_b
    double mu;
    double alpha;
    int K;
    FadingModel fading;
    PowerControlLaw law;
    NetworkParams params;
    double radius_sq;
    double far_field;    // mean of the omitted interference
};

double window_radius_for(const NetworkParams& params, double beta, double fraction, double level)
{
    const double omitted_scale = 2.0 * kPi * params.lambda_b * params.mu * mean_downlink_power(beta, params)
                                 / (params.alpha - 2.0);
    return std::pow(omitted_scale / (fraction * level), 1.0 / (params.alpha - 2.0));
}

// level is the interference scale the omitted mean must be small against;
// 0 means theta_a.
ActivationModel make_activation_model(const NetworkParams& params,
                                      int K,
                                      double beta,
                                      const WindowSpec& window,
                                      bool compensate,
                                      double level = 0.0)
{
    params.validate();
    window.validate(true);
    if (K < 1) {
        throw DomainError("activation simulation: K must be >= 1");
    }
    ActivationModel model{kPi * params.lambda_b, params.mu, params.alpha, K, FadingModel{params.m},
                          PowerControlLaw::downlink(beta, params), params, 0.0, 0.0};
    model.law.validate(params.alpha);
    const double derived =
        window_radius_for(params, beta, window.truncation_fraction, level > 0.0 ? level : params.theta_a);
    double radius = derived;
    if (window.radius > 0.0) {
        if (window.radius < derived) {
            throw ConfigError("activation window radius below the truncation bound (need >= "
                              + std::to_string(derived) + " m)");
        }
        radius = window.radius;
    }
    model.radius_sq = radius * radius;
    if (compensate) {
        model.far_field = 2.0 * kPi * params.lambda_b * params.mu * mean_downlink_power(beta, params)
                          * std::pow(radius, 2.0 - params.alpha) / (params.alpha - 2.0);
    }
    return model;
}

// Radial arrivals r_k^2 = Gamma_k / (pi lambda_b). Draws per BS are fixed
// (activity, fading, power mark) so a trial's stream does not depend on K.
// stop_at > 0 ends the walk once the interference alone reaches it.
ActivationSnapshot activation_trial(const ActivationModel& model, RngStream& rng, double stop_at)
{
    ActivationSnapshot out;
    double r2 = 0.0;
    bool shared = false;
    for (int k = 1;; ++k) {
        r2 += rng.exponential(model.pil);
        if (r2 > model.radius_sq && k > model.K) {
            break;
        }
        const bool active = rng.bernoulli(model.mu);
        const double h = sample_fading_gain(model.fading, rng);
        const double mark = rng.exponential(model.pil);
        if (k == 1) {
            shared = active;
        }
        const double power = model.law.exponent == 0.0 ? model.law.reference_power
                                                       : power_from_distance_sq(model.law, mark, model.params);
        const double g = power * h * path_gain(r2, model.alpha);
        if (k <= model.K) {
            out.desired += g;
        } else if (active) {
            out.interference += g;
            if (stop_at > 0.0 && out.interference >= stop_at) {
                break;
            }
        }
    }
    out.interference += model.far_field;
    out.serving_active = shared;
    out.w = (shared ? out.desired : 0.0) + out.interference;
    return out;
}

}  // namespace

//---------------------------------------------------------------------------//

void McConfig::validate() const
{
    if (trials < 100) {
        throw ConfigError("McConfig: trials must be >= 100");
    }
    try {
        window.validate(true);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    confidence_z(confidence);
    if (workers < 0) {
        throw ConfigError("McConfig: workers must be >= 0");
    }
}

double confidence_z(double confidence)
{
    if (confidence == 0.9) {
        return 1.6448536269514722;
    }
    if (confidence == 0.95) {
        return 1.959963984540054;
    }
    if (confidence == 0.99) {
        return 2.5758293035489004;
    }
    throw ConfigError("confidence must be one of 0.9, 0.95, 0.99");
}

McEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials, double confidence, std::string tag)
{
    if (trials == 0) {
        throw EstimationError("bernoulli_estimate: no trials");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    McEstimate e;
    e.mean = p;
    e.std_error = std::sqrt(p * (1.0 - p) / n);
    e.trials = trials;
    const double half = confidence_z(confidence) * e.std_error;
    e.ci_low = p - half;
    e.ci_high = p + half;
    e.tag = std::move(tag);
    return e;
}

McEstimate sample_mean_estimate(const std::vector<double>& values, double confidence, std::string tag)
{
    if (values.empty()) {
        throw DomainError("sample_mean_estimate: empty input");
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    McEstimate e;
    e.mean = mean;
    e.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    e.trials = values.size();
    const double half = confidence_z(confidence) * e.std_error;
    e.ci_low = mean - half;
    e.ci_high = mean + half;
    e.tag = std::move(tag);
    return e;
}

//---------------------------------------------------------------------------//

double activation_window_radius(const NetworkParams& params, double beta, double fraction)
{
    params.validate();
    if (!(fraction > 0.0)) {
        throw DomainError("activation_window_radius: fraction must be > 0");
    }
    return window_radius_for(params, beta, fraction, params.theta_a);
}

ActivationSnapshot simulate_activation_snapshot(const NetworkParams& params,
                                                int K,
                                                double beta,
                                                const WindowSpec& window,
                                                RngStream& rng,
                                                bool far_field_compensation)
{
    const auto model = make_activation_model(params, K, beta, window, far_field_compensation);
    return activation_trial(model, rng, 0.0);
}

double ActivationEstimate::decomposition_score(double mu, double confidence) const
{
    const double gap = eta_a.mean - (mu * p_a.mean + (1.0 - mu) * q_a.mean);
    const double se = std::sqrt(eta_a.std_error * eta_a.std_error + mu * mu * p_a.std_error * p_a.std_error
                                + (1.0 - mu) * (1.0 - mu) * q_a.std_error * q_a.std_error);
    if (se == 0.0) {
        return gap == 0.0 ? 0.0 : kInf;
    }
    return std::abs(gap) / (confidence_z(confidence) * se);
}

ActivationEstimate estimate_activation_probs(const NetworkParams& params, int K, double beta, const McConfig& mc)
{
    mc.validate();
    ActivationEstimate out;
    if (params.theta_a == 0.0) {
        // W >= 0 always reaches a zero threshold
        NetworkParams probe = params;
        probe.theta_a = 1.0;
        probe.validate();
        out.q_a = bernoulli_estimate(mc.trials, mc.trials, mc.confidence, "mc");
        out.p_a = out.q_a;
        out.eta_a = out.q_a;
        return out;
    }
    const auto model = make_activation_model(params, K, beta, mc.window, mc.far_field_compensation);
    out.window_radius = std::sqrt(model.radius_sq);
    const double theta = params.theta_a;
    std::vector<std::uint8_t> hits(mc.trials, 0);
    for_each_trial(mc, kActivationStreams, [&](RngStream& rng, std::uint64_t i) {
        const auto snap = activation_trial(model, rng, theta);
        hits[i] = static_cast<std::uint8_t>((snap.interference >= theta ? 1 : 0)
                                            | (snap.desired + snap.interference >= theta ? 2 : 0)
                                            | (snap.w >= theta ? 4 : 0));
    });
    std::uint64_t q = 0;
    std::uint64_t p = 0;
    std::uint64_t eta = 0;
    for (auto h : hits) {
        q += h & 1;
        p += (h >> 1) & 1;
        eta += (h >> 2) & 1;
    }
    out.q_a = bernoulli_estimate(q, mc.trials, mc.confidence, "mc");
    out.p_a = bernoulli_estimate(p, mc.trials, mc.confidence, "mc");
    out.eta_a = bernoulli_estimate(eta, mc.trials, mc.confidence, "mc");
    return out;
}

std::vector<double> sample_interference(const NetworkParams& params, int K, double beta, const McConfig& mc)
{
    mc.validate();
    const auto model = make_activation_model(params, K, beta, mc.window, mc.far_field_compensation);
    std::vector<double> out(mc.trials, 0.0);
    for_each_trial(mc, kActivationStreams, [&](RngStream& rng, std::uint64_t i) {
        out[i] = activation_trial(model, rng, 0.0).interference;
    });
    return out;
}

McEstimate empirical_laplace(const std::vector<double>& samples, double s, double confidence)
{
    if (samples.empty()) {
        throw DomainError("empirical_laplace: empty sample");
    }
    if (!(s >= 0.0)) {
        throw DomainError("empirical_laplace: s must be >= 0");
    }
    std::vector<double> values(samples.size());
    std::transform(samples.begin(), samples.end(), values.begin(), [s](double x) {
        if (x < 0.0) {
            throw DomainError("empirical_laplace: samples must be >= 0");
        }
        return s == 0.0 ? 1.0 : std::exp(-s * x);
    });
    return sample_mean_estimate(values, confidence, "mc");
}

std::vector<double> default_epsilon_grid(const NetworkParams& params, double beta, int points)
{
    if (points < 2) {
        throw DomainError("default_epsilon_grid: need at least two points");
    }
    // base(s) = exp(-c s^delta); solve for base = 0.95 and 0.05
    const double c = -std::log(coordinated_base_laplace(1.0, params, beta));
    const double delta = params.delta();
    const double lo = std::pow(-std::log(0.95) / c, 1.0 / delta);
    const double hi = std::pow(-std::log(0.05) / c, 1.0 / delta);
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    }
    return grid;
}

EpsilonEstimate fit_epsilon(const std::vector<double>& s_grid,
                            const std::vector<double>& laplace_hat,
                            const std::vector<double>& base_exponent,
                            int K,
                            double mu)
{
    if (s_grid.size() != laplace_hat.size() || s_grid.size() != base_exponent.size()) {
        throw DomainError("fit_epsilon: grid and data sizes differ");
    }
    if (K < 1 || !(mu > 0.0 && mu < 1.0)) {
        throw DomainError("fit_epsilon: need K >= 1 and mu in (0,1)");
    }
    EpsilonEstimate fit;
    fit.K = K;
    fit.s_grid = s_grid;
    // y(s) = log Lhat + A = -K log(1 - mu eps) under the model
    std::vector<double> y;
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (laplace_hat[i] > 0.0) {
            y.push_back(std::log(laplace_hat[i]) + base_exponent[i]);
        }
    }
    if (y.size() < 2) {
        throw EstimationError("fit_epsilon: fewer than two usable transform values");
    }
    if (K * mu < 1e-6) {
        fit.degenerate = true;
    }
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double eps = -std::expm1(-mean_y / K) / mu;
    const double upper = 1.0 - 1e-9;
    if (eps <= 0.0 || fit.degenerate) {
        eps = 0.0;
        fit.at_boundary = !fit.degenerate;
    } else if (eps >= upper) {
        eps = upper;
        fit.at_boundary = true;
    }
    const double level = -K * std::log1p(-mu * eps);
    for (double v : y) {
        fit.residual += (v - level) * (v - level);
    }
    fit.eps_K = eps;
    return fit;
}

namespace {

// The far-field offset shifts log Lhat(s) by s times the omitted mean, so for
// the fit the window must also be wide against 1 / max(s). At low density
// theta_a alone is far too coarse a reference.
double fit_level(const NetworkParams& params, const std::vector<double>& s_grid)
{
    const double s_max = *std::max_element(s_grid.begin(), s_grid.end());
    return std::min(params.theta_a, 1.0 / s_max);
}

EpsilonEstimate fit_from_samples(const NetworkParams& params,
                                 int K,
                                 double beta,
                                 const McConfig& mc,
                                 const std::vector<double>& samples,
                                 const std::vector<double>& s_grid)
{
    std::vector<double> hat;
    std::vector<double> exponent;
    for (double s : s_grid) {
        hat.push_back(empirical_laplace(samples, s, mc.confidence).mean);
        exponent.push_back(-std::log(coordinated_base_laplace(s, params, beta)));
    }
    return fit_epsilon(s_grid, hat, exponent, K, params.mu);
}

}  // namespace

EpsilonEstimate estimate_epsilon_K(const NetworkParams& params,
                                   int K,
                                   double beta,
                                   const McConfig& mc,
                                   std::vector<double> s_grid)
{
    mc.validate();
    if (s_grid.empty()) {
        s_grid = default_epsilon_grid(params, beta);
    }
    const auto model =
        make_activation_model(params, K, beta, mc.window, mc.far_field_compensation, fit_level(params, s_grid));
    std::vector<double> samples(mc.trials, 0.0);
    for_each_trial(mc, kActivationStreams, [&](RngStream& rng, std::uint64_t i) {
        samples[i] = activation_trial(model, rng, 0.0).interference;
    });
    return fit_from_samples(params, K, beta, mc, samples, s_grid);
}

CoordinatedMcResult estimate_coordinated(const NetworkParams& params,
                                         int K,
                                         double beta,
                                         const McConfig& mc,
                                         std::vector<double> s_grid)
{
    mc.validate();
    if (s_grid.empty()) {
        s_grid = default_epsilon_grid(params, beta);
    }
    const auto model =
        make_activation_model(params, K, beta, mc.window, mc.far_field_compensation, fit_level(params, s_grid));
    const double theta = params.theta_a;
    std::vector<double> interference(mc.trials, 0.0);
    std::vector<std::uint8_t> hits(mc.trials, 0);
    for_each_trial(mc, kActivationStreams, [&](RngStream& rng, std::uint64_t i) {
        const auto snap = activation_trial(model, rng, 0.0);
        interference[i] = snap.interference;
        hits[i] = static_cast<std::uint8_t>((snap.interference >= theta ? 1 : 0)
                                            | (snap.desired + snap.interference >= theta ? 2 : 0)
                                            | (snap.w >= theta ? 4 : 0));
    });
    std::uint64_t q = 0;
    std::uint64_t p = 0;
    std::uint64_t eta = 0;
    for (auto h : hits) {
        q += h & 1;
        p += (h >> 1) & 1;
        eta += (h >> 2) & 1;
    }
    CoordinatedMcResult out;
    out.probs.q_a = bernoulli_estimate(q, mc.trials, mc.confidence, "mc");
    out.probs.p_a = bernoulli_estimate(p, mc.trials, mc.confidence, "mc");
    out.probs.eta_a = bernoulli_estimate(eta, mc.trials, mc.confidence, "mc");
    out.probs.window_radius = std::sqrt(model.radius_sq);
    out.eps = fit_from_samples(params, K, beta, mc, interference, s_grid);
    return out;
}

//---------------------------------------------------------------------------//

namespace {

struct UplinkModel
{
    NetworkParams params;
    PowerControlLaw law;
    FadingModel fading;
    double pil_b;         // pi lambda_b, for the power marks
    double pil_i;         // pi x interferer density
    double mean_power;    // E[Q]
    double fraction;
    double fixed_radius;  // > 0 when the caller fixed the window
    bool compensate;
};

UplinkModel make_uplink_model(const NetworkParams& params,
                              double nu,
                              double eta_a,
                              const WindowSpec& window,
                              bool compensate)
{
    params.validate();
    window.validate(true);
    if (!(eta_a >= 0.0 && eta_a <= 1.0)) {
        throw DomainError("uplink simulation: eta_a must lie in [0,1]");
    }
    UplinkModel model{params,
                      PowerControlLaw::uplink(nu, params),
                      FadingModel{params.m},
                      kPi * params.lambda_b,
                      kPi * params.rho * eta_a * params.lambda_d,
                      mean_uplink_power(nu, params),
                      window.truncation_fraction,
                      window.radius,
                      compensate};
    model.law.validate(params.alpha);
    return model;
}

// SIR at the serving BS. With early_exit the walk stops once the interference
// exceeds signal / theta_c, so the returned value is exact only as an indicator.
double uplink_trial(const UplinkModel& model, RngStream& rng, bool early_exit)
{
    const double alpha = model.params.alpha;
    const double d2 = rng.exponential(model.pil_b);
    const double h = sample_fading_gain(model.fading, rng);
    const double signal = power_from_distance_sq(model.law, d2, model.params) * h * path_gain(d2, alpha);
    if (model.pil_i == 0.0) {
        return kInf;
    }
    const double level = signal / model.params.theta_c;
    // omitted mean 2 lambda_I pi E[Q] R^{2-a} / (a-2) kept at fraction * level
    double radius_sq = model.fixed_radius * model.fixed_radius;
    if (model.fixed_radius == 0.0) {
        const double scale = 2.0 * model.pil_i * model.mean_power / (alpha - 2.0);
        radius_sq = std::pow(scale / (model.fraction * level), 2.0 / (alpha - 2.0));
    }
    double interference = 0.0;
    double r2 = 0.0;
    while (true) {
        r2 += rng.exponential(model.pil_i);
        if (r2 > radius_sq) {
            break;
        }
        const double g = sample_fading_gain(model.fading, rng);
        const double mark = rng.exponential(model.pil_b);
        interference += power_from_distance_sq(model.law, mark, model.params) * g * path_gain(r2, alpha);
        if (early_exit && interference > level) {
            return signal / interference;
        }
    }
    if (model.compensate) {
        interference += 2.0 * model.pil_i * model.mean_power * std::pow(radius_sq, 1.0 - 0.5 * alpha)
                        / (alpha - 2.0);
    }
    return interference > 0.0 ? signal / interference : kInf;
}

}  // namespace

double simulate_uplink_sir(const NetworkParams& params,
                           double nu,
                           double eta_a,
                           const WindowSpec& window,
                           RngStream& rng,
                           bool far_field_compensation)
{
    const auto model = make_uplink_model(params, nu, eta_a, window, far_field_compensation);
    return uplink_trial(model, rng, false);
}

McEstimate estimate_uplink_coverage(const NetworkParams& params,
                                    double nu,
                                    double eta_a,
                                    double theta_c,
                                    const McConfig& mc)
{
    mc.validate();
    NetworkParams local = params;
    local.theta_c = theta_c;
    const auto model = make_uplink_model(local, nu, eta_a, mc.window, mc.far_field_compensation);
    std::vector<std::uint8_t> covered(mc.trials, 0);
    for_each_trial(mc, kUplinkStreams, [&](RngStream& rng, std::uint64_t i) {
        covered[i] = uplink_trial(model, rng, true) >= theta_c ? 1 : 0;
    });
    const auto hits = std::accumulate(covered.begin(), covered.end(), std::uint64_t{0});
    return bernoulli_estimate(hits, mc.trials, mc.confidence, "mc");
}

}  // namespace iotact
