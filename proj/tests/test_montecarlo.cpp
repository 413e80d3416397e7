// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iotact/montecarlo.hpp"
#include "iotact/uplink.hpp"

using namespace iotact;
using doctest::Approx;

namespace {

McConfig small(std::uint64_t trials, std::uint64_t seed = 1)
{
    McConfig mc;
    mc.trials = trials;
    mc.master_seed = seed;
    return mc;
}

bool within(const McEstimate& e, double target, double k = 3.0)
{
    return std::abs(e.mean - target) <= k * e.std_error;
}

}  // namespace

TEST_CASE("estimates and confidence intervals")
{
    CHECK(confidence_z(0.95) == Approx(1.959963984540054));
    CHECK_THROWS_AS(confidence_z(0.8), ConfigError);
    const auto e = bernoulli_estimate(30, 100, 0.95, "x");
    CHECK(e.mean == 0.3);
    CHECK(e.ci_low <= e.mean);
    CHECK(e.mean <= e.ci_high);
    CHECK(e.std_error == Approx(std::sqrt(0.21 / 100)));
    CHECK(e.tag == "x");
    CHECK_THROWS_AS(bernoulli_estimate(0, 0, 0.95, ""), EstimationError);
    CHECK_THROWS_AS(sample_mean_estimate({}, 0.95, ""), DomainError);

    McConfig mc;
    mc.trials = 99;
    CHECK_THROWS_AS(mc.validate(), ConfigError);
    mc.trials = 100;
    CHECK_NOTHROW(mc.validate());
    mc.confidence = 0.5;
    CHECK_THROWS_AS(mc.validate(), ConfigError);
}

TEST_CASE("CI calibration on a Bernoulli(0.3) stream")
{
    int covered = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        RngStream rng(77, static_cast<std::uint64_t>(r));
        std::uint64_t hits = 0;
        for (int i = 0; i < 1000; ++i) {
            hits += rng.bernoulli(0.3) ? 1 : 0;
        }
        const auto e = bernoulli_estimate(hits, 1000, 0.95, "mc");
        covered += (e.ci_low <= 0.3 && 0.3 <= e.ci_high) ? 1 : 0;
    }
    CHECK(std::abs(covered / double(reps) - 0.95) <= 0.02);
}

TEST_CASE("empirical_laplace")
{
    CHECK(empirical_laplace({0.0, 0.0, 0.0}, 2.0).mean == 1.0);
    CHECK(empirical_laplace({1.0, 5.0}, 0.0).mean == 1.0);
    CHECK_THROWS_AS(empirical_laplace({}, 1.0), DomainError);
    CHECK_THROWS_AS(empirical_laplace({-1.0}, 1.0), DomainError);
    RngStream rng(1, 1);
    std::vector<double> x(100000);
    for (auto& v : x) {
        v = rng.exponential(1.0);
    }
    CHECK(within(empirical_laplace(x, 1.0), 0.5));
}

TEST_CASE("activation snapshots")
{
    NetworkParams p;
    p.mu = 1.0 - 1e-12;
    RngStream rng(4, 0);
    for (int i = 0; i < 200; ++i) {
        CHECK(simulate_activation_snapshot(NetworkParams{}.with_lambda_b(8e-5), 1, 0.0, WindowSpec{0.0, 0.01}, rng)
                  .w
              > 0.0);
        CHECK(simulate_activation_snapshot(p, 2, 0.0, WindowSpec{0.0, 0.01}, rng).serving_active);
    }
    // compensation adds exactly the omitted far-field mean
    NetworkParams q;
    const WindowSpec w{0.0, 0.01};
    const double R = activation_window_radius(q, 0.0, 0.01);
    RngStream a(5, 3);
    RngStream b(5, 3);
    const auto with = simulate_activation_snapshot(q, 1, 0.0, w, a, true);
    const auto without = simulate_activation_snapshot(q, 1, 0.0, w, b, false);
    const double tail = 2.0 * kPi * q.lambda_b * q.mu * q.p_bar * std::pow(R, 2.0 - q.alpha) / (q.alpha - 2.0);
    CHECK(with.interference - without.interference == Approx(tail).epsilon(1e-9));
    CHECK(tail == Approx(0.01 * q.theta_a).epsilon(1e-12));
    // explicit window smaller than the bound
    RngStream c(5, 4);
    CHECK_THROWS_AS(simulate_activation_snapshot(q, 1, 0.0, WindowSpec{R / 2, 0.01}, c), ConfigError);
    CHECK_THROWS_AS(simulate_activation_snapshot(q, 0, 0.0, w, c), DomainError);
}

TEST_CASE("Campbell mean of an annulus of active BSs")
{
    // E[sum P H r^-a] over r in [r0, R] = 2 pi lambda mu P (r0^{2-a} - R^{2-a}) / (a - 2)
    NetworkParams p;
    const double r0 = 50.0;
    const WindowSpec w{800.0, 0.01};
    RngStream rng(8, 0);
    const FadingModel fading{1.0};
    const int n = 20000;
    double s = 0.0;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& pt : sample_ppp(p.lambda_b, w, rng).points) {
            const double r2 = pt.x * pt.x + pt.y * pt.y;
            const bool active = rng.bernoulli(p.mu);
            const double h = sample_fading_gain(fading, rng);
            if (active && r2 >= r0 * r0) {
                sum += p.p_bar * h / (r2 * r2);
            }
        }
        s += sum;
        ss += sum * sum;
    }
    const double mean = s / n;
    const double se = std::sqrt((ss / n - mean * mean) / n);
    const double want = 2.0 * kPi * p.lambda_b * p.mu * p.p_bar * (1.0 / (r0 * r0) - 1.0 / (800.0 * 800.0)) / 2.0;
    CHECK(std::abs(mean - want) <= 3.0 * se);
}

TEST_CASE("empirical transform of W matches the analytic one")
{
    NetworkParams p;
    const auto mc = small(100000, 21);
    // W for K = 1 is D + I when the serving BS is active; rebuild it per trial
    const auto model_w = [&] {
        std::vector<double> w(mc.trials);
        const WindowSpec window{0.0, 0.01};
        for (std::uint64_t i = 0; i < mc.trials; ++i) {
            RngStream rng(mc.master_seed, (1ULL << 40) + i);
            w[i] = simulate_activation_snapshot(p, 1, 0.0, window, rng).w;
        }
        return w;
    }();
    for (double s : default_epsilon_grid(p, 0.0, 6)) {
        CHECK(within(empirical_laplace(model_w, s), laplace_W(s, p)));
    }
}

TEST_CASE("activation probabilities")
{
    NetworkParams p;
    NetworkParams zero = p;
    zero.theta_a = 0.0;
    const auto all = estimate_activation_probs(zero, 1, 0.0, small(100));
    CHECK(all.q_a.mean == 1.0);
    CHECK(all.p_a.mean == 1.0);
    CHECK(all.eta_a.mean == 1.0);

    const auto est = estimate_activation_probs(p, 1, 0.0, small(20000, 3));
    CHECK(within(est.eta_a, 0.676337967485662));
    CHECK(est.decomposition_score(p.mu, 0.95) <= 3.0);
    const auto exact = activation_probs_exact(p);
    CHECK(within(est.q_a, exact.q_a));
    CHECK(within(est.p_a, exact.p_a));
}

TEST_CASE("coordination trends with paired seeds")
{
    NetworkParams p;
    const auto mc = small(20000, 4);
    const auto k1 = estimate_activation_probs(p, 1, 0.0, mc);
    const auto k3 = estimate_activation_probs(p, 3, 0.0, mc);
    // common random numbers make p non-decreasing and q non-increasing per trial
    CHECK(k3.p_a.mean >= k1.p_a.mean);
    CHECK(k3.q_a.mean <= k1.q_a.mean);
    CHECK(k3.p_a.mean - k1.p_a.mean > 3.0 * std::hypot(k1.p_a.std_error, k3.p_a.std_error));
    CHECK(k1.q_a.mean - k3.q_a.mean > 3.0 * std::hypot(k1.q_a.std_error, k3.q_a.std_error));
}

TEST_CASE("determinism across worker counts and execution modes")
{
    NetworkParams p;
    auto mc = small(5000, 99);
    mc.execution = Execution::serial;
    const auto ref = estimate_activation_probs(p, 2, 0.5, mc);
    const auto ref_i = sample_interference(p, 2, 0.5, mc);
    const auto ref_u = estimate_uplink_coverage(p, 0.5, 0.3, 1.0, mc);
    mc.execution = Execution::parallel;
    for (int workers : {1, 2, 3, 0}) {
        mc.workers = workers;
        const auto e = estimate_activation_probs(p, 2, 0.5, mc);
        CHECK(e.q_a.mean == ref.q_a.mean);
        CHECK(e.p_a.mean == ref.p_a.mean);
        CHECK(e.eta_a.mean == ref.eta_a.mean);
        CHECK(sample_interference(p, 2, 0.5, mc) == ref_i);
        CHECK(estimate_uplink_coverage(p, 0.5, 0.3, 1.0, mc).mean == ref_u.mean);
    }
    mc.master_seed = 100;
    CHECK(sample_interference(p, 2, 0.5, mc) != ref_i);
}

TEST_CASE("epsilon fit")
{
    NetworkParams p;
    const auto grid = default_epsilon_grid(p, 0.0);
    REQUIRE(grid.size() == 20);
    CHECK(coordinated_base_laplace(grid.front(), p, 0.0) == Approx(0.95).epsilon(1e-12));
    CHECK(coordinated_base_laplace(grid.back(), p, 0.0) == Approx(0.05).epsilon(1e-12));

    // synthetic data from the approximate form
    for (int K : {1, 3}) {
        std::vector<double> L;
        std::vector<double> A;
        for (double s : grid) {
            L.push_back(coordinated_laplace(s, p, K, 0.3, 0.0, CoordinatedTransform::I_K));
            A.push_back(-std::log(coordinated_base_laplace(s, p, 0.0)));
        }
        // drop points where the cap at 1 bites
        std::vector<double> g2;
        std::vector<double> L2;
        std::vector<double> A2;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (L[i] < 1.0) {
                g2.push_back(grid[i]);
                L2.push_back(L[i]);
                A2.push_back(A[i]);
            }
        }
        const auto fit = fit_epsilon(g2, L2, A2, K, p.mu);
        CHECK(fit.eps_K == Approx(0.3).epsilon(1e-10));
        CHECK(fit.residual < 1e-20);
        CHECK_FALSE(fit.at_boundary);
    }
    // flat objective when mu K is negligible
    const auto flat = fit_epsilon({1.0, 2.0}, {0.5, 0.25}, {std::log(2.0), std::log(4.0)}, 1, 1e-9);
    CHECK(flat.degenerate);
    CHECK(flat.residual < 1e-20);
    // data above the base transform: boundary at 0
    const auto low = fit_epsilon({1.0, 2.0}, {0.4, 0.2}, {std::log(2.0), std::log(4.0)}, 1, 0.25);
    CHECK(low.eps_K == 0.0);
    CHECK(low.at_boundary);
    CHECK_THROWS_AS(fit_epsilon({1.0, 2.0}, {0.0, 0.3}, {1.0, 1.0}, 1, 0.25), EstimationError);
    CHECK_THROWS_AS(fit_epsilon({1.0}, {0.5, 0.3}, {1.0, 1.0}, 1, 0.25), DomainError);
}

TEST_CASE("simulated epsilon: flat in lambda_b, decreasing in K")
{
    // The model is scale free at beta = 0, so eps_1 does not depend on lambda_b.
    NetworkParams p;
    const auto mc = small(20000, 6);
    const auto e_lo = estimate_epsilon_K(p.with_lambda_b(2e-5), 1, 0.0, mc);
    const auto e_hi = estimate_epsilon_K(p.with_lambda_b(1.2e-4), 1, 0.0, mc);
    CHECK(std::abs(e_lo.eps_K - e_hi.eps_K) < 0.03);
    const auto e2 = estimate_epsilon_K(p, 2, 0.0, mc);
    const auto e3 = estimate_epsilon_K(p, 3, 0.0, mc);
    const auto e1 = estimate_epsilon_K(p, 1, 0.0, mc);
    CHECK(e1.eps_K > e2.eps_K);
    CHECK(e2.eps_K > e3.eps_K);
}

TEST_CASE("constant-eps transform stays within 2% of the exact one" * doctest::should_fail())
{
    // Expected to fail: no single eps fits the exact transform within 2% over
    // the [0.05, 0.95] band (best worst-case error is about 10%).
    NetworkParams p;
    const auto grid = default_epsilon_grid(p, 0.0);
    std::vector<double> L;
    std::vector<double> A;
    for (double s : grid) {
        L.push_back(laplace_I1_exact(s, p));
        A.push_back(-std::log(coordinated_base_laplace(s, p, 0.0)));
    }
    const auto fit = fit_epsilon(grid, L, A, 1, p.mu);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(laplace_I1_approx(grid[i], p, fit.eps_K) / L[i] - 1.0));
    }
    MESSAGE("fitted eps_1 = " << fit.eps_K << ", worst relative deviation = " << worst);
    CHECK(worst <= 0.02);
}

TEST_CASE("uplink simulation")
{
    NetworkParams p;
    const auto mc = small(20000, 12);
    CHECK(estimate_uplink_coverage(p, 0.5, 0.0, 1.0, small(200)).mean == 1.0);
    CHECK(estimate_uplink_coverage(p, 0.5, 0.3, 1e-12, small(200)).mean == 1.0);
    RngStream rng(1, 2);
    CHECK(std::isinf(simulate_uplink_sir(p, 0.0, 0.0, WindowSpec{0.0, 0.01}, rng)));

    const double eta = 0.4;
    const double n_a = uplink_load(p, eta).n_a;
    CHECK(within(estimate_uplink_coverage(p, 0.0, eta, 1.0, mc), 1.0 / (1.0 + n_a)));
    CHECK(within(estimate_uplink_coverage(p, 0.5, eta, 1.0, mc), uplink_coverage_power_control(0.5, n_a)));
    CHECK(within(estimate_uplink_coverage(p, 1.0, eta, 1.0, mc), std::exp(-n_a)));

    // general m has no analytic counterpart; just a sane probability
    NetworkParams m4 = p;
    m4.m = 4.0;
    const auto g = estimate_uplink_coverage(m4, 0.0, eta, 1.0, mc);
    CHECK(g.mean > 0.0);
    CHECK(g.mean < 1.0);
    CHECK(estimate_uplink_coverage(m4, 0.0, eta, 1.0, mc).mean == g.mean);
    CHECK_THROWS_AS(estimate_uplink_coverage(p, 0.0, 1.5, 1.0, mc), DomainError);
}
