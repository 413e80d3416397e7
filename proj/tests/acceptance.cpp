// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any
// fails. Usage: acceptance [output_dir]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "iotact/activation.hpp"
#include "iotact/experiment.hpp"
#include "iotact/montecarlo.hpp"
#include "iotact/uplink.hpp"

using namespace iotact;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

McConfig mc_config(std::uint64_t trials, std::uint64_t seed)
{
    McConfig mc;
    mc.trials = trials;
    mc.master_seed = seed;
    return mc;
}

const std::vector<double> kSweep = {1e-5, 2e-5, 3e-5, 4e-5, 5e-5, 6e-5, 8e-5, 1e-4, 1.2e-4, 1.5e-4};

//---------------------------------------------------------------------------//
// Sweep runs shared by criteria 4, 9 and 10

struct SweepRuns
{
    std::vector<ResultTable> fig1;
    std::vector<ResultTable> fig4;
    std::vector<std::string> csv_a;
    std::vector<std::string> csv_b;
    fs::path dir_a;
};

ExperimentSpec fig1_spec(const fs::path& out)
{
    auto spec = preset("fig1");
    spec.mc.trials = 10000;
    spec.mc.master_seed = 2026;
    spec.output_dir = out.string();
    return spec;
}

ExperimentSpec fig4_spec(const fs::path& out)
{
    auto spec = preset("fig4");
    spec.axis_values = {2e-5, 8e-5, 1.5e-4};
    spec.mc.trials = 5000;
    spec.mc.master_seed = 2026;
    spec.output_dir = out.string();
    return spec;
}

SweepRuns run_sweeps(const fs::path& root)
{
    SweepRuns runs;
    runs.dir_a = root / "run_a";
    const fs::path dir_b = root / "run_b";
    fs::remove_all(runs.dir_a);
    fs::remove_all(dir_b);
    for (const auto& dir : {runs.dir_a, dir_b}) {
        for (const auto& make : {fig1_spec, fig4_spec}) {
            const auto spec = make(dir);
            const auto tables = run_experiment(spec);
            const auto paths = write_outputs(spec, tables, false);
            for (const auto& path : paths) {
                (dir == runs.dir_a ? runs.csv_a : runs.csv_b).push_back(path);
            }
            if (dir == runs.dir_a) {
                (spec.name == "fig1" ? runs.fig1 : runs.fig4) = tables;
            }
        }
    }
    return runs;
}

//---------------------------------------------------------------------------//

Outcome criterion_1()
{
    const auto start = Clock::now();
    double worst = 0.0;
    for (double lb : {1e-5, 5e-5, 8e-5, 1.2e-4, 1.5e-4}) {
        const NetworkParams p = NetworkParams{}.with_lambda_b(lb);
        const double closed = activation_probs_closed_alpha4(p, 0.0).eta_a;
        for (auto method : {InversionMethod::contour, InversionMethod::automatic}) {
            worst = std::max(worst, std::abs(total_activation_probability(p, kInversionTolerance, method) - closed));
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-6 && elapsed < 5.0,
            fmt::format("max |inversion - erf| = {:.2e} (<= 1e-6), {:.3f} s (< 5 s)", worst, elapsed)};
}

Outcome criterion_2()
{
    const auto start = Clock::now();
    const NetworkParams p;
    const auto est = estimate_activation_probs(p, 1, 0.0, mc_config(100000, 1));
    const double elapsed = seconds_since(start);
    const double target = activation_probs_closed_alpha4(p, 0.0).eta_a;
    const double z = std::abs(est.eta_a.mean - target) / est.eta_a.std_error;
    return {z <= 3.0 && elapsed < 60.0,
            fmt::format("eta_hat = {:.5f} +- {:.5f}, closed form {:.5f}, {:.2f} se; {:.1f} s", est.eta_a.mean,
                        est.eta_a.std_error, target, z, elapsed)};
}

Outcome criterion_3()
{
    // eps_1 and the simulated probabilities come from the same trials
    const NetworkParams base;
    double worst = 0.0;
    double worst_at = 0.0;
    double eps_lo = 1.0;
    double eps_hi = 0.0;
    for (double lb : kSweep) {
        const NetworkParams p = base.with_lambda_b(lb);
        const auto res = estimate_coordinated(p, 1, 0.0, mc_config(20000, 3));
        const double eps = res.eps.eps_K;
        eps_lo = std::min(eps_lo, eps);
        eps_hi = std::max(eps_hi, eps);
        const auto approx = activation_probs_approx(p, eps, RangePolicy::raw);
        const double dev = std::max(std::abs(approx.p_a - res.probs.p_a.mean), std::abs(approx.q_a - res.probs.q_a.mean));
        if (dev > worst) {
            worst = dev;
            worst_at = lb;
        }
    }
    return {worst <= 0.02, fmt::format("fitted eps_1 in [{:.4f}, {:.4f}]; max |approx - MC| = {:.4f} at lambda_b = "
                                       "{:g} (<= 0.02)",
                                       eps_lo, eps_hi, worst, worst_at)};
}

Outcome criterion_4(const SweepRuns& runs)
{
    std::mt19937_64 eng(44);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::string worst_method;
    auto record = [&](const ActivationProbabilities& a, double mu, const char* name) {
        const double e = a.decomposition_error(mu);
        if (!(e <= worst)) {
            worst = std::isnan(e) ? kInf : e;
            worst_method = name;
        }
    };
    for (int i = 0; i < 1000; ++i) {
        NetworkParams p = NetworkParams{}.with_lambda_b(1e-5 + u(eng) * 1.4e-4);
        p.mu = 0.05 + 0.9 * u(eng);
        p.theta_a = 1e-8 * std::pow(100.0, u(eng));
        const double eps = 0.9 * u(eng);
        const int K = 1 + static_cast<int>(eng() % 5);
        const double beta = -0.4 + 0.9 * u(eng);
        record(activation_probs_exact(p), p.mu, "exact");
        record(activation_probs_closed_alpha4(p, eps, RangePolicy::raw), p.mu, "closed_alpha4");
        record(coordinated_activation_probs(p, K, eps, beta, CoordinatedMethod::alpha4, RangePolicy::raw), p.mu,
               "coordinated_alpha4");
        // general exponent for the forms that support it
        NetworkParams g = p;
        g.alpha = 2.5 + 2.5 * u(eng);
        g.m = 0.5 + 2.5 * u(eng);
        record(activation_probs_approx(g, eps, RangePolicy::raw), g.mu, "approx");
        record(coordinated_activation_probs(g, K, eps, beta, CoordinatedMethod::inversion, RangePolicy::raw), g.mu,
               "coordinated_inversion");
    }

    // simulated rows: |eta - (mu p + (1-mu) q)| inside the combined 95% interval
    const double mu = NetworkParams{}.mu;
    const double z = confidence_z(0.95);
    std::size_t rows = 0;
    double worst_score = 0.0;
    for (const auto* tables : {&runs.fig1, &runs.fig4}) {
        for (const auto& t : *tables) {
            for (const auto& r : t.rows) {
                if (r.estimator != "mc") {
                    continue;
                }
                ++rows;
                const double gap = *r.eta_a - (mu * *r.p_a + (1.0 - mu) * *r.q_a);
                const double se = std::sqrt(*r.se_eta * *r.se_eta + mu * mu * *r.se_p * *r.se_p
                                            + (1.0 - mu) * (1.0 - mu) * *r.se_q * *r.se_q);
                worst_score = std::max(worst_score, se > 0.0 ? std::abs(gap) / (z * se) : (gap == 0.0 ? 0.0 : kInf));
            }
        }
    }
    return {worst <= 1e-12 && worst_score <= 1.0 && rows > 0,
            fmt::format("analytic max error {:.1e} ({}); {} MC rows, max gap/CI half-width = {:.3f}", worst,
                        worst_method.empty() ? "-" : worst_method, rows, worst_score)};
}

Outcome criterion_5()
{
    double worst = 0.0;
    bool ordered = true;
    for (int i = 0; i < 50; ++i) {
        const double n = 0.01 + (20.0 - 0.01) * i / 49.0;
        const double c0 = uplink_coverage_power_control(0.0, n);
        const double c1 = uplink_coverage_power_control(1.0, n);
        worst = std::max({worst, std::abs(c0 - 1.0 / (1.0 + n)), std::abs(c1 - std::exp(-n))});
        ordered = ordered && std::exp(-n) < 1.0 / (1.0 + n);
    }
    return {worst <= 1e-8 && ordered,
            fmt::format("max deviation {:.1e} (<= 1e-8); e^-n < 1/(1+n) on all 50 points: {}", worst, ordered)};
}

Outcome criterion_6()
{
    int passed = 0;
    int total = 0;
    double worst = 0.0;
    for (double lb : {1e-5, 5e-5}) {
        for (double ratio : {100.0, 300.0, 500.0}) {
            NetworkParams p = NetworkParams{}.with_lambda_b(lb);
            p.lambda_d = ratio * lb;
            const double eta = activation_probs_exact(p).eta_a;
            const double n_a = uplink_load(p, eta).n_a;
            for (double nu : {0.0, 0.5, 1.0}) {
                const auto est = estimate_uplink_coverage(p, nu, eta, p.theta_c, mc_config(100000, 6));
                const double z = std::abs(est.mean - uplink_coverage_power_control(nu, n_a)) / est.std_error;
                worst = std::max(worst, z);
                passed += z <= 3.0 ? 1 : 0;
                ++total;
            }
        }
    }
    return {passed == total, fmt::format("{}/{} points within 3 se, worst {:.2f} se", passed, total, worst)};
}

Outcome criterion_7()
{
    int hits = 0;
    double best_gain = 0.0;
    std::string best;
    for (double lb : {1e-5, 5e-5}) {
        for (double ratio = 100.0; ratio <= 500.0; ratio += 50.0) {
            NetworkParams p = NetworkParams{}.with_lambda_b(lb);
            p.lambda_d = ratio * lb;
            const double n_a = uplink_load(p, activation_probs_exact(p).eta_a).n_a;
            const double c0 = uplink_coverage_power_control(0.0, n_a);
            for (int i = 1; i < 190; ++i) {
                const double nu = -0.4 + 0.01 * i;
                const double gain = uplink_coverage_power_control(nu, n_a) - c0;
                if (gain > 0.0 && mean_uplink_power(nu, p) < p.q_bar) {
                    ++hits;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best = fmt::format("nu = {:.2f}, n_a = {:.3f}, lambda_b = {:g}", nu, n_a, lb);
                    }
                }
            }
        }
    }
    return {hits > 0, fmt::format("{} grid points beat nu = 0 with mean power below Q_bar; best gain {:.4f} at {}",
                                  hits, best_gain, best.empty() ? "-" : best)};
}

Outcome criterion_8()
{
    const NetworkParams p;
    bool ok = true;
    std::string detail;
    for (double beta : {0.5, -0.25}) {
        std::vector<CoordinatedMcResult> res;
        for (int K = 1; K <= 3; ++K) {
            res.push_back(estimate_coordinated(p, K, beta, mc_config(20000, 8)));
        }
        double eta_prev = kInf;
        std::string line = fmt::format("beta {:+.2f}:", beta);
        for (int K = 1; K <= 3; ++K) {
            const auto& r = res[K - 1];
            const double eta = coordinated_activation_probs(p, K, r.eps.eps_K, beta, CoordinatedMethod::inversion,
                                                            RangePolicy::raw)
                                   .eta_a;
            ok = ok && eta < eta_prev;
            eta_prev = eta;
            line += fmt::format(" K{} eps {:.4f} p {:.4f} q {:.4f} eta {:.4f};", K, r.eps.eps_K, r.probs.p_a.mean,
                                r.probs.q_a.mean, eta);
            if (K > 1) {
                const auto& prev = res[K - 2];
                const double sp = std::hypot(r.probs.p_a.std_error, prev.probs.p_a.std_error);
                const double sq = std::hypot(r.probs.q_a.std_error, prev.probs.q_a.std_error);
                // a reversal larger than 3 se fails
                ok = ok && r.probs.p_a.mean - prev.probs.p_a.mean >= -3.0 * sp;
                ok = ok && prev.probs.q_a.mean - r.probs.q_a.mean >= -3.0 * sq;
                ok = ok && r.eps.eps_K < prev.eps.eps_K;
            }
        }
        detail += line + " ";
    }
    std::mt19937_64 eng(88);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    int holds = 0;
    for (int i = 0; i < 10000; ++i) {
        holds += coordination_benefit_check(u(eng), u(eng), 1 + static_cast<int>(eng() % 10)) ? 1 : 0;
    }
    ok = ok && holds == 10000;
    detail += fmt::format("inequality true on {}/10000", holds);
    return {ok, detail};
}

Outcome criterion_9(const SweepRuns& runs)
{
    const fs::path dir = runs.dir_a;
    std::map<double, std::array<double, 3>> exact;
    std::ifstream in(dir / "fig1.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() >= 9 && cells[2] == "exact") {
            exact[std::stod(cells[1])] = {std::stod(cells[6]), std::stod(cells[7]), std::stod(cells[8])};
        }
    }
    bool increasing = exact.size() == kSweep.size();
    const std::array<double, 3>* prev = nullptr;
    for (const auto& [lb, v] : exact) {
        if (prev != nullptr) {
            for (int j = 0; j < 3; ++j) {
                increasing = increasing && v[j] > (*prev)[j];
            }
        }
        prev = &v;
    }
    const auto a = exact.find(8e-5);
    const auto b = exact.find(1.2e-4);
    double q_growth = 0.0;
    double p_growth = 0.0;
    if (a != exact.end() && b != exact.end()) {
        q_growth = b->second[0] / a->second[0] - 1.0;
        p_growth = b->second[1] / a->second[1] - 1.0;
    }
    const bool report = fs::exists(dir / "fig1_discrepancy.txt") && fs::file_size(dir / "fig1_discrepancy.txt") > 0;
    return {increasing && q_growth > p_growth && report,
            fmt::format("strictly increasing: {}; q_a +{:.1f}% vs p_a +{:.1f}% over 8e-5 -> 1.2e-4; report written: {}",
                        increasing, 100.0 * q_growth, 100.0 * p_growth, report)};
}

Outcome criterion_10(const SweepRuns& runs)
{
    bool same = !runs.csv_a.empty() && runs.csv_a.size() == runs.csv_b.size();
    for (std::size_t i = 0; same && i < runs.csv_a.size(); ++i) {
        same = slurp(runs.csv_a[i]) == slurp(runs.csv_b[i]);
    }
    return {same, fmt::format("{} CSV files compared byte for byte across two runs", runs.csv_a.size())};
}

}  // namespace

int main(int argc, char** argv)
{
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    fs::create_directories(root);
    std::ofstream report(root / "acceptance_report.txt");

    int failures = 0;
    auto emit = [&](int id, const std::function<Outcome()>& check) {
        Outcome o;
        const auto start = Clock::now();
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const std::string line = fmt::format("criterion {:>2}: {}  {} [{:.1f} s]", id, o.pass ? "PASS" : "FAIL",
                                             o.detail, seconds_since(start));
        fmt::print("{}\n", line);
        std::fflush(stdout);
        report << line << '\n';
        failures += o.pass ? 0 : 1;
    };

    SweepRuns runs;
    std::string sweep_error;
    try {
        runs = run_sweeps(root);
    } catch (const std::exception& e) {
        sweep_error = e.what();
    }
    auto needs_sweeps = [&](auto fn) {
        return [&, fn]() -> Outcome {
            if (!sweep_error.empty()) {
                return {false, "sweep run failed: " + sweep_error};
            }
            return fn(runs);
        };
    };

    emit(1, criterion_1);
    emit(2, criterion_2);
    emit(3, criterion_3);
    emit(4, needs_sweeps(criterion_4));
    emit(5, criterion_5);
    emit(6, criterion_6);
    emit(7, criterion_7);
    emit(8, criterion_8);
    emit(9, needs_sweeps(criterion_9));
    emit(10, needs_sweeps(criterion_10));
    fmt::print("{} of 10 criteria passed\n", 10 - failures);
    report << 10 - failures << " of 10 criteria passed\n";
    return failures == 0 ? 0 : 1;
}
