// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

// Serial vs OpenMP timing of the Monte Carlo kernels.
//   bench_mc [trials] [repeats]

#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "iotact/montecarlo.hpp"

namespace {

using Clock = std::chrono::steady_clock;

// best-of-n wall time in ms, plus a checksum of the last result
double best_ms(int repeats, const std::function<double()>& kernel, double& checksum)
{
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        checksum = kernel();
        best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv)
{
    const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 50000;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

    iotact::NetworkParams params;
    iotact::McConfig serial;
    serial.trials = trials;
    serial.execution = iotact::Execution::serial;
    iotact::McConfig parallel = serial;
    parallel.execution = iotact::Execution::parallel;

    struct Kernel
    {
        std::string name;
        std::function<double(const iotact::McConfig&)> run;
    };
    const std::vector<Kernel> kernels{
        {"activation K=1",
         [&](const iotact::McConfig& mc) { return iotact::estimate_activation_probs(params, 1, 0.0, mc).eta_a.mean; }},
        {"activation K=3 b=0.5",
         [&](const iotact::McConfig& mc) { return iotact::estimate_activation_probs(params, 3, 0.5, mc).eta_a.mean; }},
        {"interference K=1",
         [&](const iotact::McConfig& mc) {
             const auto s = iotact::sample_interference(params, 1, 0.0, mc);
             return s[s.size() / 2];
         }},
        {"uplink nu=0.5",
         [&](const iotact::McConfig& mc) { return iotact::estimate_uplink_coverage(params, 0.5, 0.3, 1.0, mc).mean; }},
    };

    fmt::print("trials={} repeats={} omp_max_threads={}\n", trials, repeats, omp_get_max_threads());
    fmt::print("{:<22} {:>12} {:>12} {:>8} {:>10}\n", "kernel", "serial ms", "openmp ms", "speedup", "identical");
    for (const auto& k : kernels) {
        double a = 0.0;
        double b = 0.0;
        const double ts = best_ms(repeats, [&] { return k.run(serial); }, a);
        const double tp = best_ms(repeats, [&] { return k.run(parallel); }, b);
        fmt::print("{:<22} {:>12.1f} {:>12.1f} {:>8.2f} {:>10}\n", k.name, ts, tp, ts / tp, a == b ? "yes" : "NO");
    }
    return 0;
}
