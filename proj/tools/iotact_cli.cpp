// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

// iotact run <preset|config> [key=value ...] | list-presets | validate <config>

#include <fmt/format.h>

#include <CLI11.hpp>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iotact/errors.hpp"
#include "iotact/experiment.hpp"

namespace {

const std::map<std::string, std::string> kPresetNotes{
    {"fig1", "q_a, p_a, eta_a and eps_1 vs lambda_b"},
    {"fig2", "uplink coverage vs lambda_d/lambda_b for several nu, two lambda_b panels"},
    {"fig3", "uplink coverage surface over (nu, lambda_d/lambda_b), analytic"},
    {"fig4", "K=2 coordinated activation vs lambda_b, beta in {0.5, -0.25}"},
    {"fig5", "K=3 coordinated activation vs lambda_b, beta in {0.5, -0.25}"},
    {"fig6", "uplink coverage with beta=0.5, K=3 coordination"},
    {"fig7", "activation performance index vs lambda_b, K in {2,3}"},
    {"table1-defaults", "reference deployment, single point"},
};

iotact::ExperimentSpec resolve(const std::string& target)
{
    const auto names = iotact::preset_names();
    if (std::find(names.begin(), names.end(), target) != names.end()) {
        return iotact::preset(target);
    }
    if (std::filesystem::exists(target)) {
        return iotact::load_config(target);
    }
    throw iotact::UsageError("'" + target + "' is neither a preset nor a config file");
}

void apply_overrides(iotact::ExperimentSpec& spec, const std::vector<std::string>& overrides)
{
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw iotact::UsageError("override '" + kv + "' is not key=value");
        }
        iotact::apply_setting(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Activation and uplink analytics with Monte Carlo cross-checks"};
    app.require_subcommand(1);

    std::string target;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::string> out_dir;
    std::optional<std::string> estimators;
    bool csv_only = false;

    auto* run = app.add_subcommand("run", "Run a preset or a key=value config");
    run->add_option("target", target, "preset name or config path")->required();
    run->add_option("overrides", overrides, "key=value settings applied after the target");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--trials", trials, "Monte Carlo trials per point");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--estimators", estimators, "analytic, mc or both");
    run->add_flag("--csv-only", csv_only, "skip plot scripts, metadata and reports");

    auto* list = app.add_subcommand("list-presets", "List the named presets");

    std::string config_path;
    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    validate->add_option("config", config_path, "config path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : iotact::preset_names()) {
                fmt::print("{:<16} {}\n", name, kPresetNotes.at(name));
            }
            return 0;
        }
        if (validate->parsed()) {
            const auto spec = iotact::load_config(config_path);
            spec.validate();
            fmt::print("{}: ok ({} {} points, estimators {})\n", config_path, spec.axis_values.size(),
                       spec.axis_name, iotact::to_string(spec.estimators));
            return 0;
        }

        auto spec = resolve(target);
        apply_overrides(spec, overrides);
        if (seed) {
            spec.mc.master_seed = *seed;
        }
        if (trials) {
            spec.mc.trials = *trials;
        }
        if (out_dir) {
            spec.output_dir = *out_dir;
        }
        if (estimators) {
            spec.estimators = iotact::parse_estimators(*estimators);
        }
        const auto tables = iotact::run_experiment(spec);
        const auto paths = iotact::write_outputs(spec, tables, csv_only);
        for (std::size_t i = 0; i < tables.size(); ++i) {
            fmt::print("{}: {} rows, {} failed\n", paths[i], tables[i].rows.size(), tables[i].failed_rows());
        }
        return 0;
    } catch (const iotact::UsageError& e) {
        fmt::print(stderr, "usage error: {}\n", e.what());
        return 2;
    } catch (const iotact::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return 3;
    } catch (const iotact::Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 4;
    }
}
