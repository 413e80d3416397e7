// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

//! \file experiment.hpp
//! Named sweeps over the analytic and simulated estimators, with CSV and
//! gnuplot output. Sweep points run in order; the MC kernels parallelize
//! internally.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iotact/montecarlo.hpp"
#include "iotact/params.hpp"

namespace iotact {

enum class EstimatorSet
{
    analytic,
    mc,
    both
};

std::string_view to_string(EstimatorSet set);
EstimatorSet parse_estimators(std::string_view text);

/// What a sweep point computes.
///  activation   K = 1 probabilities (exact, epsilon approximation, MC)
///  coordinated  K-coordinated probabilities for every (K, beta)
///  uplink       uplink coverage for every nu, with eta_a from K = 1
///  uplink_coordinated  as uplink, eta_a from the coordinated scheme
enum class SweepKind
{
    activation,
    coordinated,
    uplink,
    uplink_coordinated
};

std::string_view to_string(SweepKind kind);

struct ExperimentSpec
{
    std::string name;
    SweepKind kind = SweepKind::activation;
    std::string axis_name = "lambda_b";  // lambda_b or density_ratio
    std::vector<double> axis_values;
    /// lambda_b of each panel when the axis is density_ratio; one CSV each.
    std::vector<double> panels;
    NetworkParams params;
    EstimatorSet estimators = EstimatorSet::both;
    McConfig mc;
    std::vector<int> K_list{1};
    std::vector<double> nu_list{0.0};
    std::vector<double> beta_list{0.0};
    std::string output_dir = ".";
    /// Columns the plot script draws (q_a, p_a, eta_a, eta_c, zeta_a, eps_K).
    std::vector<std::string> plot_columns{"q_a", "p_a", "eta_a"};

    /// UsageError for an empty sweep or list, ConfigError for values outside
    /// their domain.
    void validate() const;
};

/// One CSV row. Absent optionals print as empty fields, NaN marks a failure.
struct ResultRow
{
    std::string axis_name;
    double axis_value = 0.0;
    std::string estimator;
    int K = 1;
    std::optional<double> nu;
    std::optional<double> beta;
    std::optional<double> q_a, p_a, eta_a, eta_c, zeta_a, eps_K;
    std::optional<double> se_q, se_p, se_eta, se_etac;
    std::optional<std::uint64_t> seed, trials;
    double wall_ms = 0.0;        // measured, not written to the CSV
    double window_radius = 0.0;  // MC rows with a derived activation window
    std::string error;           // empty on success
};

struct ResultTable
{
    std::string name;   // file stem, e.g. fig2_lb1e-05
    std::string title;
    std::string axis_name;
    SweepKind kind = SweepKind::activation;
    std::vector<std::string> plot_columns;
    std::vector<ResultRow> rows;
    std::map<std::string, std::string> meta;  // sidecar key/values

    std::size_t failed_rows() const;
};

std::vector<std::string> preset_names();
/// UsageError for an unknown name.
ExperimentSpec preset(const std::string& name);

/// Applies one key=value setting. Keys are listed in the README; theta_a is
/// given in microwatts. Throws ConfigError for unknown keys or bad values.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);
/// Parses a flat key=value file ('#' comments). "preset = name" first loads
/// that preset as the base.
ExperimentSpec load_config(const std::string& path);

/// One table per panel. Row failures are recorded in the row; if every row
/// fails, throws EstimationError listing them.
std::vector<ResultTable> run_experiment(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "axis_name,axis_value,estimator,K,nu,beta,q_a,p_a,eta_a,eta_c,zeta_a,eps_K,"
    "se_q,se_p,se_eta,se_etac,seed,trials,wall_ms";

/// Writes header and rows with 12 significant digits. wall_ms is always 0
/// so reruns are byte-identical; timings go to the meta sidecar.
void write_csv(const ResultTable& table, const std::string& path);
std::string format_csv(const ResultTable& table);

/// gnuplot script over csv_name (used as given, normally a bare file name).
void emit_plot_script(const ResultTable& table, const std::string& csv_name, const std::string& path);

/// key=value sidecar: run id, spec, window settings, per-row timings and errors.
void write_meta(const ResultTable& table, const std::string& path);

/// Published point values at lambda_b = 8e-5 and 1.2e-4 set against the
/// computed ones.
/// Only meaningful for the fig1 sweep.
std::string discrepancy_report(const ResultTable& table, const NetworkParams& params);

/// Writes csv, plot script, meta and (fig1) the discrepancy report for every
/// table into spec.output_dir. Returns the CSV paths.
std::vector<std::string> write_outputs(const ExperimentSpec& spec,
                                       const std::vector<ResultTable>& tables,
                                       bool csv_only);

}  // namespace iotact
