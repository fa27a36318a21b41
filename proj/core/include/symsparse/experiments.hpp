/*
   Copyright 2026 The symsparse Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symsparse/config.hpp"
#include "symsparse/stats.hpp"

namespace symsparse {

/// Artifact version recorded in every metadata sidecar.
const char* version_string();

/// One (n, p, eps) cell of the tail sweep: trials with
/// s_min(A) <= eps sqrt(p/n) and ||A|| <= C_op sqrt(pn).
struct TailEstimate {
    std::size_t n = 0;
    double p = 0.0;
    double eps = 0.0;
    std::size_t successes = 0;
    std::size_t trials = 0;
    std::size_t op_events = 0; // trials with ||A|| <= C_op sqrt(pn)
    double p_hat = 0.0;
    Interval wilson_ci{0.0, 0.0};
};

/// Cells in grid order n, then p, then eps. Each (n, p) cell samples its
/// trials once and evaluates every eps on the same realizations. Cells with
/// p < 1/n are rejected with a ParameterError.
std::vector<TailEstimate> tail_sweep(const ExperimentConfig& config);

/// CSV: n,p,eps,successes,trials,op_events,p_hat,ci_lo,ci_hi
void write_tail_csv(std::ostream& out, const std::vector<TailEstimate>& rows);

struct ScalingCell {
    std::size_t n = 0;
    double p = 0.0;
    std::size_t trials = 0;
    std::size_t singular = 0;            // trials with s_min == 0
    double median_scaled_smin = 0.0;     // median of s_min sqrt(n/p)
    double median_condition_over_n = 0.0; // median of (s_max / s_min) / n
};

struct ScalingRatio {
    double p = 0.0;
    std::size_t n_from = 0;
    std::size_t n_to = 0;
    double ratio = 0.0; // median_scaled_smin(n_to) / median_scaled_smin(n_from)
};

struct ScalingReport {
    std::vector<ScalingCell> cells;
    std::vector<ScalingRatio> ratios; // consecutive n of the grid, per p
};

ScalingReport scaling_consistency(const ExperimentConfig& config);

/// CSV: n,p,trials,singular,median_scaled_smin,median_condition_over_n
void write_scaling_csv(std::ostream& out, const ScalingReport& report);

struct ExponentFit {
    std::optional<LinearFit> fit;
    std::size_t usable_points = 0;
    std::string diagnostic; // set when no fit was made
};

/// Least-squares slope of log p_hat against log eps over rows whose Wilson
/// interval excludes zero; needs at least 4 such rows with distinct eps.
ExponentFit exponent_fit(const std::vector<TailEstimate>& rows);

struct RunOptions {
    bool dry_run = false;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
};

/// Number of grid cells (or trials for single-cell experiments) `run` plans.
std::size_t planned_cells(const ExperimentConfig& config);

/// Runs the configured experiment, writing the CSV to the output path and a
/// JSON metadata sidecar next to it (`<output>.meta.json`). Returns 0 on
/// success; diagnostics go to `log`.
int run(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);

/// Loads the config at `path` and calls run; parse errors return nonzero.
int run(const std::string& path, const RunOptions& options, std::ostream& log);

/// Writes the CSV of `config` to `out` and returns the metadata JSON text.
std::string run_to_stream(const ExperimentConfig& config, std::ostream& out);

} // namespace symsparse
