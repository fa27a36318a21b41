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
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "symsparse/ensemble.hpp"
#include "symsparse/structure.hpp"

namespace symsparse {

/// Experiment description read from an INI-style file:
///
///   [experiment]  kind, trials, seed, workers, output
///   [ensemble]    n, p, dist, c_op
///   [grid]        eps, n, p          (comma-separated lists)
///   [structure]   c_s, c_d, c_oo, lambda, L, delta0, c_p
///   [options]     free-form numeric options of the chosen experiment
///
/// Missing grids default to the single ensemble value (eps defaults to 1e-3).
struct ExperimentConfig {
    std::string kind = "tail-sweep";
    EnsembleParams ensemble;
    StructureConstants constants;
    std::vector<double> eps_grid{1e-3};
    std::vector<std::size_t> n_grid{2};
    std::vector<double> p_grid{1.0};
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string output;
    std::map<std::string, double> options;

    /// Throws ParameterError on empty grids, trials == 0, an unknown kind or
    /// invalid ensemble / structure values.
    void validate() const;

    double option(const std::string& key, double fallback) const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Experiment kinds accepted by `run`.
const std::vector<std::string>& experiment_kinds();

/// Parses and validates; errors name the offending key as section.key.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Lossless text form: parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const ExperimentConfig& config);

} // namespace symsparse
