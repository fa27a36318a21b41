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

#include "symsparse/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "symsparse/csv.hpp"
#include "symsparse/ensemble.hpp"
#include "symsparse/error.hpp"
#include "symsparse/inverse_geometry.hpp"
#include "symsparse/parallel.hpp"
#include "symsparse/smallball.hpp"
#include "symsparse/spectra.hpp"

namespace symsparse {

using json = nlohmann::ordered_json;

const char* version_string()
{
    return "symsparse 0.1.0";
}

namespace {

EnsembleParams cell_params(const ExperimentConfig& config, std::size_t n, double p)
{
    EnsembleParams params = config.ensemble;
    params.n = n;
    params.p = p;
    params.validate();
    if (p * static_cast<double>(n) < 1.0) {
        throw ParameterError("infeasible cell n=" + std::to_string(n) + ", p=" + format_double(p) +
                             ": p must be at least 1/n");
    }
    return params;
}

json fit_json(const std::optional<LinearFit>& fit)
{
    if (!fit) {
        return nullptr;
    }
    return json{{"slope", fit->slope},
                {"intercept", fit->intercept},
                {"slope_stderr", fit->slope_stderr},
                {"slope_ci", {fit->slope_ci.lo, fit->slope_ci.hi}},
                {"points", fit->points}};
}

json constants_json(const StructureConstants& c)
{
    return json{{"c_s", c.c_s},   {"c_d", c.c_d},       {"c_oo", c.c_oo}, {"lambda", c.lambda},
                {"L", c.L},       {"delta0", c.delta0}, {"c_p", c.c_p}};
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count)
{
    require(lo > 0.0 && hi >= lo && count >= 1, "invalid threshold schedule");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        out[k] = lo * std::pow(hi / lo, t);
    }
    return out;
}

std::size_t option_count(const ExperimentConfig& config, const std::string& key, double fallback)
{
    const double v = config.option(key, fallback);
    if (!(v >= 0.0) || v != std::floor(v)) {
        throw ParameterError("config key 'options." + key + "': expected a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
}

} // namespace

std::vector<TailEstimate> tail_sweep(const ExperimentConfig& config)
{
    config.validate();
    const double tol = config.option("tol", 1e-10);
    std::vector<TailEstimate> rows;
    std::size_t cell = 0;
    for (std::size_t n : config.n_grid) {
        for (double p : config.p_grid) {
            const EnsembleParams params = cell_params(config, n, p);
            const RngStream cell_stream(config.seed, cell++);
            struct Trial {
                double s_min;
                bool op_event;
            };
            const auto trials = parallel_map(config.trials, config.workers, [&](std::size_t t) {
                const auto a = sample_matrix(params, cell_stream.substream(t));
                return Trial{smallest_singular_value(a, tol), operator_norm_event(spectral_norm(a, tol), params)};
            });
            std::size_t op_events = 0;
            for (const auto& t : trials) {
                op_events += t.op_event ? 1 : 0;
            }
            const double scale = std::sqrt(p / static_cast<double>(n));
            for (double eps : config.eps_grid) {
                TailEstimate row;
                row.n = n;
                row.p = p;
                row.eps = eps;
                row.trials = config.trials;
                row.op_events = op_events;
                for (const auto& t : trials) {
                    row.successes += (t.op_event && t.s_min <= eps * scale) ? 1 : 0;
                }
                row.p_hat = static_cast<double>(row.successes) / static_cast<double>(row.trials);
                row.wilson_ci = wilson_interval(row.successes, row.trials);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_tail_csv(std::ostream& out, const std::vector<TailEstimate>& rows)
{
    CsvWriter csv(out, "tail-sweep", 1, {"n", "p", "eps", "successes", "trials", "op_events", "p_hat", "ci_lo", "ci_hi"});
    for (const auto& r : rows) {
        csv.row() << r.n << r.p << r.eps << r.successes << r.trials << r.op_events << r.p_hat << r.wilson_ci.lo
                  << r.wilson_ci.hi;
    }
}

ScalingReport scaling_consistency(const ExperimentConfig& config)
{
    config.validate();
    const double tol = config.option("tol", 1e-10);
    ScalingReport report;
    std::size_t cell = 0;
    for (std::size_t n : config.n_grid) {
        for (double p : config.p_grid) {
            const EnsembleParams params = cell_params(config, n, p);
            const RngStream cell_stream(config.seed, cell++);
            const auto summaries = parallel_map(config.trials, config.workers, [&](std::size_t t) {
                return spectral_summary(sample_matrix(params, cell_stream.substream(t)), tol);
            });
            ScalingCell c;
            c.n = n;
            c.p = p;
            c.trials = config.trials;
            std::vector<double> scaled;
            std::vector<double> condition;
            const double nn = static_cast<double>(n);
            for (const auto& s : summaries) {
                c.singular += s.s_min == 0.0 ? 1 : 0;
                scaled.push_back(s.s_min * std::sqrt(nn / p));
                condition.push_back(s.condition_number / nn);
            }
            c.median_scaled_smin = median(scaled);
            c.median_condition_over_n = median(condition);
            report.cells.push_back(c);
        }
    }
    for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
        for (std::size_t ni = 0; ni + 1 < config.n_grid.size(); ++ni) {
            const auto& from = report.cells[ni * config.p_grid.size() + pi];
            const auto& to = report.cells[(ni + 1) * config.p_grid.size() + pi];
            report.ratios.push_back({from.p, from.n, to.n, to.median_scaled_smin / from.median_scaled_smin});
        }
    }
    return report;
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report)
{
    CsvWriter csv(out, "scaling", 1,
                  {"n", "p", "trials", "singular", "median_scaled_smin", "median_condition_over_n"});
    for (const auto& c : report.cells) {
        csv.row() << c.n << c.p << c.trials << c.singular << c.median_scaled_smin << c.median_condition_over_n;
    }
}

ExponentFit exponent_fit(const std::vector<TailEstimate>& rows)
{
    ExponentFit out;
    std::vector<double> x;
    std::vector<double> y;
    std::set<double> distinct;
    for (const auto& r : rows) {
        if (r.eps > 0.0 && r.wilson_ci.lo > 0.0 && r.p_hat > 0.0) {
            x.push_back(std::log(r.eps));
            y.push_back(std::log(r.p_hat));
            distinct.insert(r.eps);
        }
    }
    out.usable_points = x.size();
    if (distinct.size() < 4) {
        out.diagnostic = "need at least 4 eps points with p_hat > 0, have " + std::to_string(distinct.size());
        return out;
    }
    out.fit = least_squares(x, y);
    if (!out.fit) {
        out.diagnostic = "degenerate regression";
    }
    return out;
}

std::size_t planned_cells(const ExperimentConfig& config)
{
    const std::size_t np = config.n_grid.size() * config.p_grid.size();
    if (config.kind == "tail-sweep") {
        return np * config.eps_grid.size();
    }
    if (config.kind == "scaling") {
        return np;
    }
    if (config.kind == "smallball" || config.kind == "quadratic" || config.kind == "invertibility") {
        return config.eps_grid.size();
    }
    return 1;
}

std::string run_to_stream(const ExperimentConfig& config, std::ostream& out)
{
    config.validate();
    std::ostringstream echo;
    write_config(echo, config);
    json meta{{"version", version_string()},
              {"kind", config.kind},
              {"seed", config.seed},
              {"config", echo.str()},
              {"constants", constants_json(config.constants)},
              {"c_op", config.ensemble.c_op},
              {"fourth_moment", config.ensemble.dist.fourth_moment()}};
    const EnsembleParams& ens = config.ensemble;
    const std::string& kind = config.kind;

    if (kind == "tail-sweep") {
        const auto rows = tail_sweep(config);
        write_tail_csv(out, rows);
        json fits = json::array();
        for (std::size_t n : config.n_grid) {
            for (double p : config.p_grid) {
                std::vector<TailEstimate> cell;
                for (const auto& r : rows) {
                    if (r.n == n && r.p == p) {
                        cell.push_back(r);
                    }
                }
                const auto f = exponent_fit(cell);
                fits.push_back({{"n", n}, {"p", p}, {"fit", fit_json(f.fit)}, {"diagnostic", f.diagnostic}});
            }
        }
        meta["exponent_fits"] = fits;
    } else if (kind == "scaling") {
        const auto report = scaling_consistency(config);
        write_scaling_csv(out, report);
        json ratios = json::array();
        for (const auto& r : report.ratios) {
            ratios.push_back({{"p", r.p}, {"n_from", r.n_from}, {"n_to", r.n_to}, {"ratio", r.ratio}});
        }
        meta["ratios"] = ratios;
    } else if (kind == "norm-check") {
        NormBoundOptions opts;
        opts.c_bar = config.option("c_bar", opts.c_bar);
        opts.bvh_eps = config.option("bvh_eps", opts.bvh_eps);
        opts.gaussian_draws = option_count(config, "gaussian_draws", static_cast<double>(opts.gaussian_draws));
        opts.tol = config.option("tol", opts.tol);
        opts.workers = config.workers;
        const auto report = norm_bound_experiment(ens, config.trials, config.seed, opts);
        write_norm_csv(out, report);
        meta["summary"] = {{"mean_ratio", report.mean_ratio},
                           {"op_violation_fraction", report.op_violation_fraction},
                           {"omega_fraction", report.omega_fraction},
                           {"bvh_fraction", report.bvh_fraction}};
    } else if (kind == "distance-check") {
        const auto a = sample_matrix(ens, RngStream(config.seed, 0));
        const auto records = distance_records(a);
        write_distance_csv(out, records);
        double worst = 0.0;
        for (const auto& r : records) {
            if (!r.b_singular) {
                worst = std::max(worst, std::abs(r.geometric_distance - r.quadratic_form_distance) /
                                            std::max(r.geometric_distance, 1e-300));
            }
        }
        meta["max_relative_disagreement"] = worst;
    } else if (kind == "smallball") {
        const auto sampler = sampler_for(ens.dist, ens.p);
        const RngStream stream(config.seed, 0);
        std::vector<double> samples(config.trials);
        for (std::size_t t = 0; t < config.trials; ++t) {
            samples[t] = sampler(stream, t);
        }
        const double bracket = 1.0 - config.constants.delta0 * ens.p;
        std::vector<SweepRow> rows;
        for (double eps : config.eps_grid) {
            const auto est = levy_concentration_scalar(samples, eps);
            rows.push_back({eps, est.value, est.ci_halfwidth, bracket, est.value - est.ci_halfwidth <= bracket});
        }
        write_sweep_csv(out, rows);
        meta["bound"] = "1 - delta0 p";
    } else if (kind == "quadratic") {
        const auto report = quadratic_smallball_experiment(ens, config.eps_grid, config.trials, config.seed,
                                                           config.workers);
        write_quadratic_csv(out, report);
        meta["excluded"] = report.excluded;
        meta["median_center"] = report.median_center;
        meta["slope_u0"] = fit_json(report.slope_zero);
        meta["slope_median"] = fit_json(report.slope_median);
    } else if (kind == "structure") {
        const std::size_t index = option_count(config, "u_index", 0.0);
        require(index < ens.n, "options.u_index out of range");
        Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ens.n));
        u[static_cast<Eigen::Index>(index)] = 1.0;
        const auto thresholds = log_spaced(config.option("threshold_lo", 1.0), config.option("threshold_hi", 1e4),
                                           option_count(config, "threshold_count", 9.0));
        const auto report =
            rlcd_structure_experiment(ens, u, config.constants, option_count(config, "budget", 64.0),
                                         config.trials, thresholds, config.seed, config.workers);
        CsvWriter csv(out, "structure", 1, {"threshold", "survival"});
        for (std::size_t k = 0; k < thresholds.size(); ++k) {
            csv.row() << thresholds[k] << report.survival[k];
        }
        meta["excluded"] = report.excluded;
        meta["incompressible_fraction"] = report.incompressible_fraction;
        meta["spread_defined"] = report.spread_defined;
    } else if (kind == "invertibility") {
        const std::size_t m = option_count(config, "M", static_cast<double>(ens.n / 2));
        const double rho = config.option("rho", config.constants.c_d);
        CsvWriter csv(out, "invertibility", 1,
                      {"eps", "lhs_hits", "trials", "lhs", "lhs_lo", "lhs_hi", "rhs", "rhs_halfwidth", "holds"});
        for (double eps : config.eps_grid) {
            const auto r = invertibility_via_distance_experiment(ens, eps, m, rho, config.trials, config.seed,
                                                                 config.workers);
            csv.row() << eps << r.lhs_hits << r.trials << r.lhs << r.lhs_ci.lo << r.lhs_ci.hi << r.rhs
                      << r.rhs_halfwidth << r.holds;
        }
        meta["M"] = m;
        meta["rho"] = rho;
    } else if (kind == "first-moment") {
        const auto r = first_moment_experiment(ens, config.trials, option_count(config, "draws", 500.0),
                                               config.option("eps", 0.5), config.option("lower_constant", 10.0),
                                               config.seed, config.workers);
        CsvWriter csv(out, "first-moment", 1,
                      {"matrices", "excluded", "draws", "mean", "halfwidth", "freq_i", "freq_ii", "freq_iii"});
        csv.row() << r.matrices << r.excluded << r.draws << r.normalized_moment.mean << r.normalized_moment.halfwidth
                  << r.freq_lower_constant << r.freq_markov << r.freq_lower_hs;
    } else if (kind == "witness") {
        const std::size_t kappa = option_count(config, "kappa", 1.0);
        const double c1 = config.option("c1", 0.5);
        const double freq = witness_event_frequency(ens, kappa, c1, config.trials, config.seed, config.workers);
        CsvWriter csv(out, "witness", 1, {"n", "p", "kappa", "c1", "trials", "frequency"});
        csv.row() << ens.n << ens.p << kappa << c1 << config.trials << freq;
    } else {
        throw ParameterError("config key 'experiment.kind': unknown experiment kind '" + kind + "'");
    }
    return meta.dump(2) + "\n";
}

int run(const ExperimentConfig& base, const RunOptions& options, std::ostream& log)
{
    ExperimentConfig config = base;
    if (options.workers) {
        config.workers = *options.workers;
    }
    if (options.seed) {
        config.seed = *options.seed;
    }
    if (options.output) {
        config.output = *options.output;
    }
    try {
        config.validate();
        if (options.dry_run) {
            log << "config ok: " << config.kind << ", " << planned_cells(config) << " cells, " << config.trials
                << " trials per cell\n";
            return 0;
        }
        if (config.output.empty()) {
            log << "error: no output path (set experiment.output or --out)\n";
            return 2;
        }
        std::ostringstream csv;
        const std::string meta = run_to_stream(config, csv);
        std::ofstream out(config.output, std::ios::binary);
        if (!out) {
            log << "error: cannot write '" << config.output << "'\n";
            return 3;
        }
        out << csv.str();
        std::ofstream side(config.output + ".meta.json", std::ios::binary);
        if (!side) {
            log << "error: cannot write '" << config.output << ".meta.json'\n";
            return 3;
        }
        side << meta;
        if (!out || !side) {
            log << "error: write failed for '" << config.output << "'\n";
            return 3;
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run(const std::string& path, const RunOptions& options, std::ostream& log)
{
    ExperimentConfig config;
    try {
        config = load_config(path);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
    return run(config, options, log);
}

} // namespace symsparse
