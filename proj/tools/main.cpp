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

// symsparse command-line front end.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symsparse/config.hpp"
#include "symsparse/ensemble.hpp"
#include "symsparse/error.hpp"
#include "symsparse/experiments.hpp"
#include "symsparse/lcd.hpp"
#include "symsparse/spectra.hpp"
#include "symsparse/structure.hpp"

using namespace symsparse;
using json = nlohmann::ordered_json;

namespace {

Eigen::VectorXd read_vector(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot read '" + path + "'");
    }
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) {
            throw ParameterError("'" + path + "': not a number: '" + token + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw ParameterError("'" + path + "': empty vector");
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json indices(const std::vector<std::size_t>& v)
{
    return json(v);
}

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> out;
    bool dry_run = false;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config, "experiment config file")->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--out", c.out, "CSV output path (metadata goes to <out>.meta.json)");
    app->add_flag("--dry-run", c.dry_run, "validate and print the planned cell count");
}

int run_experiment(const std::string& kind, const Common& c)
{
    ExperimentConfig config;
    if (!c.config.empty()) {
        config = load_config(c.config);
    }
    if (!kind.empty()) {
        config.kind = kind;
    }
    RunOptions opts{c.dry_run, c.workers, c.seed, c.out};
    if (!c.dry_run && !c.out && config.output.empty()) {
        if (c.workers) {
            config.workers = *c.workers;
        }
        if (c.seed) {
            config.seed = *c.seed;
        }
        config.validate();
        run_to_stream(config, std::cout);
        return 0;
    }
    return run(config, opts, std::cerr);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse symmetric random matrices: structure, small-ball and invertibility experiments"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "sample a matrix and write it in coordinate text form");
    EnsembleParams ens;
    std::string dist_text = "rademacher";
    std::uint64_t gen_seed = 0, gen_stream = 0;
    std::string gen_out;
    gen->add_option("--n", ens.n, "dimension")->required();
    gen->add_option("--p", ens.p, "mask probability")->required();
    gen->add_option("--dist", dist_text, "entry law: rademacher, gaussian, uniform, laplace, two-point:a,prob");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--stream", gen_stream, "stream id");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // spectra
    auto* spec = app.add_subcommand("spectra", "spectral summary of a matrix file");
    std::string matrix_path, method = "iterative";
    double spec_tol = 1e-10;
    spec->add_option("matrix", matrix_path, "coordinate text matrix")->required()->check(CLI::ExistingFile);
    spec->add_option("--tol", spec_tol, "absolute tolerance");
    spec->add_option("--method", method, "iterative or dense")->check(CLI::IsMember({"iterative", "dense"}));

    // lcd
    auto* lcd_cmd = app.add_subcommand("lcd", "least common denominator of a vector file");
    std::string vector_path;
    double L = 2.0, cap = 0.0, lcd_tol = 1e-9;
    lcd_cmd->add_option("vector", vector_path, "whitespace-separated values")->required()->check(CLI::ExistingFile);
    lcd_cmd->add_option("--L", L, "scale L >= 1");
    lcd_cmd->add_option("--cap", cap, "theta cap (default 10 n sqrt n)");
    lcd_cmd->add_option("--tol", lcd_tol, "root tolerance");
    bool normalize = false;
    lcd_cmd->add_flag("--normalize", normalize, "divide by the Euclidean norm first");

    // structure
    auto* st = app.add_subcommand("structure", "sparse, compressible, dominated and spread classification");
    std::string st_vector, st_config;
    std::optional<std::size_t> st_m;
    std::optional<double> st_delta;
    double alpha = 1.0;
    std::size_t budget = 0;
    std::uint64_t st_seed = 0;
    st->add_option("vector", st_vector, "whitespace-separated values")->required()->check(CLI::ExistingFile);
    st->add_option("--config", st_config, "read structure constants from this config")->check(CLI::ExistingFile);
    st->add_option("--m", st_m, "sparsity (default floor(c_s n))");
    st->add_option("--delta", st_delta, "compressibility distance (default c_d)");
    st->add_option("--alpha", alpha, "domination constant");
    st->add_option("--rlcd-budget", budget, "also bound the regularized LCD with this many subsets");
    st->add_option("--seed", st_seed, "seed for subset sampling");
    st->add_flag("--normalize", normalize, "divide by the Euclidean norm first");

    // experiments
    Common common;
    std::vector<std::pair<std::string, CLI::App*>> experiments;
    for (const char* kind : {"tail-sweep", "scaling", "norm-check", "distance-check", "smallball", "quadratic"}) {
        auto* sub = app.add_subcommand(kind, std::string("run the ") + kind + " experiment");
        add_common(sub, common);
        experiments.emplace_back(kind, sub);
    }
    auto* run_cmd = app.add_subcommand("run", "run the experiment named by the config's experiment.kind");
    add_common(run_cmd, common);
    run_cmd->get_option("--config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            ens.dist = EntryDistribution::parse(dist_text);
            const auto a = sample_matrix(ens, RngStream(gen_seed, gen_stream));
            const MatrixHeader header{ens.n, ens.p, gen_seed, gen_stream};
            if (gen_out.empty()) {
                write_coordinate_text(std::cout, a, header);
            } else {
                std::ofstream out(gen_out);
                if (!out) {
                    std::cerr << "error: cannot write '" << gen_out << "'\n";
                    return 3;
                }
                write_coordinate_text(out, a, header);
            }
            return 0;
        }
        if (*spec) {
            std::ifstream in(matrix_path);
            const auto [header, a] = read_coordinate_text(in);
            const auto s = spectral_summary(a, spec_tol,
                                            method == "dense" ? SpectralMethod::dense_oracle : SpectralMethod::iterative);
            json j{{"n", a.n()},
                   {"stored", a.stored_count()},
                   {"s_min", s.s_min},
                   {"s_max", s.s_max},
                   {"condition_number", s.condition_number},
                   {"method", method},
                   {"residual", s.residual}};
            std::cout << j.dump() << "\n";
            return 0;
        }
        if (*lcd_cmd) {
            Eigen::VectorXd x = read_vector(vector_path);
            if (normalize) {
                x /= x.norm();
            }
            const double theta_cap = cap > 0.0 ? cap : default_theta_cap(static_cast<std::size_t>(x.size()));
            const auto r = lcd(x, L, theta_cap, lcd_tol);
            json j{{"n", x.size()},
                   {"L", L},
                   {"theta_cap", theta_cap},
                   {"lcd", r.value},
                   {"capped", r.capped},
                   {"witness_theta", r.witness_theta},
                   {"witness_dist", r.witness_dist},
                   {"threshold", lcd_threshold(r.witness_theta, L)},
                   {"certificate_holds", r.capped || lcd_certificate_holds(x, L, r, lcd_tol)}};
            std::cout << j.dump() << "\n";
            return 0;
        }
        if (*st) {
            Eigen::VectorXd x = read_vector(st_vector);
            if (normalize) {
                x /= x.norm();
            }
            const StructureConstants consts = st_config.empty() ? StructureConstants{} : load_config(st_config).constants;
            const auto n = static_cast<std::size_t>(x.size());
            const std::size_t m = st_m.value_or(std::max<std::size_t>(1, compressibility_budget(n, consts)));
            const auto r = classify(x, m, st_delta.value_or(consts.c_d), alpha, consts);
            json j{{"n", n},
                   {"m", r.m},
                   {"delta", st_delta.value_or(consts.c_d)},
                   {"alpha", alpha},
                   {"dist_to_sparse", r.dist_to_sparse},
                   {"compressible", r.comp_member},
                   {"dominated", r.dom_member},
                   {"spread", r.spread ? indices(*r.spread) : json(nullptr)}};
            if (budget > 0) {
                if (r.spread) {
                    const auto rl = regularized_lcd(x, consts, budget, RngStream(st_seed, 0));
                    j["rlcd_lower_bound"] = rl.lower_bound;
                    j["rlcd_exact"] = rl.exact;
                    j["rlcd_capped"] = rl.capped;
                    j["rlcd_subsets"] = rl.subsets_evaluated;
                    j["rlcd_witness_subset"] = indices(rl.witness_subset);
                    j["rlcd_witness_theta"] = rl.witness.witness_theta;
                    j["rlcd_witness_dist"] = rl.witness.witness_dist;
                } else {
                    j["rlcd_lower_bound"] = nullptr;
                }
            }
            std::cout << j.dump() << "\n";
            return 0;
        }
        for (const auto& [kind, sub] : experiments) {
            if (*sub) {
                return run_experiment(kind, common);
            }
        }
        if (*run_cmd) {
            return run_experiment("", common);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
