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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "symsparse/config.hpp"
#include "symsparse/error.hpp"
#include "symsparse/experiments.hpp"

using namespace symsparse;

namespace {

const char* kSample = R"(# tail sweep at desk scale
[experiment]
kind = tail-sweep
trials = 40
seed = 99
workers = 2

[ensemble]
n = 30
p = 0.5
dist = rademacher
c_op = 3

[grid]
eps = 0, 0.01, 0.1, 1, 1000
n = 20, 30
p = 0.3, 0.5

[structure]
lambda = 0.02

[options]
tol = 1e-11
)";

ExperimentConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

std::string message_of(const std::string& text)
{
    try {
        parse(text);
    } catch (const ParameterError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Config, ParsesSample)
{
    const auto c = parse(kSample);
    EXPECT_EQ(c.kind, "tail-sweep");
    EXPECT_EQ(c.trials, 40u);
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.workers, 2u);
    EXPECT_EQ(c.ensemble.n, 30u);
    EXPECT_EQ(c.eps_grid, (std::vector<double>{0, 0.01, 0.1, 1, 1000}));
    EXPECT_EQ(c.n_grid, (std::vector<std::size_t>{20, 30}));
    EXPECT_EQ(c.constants.lambda, 0.02);
    EXPECT_EQ(c.constants.c_s, StructureConstants{}.c_s);
    EXPECT_EQ(c.option("tol", 0.0), 1e-11);
    EXPECT_EQ(c.option("missing", 7.0), 7.0);
}

TEST(Config, RoundTripsLosslessly)
{
    auto c = parse(kSample);
    c.ensemble.dist = EntryDistribution::two_point(2.0, 0.2);
    c.constants.c_p = 1.0 / 3.0;
    c.eps_grid = {1.0 / 3.0, 0.1, 2.0 / 7.0};
    c.output = "out/tail.csv";
    std::ostringstream out;
    write_config(out, c);
    EXPECT_EQ(parse(out.str()), c);
}

TEST(Config, DiagnosticsNameTheKey)
{
    EXPECT_NE(message_of("[ensemble]\np = abc\n").find("ensemble.p"), std::string::npos);
    EXPECT_NE(message_of("[ensemble]\nq = 1\n").find("ensemble.q"), std::string::npos);
    EXPECT_NE(message_of("[experiment]\nkind = nothing\n").find("experiment.kind"), std::string::npos);
    EXPECT_NE(message_of("[experiment]\ntrials = 0\n").find("experiment.trials"), std::string::npos);
    EXPECT_NE(message_of("[grid]\neps = 0.1,,0.2\n").find("grid.eps"), std::string::npos);
    EXPECT_NE(message_of("[bogus]\nx = 1\n").find("bogus"), std::string::npos);
    EXPECT_NE(message_of("[options]\nbudget = many\n").find("options.budget"), std::string::npos);
    EXPECT_NE(message_of("[experiment\n").find("parse error"), std::string::npos);
}

TEST(Config, DefaultsValidate)
{
    EXPECT_NO_THROW(parse("[experiment]\nkind = scaling\n"));
}

TEST(TailSweep, EventNestingAndLimits)
{
    const auto c = parse(kSample);
    const auto rows = tail_sweep(c);
    ASSERT_EQ(rows.size(), 2u * 2u * 5u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        EXPECT_LE(r.wilson_ci.lo, r.p_hat);
        EXPECT_LE(r.p_hat, r.wilson_ci.hi);
        if (i % 5 != 0) {
            EXPECT_GE(r.successes, rows[i - 1].successes);
        }
        if (r.eps == 1000) {
            EXPECT_EQ(r.successes, r.op_events);
        }
    }
    EXPECT_EQ(rows.front().n, 20u);
    EXPECT_EQ(rows.front().p, 0.3);
}

TEST(TailSweep, ZeroEpsContinuous)
{
    auto c = parse(kSample);
    c.ensemble.dist = EntryDistribution::standard_gaussian();
    c.eps_grid = {0.0};
    for (const auto& r : tail_sweep(c)) {
        EXPECT_EQ(r.successes, 0u);
    }
}

TEST(TailSweep, RejectsInfeasibleCells)
{
    auto c = parse(kSample);
    c.p_grid = {0.01};
    try {
        tail_sweep(c);
        FAIL();
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("n=20"), std::string::npos);
    }
}

TEST(TailSweep, WorkerCountDoesNotChangeOutput)
{
    auto c = parse(kSample);
    std::ostringstream a, b;
    c.workers = 1;
    write_tail_csv(a, tail_sweep(c));
    c.workers = 8;
    write_tail_csv(b, tail_sweep(c));
    EXPECT_EQ(a.str(), b.str());
}

TEST(Scaling, SingleNHasNoRatios)
{
    auto c = parse(kSample);
    c.kind = "scaling";
    c.n_grid = {30};
    c.p_grid = {0.5};
    c.trials = 10;
    const auto r = scaling_consistency(c);
    EXPECT_EQ(r.cells.size(), 1u);
    EXPECT_TRUE(r.ratios.empty());
    c.n_grid = {20, 30, 40};
    EXPECT_EQ(scaling_consistency(c).ratios.size(), 2u);
}

TEST(ExponentFit, SyntheticRows)
{
    std::vector<TailEstimate> rows, ninth;
    for (double e : {0.001, 0.01, 0.05, 0.1, 0.5}) {
        TailEstimate r;
        r.eps = e;
        r.trials = 1000;
        r.p_hat = e;
        r.wilson_ci = {e / 2, std::min(1.0, 2 * e)};
        rows.push_back(r);
        r.p_hat = std::pow(e, 1.0 / 9.0);
        ninth.push_back(r);
    }
    const auto f = exponent_fit(rows);
    ASSERT_TRUE(f.fit.has_value());
    EXPECT_NEAR(f.fit->slope, 1.0, 1e-9);
    EXPECT_NEAR(exponent_fit(ninth).fit->slope, 1.0 / 9.0, 1e-9);
    rows.resize(3);
    const auto few = exponent_fit(rows);
    EXPECT_FALSE(few.fit.has_value());
    EXPECT_FALSE(few.diagnostic.empty());
}

TEST(Run, DryRunWritesNothing)
{
    const auto dir = std::filesystem::temp_directory_path() / "symsparse_dry_run";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto c = parse(kSample);
    c.output = (dir / "out.csv").string();
    std::ostringstream log;
    EXPECT_EQ(run(c, RunOptions{.dry_run = true}, log), 0);
    EXPECT_NE(log.str().find("20 cells"), std::string::npos) << log.str();
    EXPECT_TRUE(std::filesystem::is_empty(dir));
}

TEST(Run, WritesCsvAndSidecar)
{
    const auto dir = std::filesystem::temp_directory_path() / "symsparse_run";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto c = parse(kSample);
    c.output = (dir / "tail.csv").string();
    std::ostringstream log;
    ASSERT_EQ(run(c, {}, log), 0) << log.str();
    std::ifstream csv(c.output);
    std::string first;
    std::getline(csv, first);
    EXPECT_EQ(first, "# schema: tail-sweep v1");
    std::ifstream meta(c.output + ".meta.json");
    std::stringstream body;
    body << meta.rdbuf();
    EXPECT_NE(body.str().find("\"seed\": 99"), std::string::npos);
    EXPECT_NE(body.str().find("\"c_oo\""), std::string::npos);
}

TEST(Run, FailuresReturnNonzero)
{
    std::ostringstream log;
    const auto dir = std::filesystem::temp_directory_path() / "symsparse_bad";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "bad.ini").string();
    std::ofstream(path) << "[ensemble]\nn = two\n";
    EXPECT_NE(run(path, {}, log), 0);
    EXPECT_NE(log.str().find("ensemble.n"), std::string::npos);

    auto c = parse(kSample);
    c.output = "/nonexistent-dir/x/out.csv";
    EXPECT_NE(run(c, {}, log), 0);
}

TEST(Run, EveryKindProducesCsv)
{
    for (const auto& kind : experiment_kinds()) {
        auto c = parse(kSample);
        c.kind = kind;
        c.trials = 6;
        c.ensemble.n = 40;
        c.n_grid = {40};
        c.p_grid = {0.5};
        c.eps_grid = {0.01, 0.1, 0.5};
        c.options["draws"] = 5;
        std::ostringstream out;
        const std::string meta = run_to_stream(c, out);
        EXPECT_EQ(out.str().rfind("# schema: ", 0), 0u) << kind;
        EXPECT_NE(meta.find("\"version\""), std::string::npos) << kind;
    }
}
