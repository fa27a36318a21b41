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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "symsparse/config.hpp"
#include "symsparse/ensemble.hpp"
#include "symsparse/experiments.hpp"
#include "symsparse/inverse_geometry.hpp"
#include "symsparse/lcd.hpp"
#include "symsparse/smallball.hpp"
#include "symsparse/spectra.hpp"
#include "symsparse/structure.hpp"

using namespace symsparse;

namespace {

// Tolerances and limits.
constexpr double kDistanceRelTol = 1e-8;
constexpr double kSminRelTol = 1e-8;
constexpr double kLcdGridTol = 1e-3;
constexpr double kReplayTol = 1e-9;
constexpr double kConcentrationTarget = 0.5;
constexpr double kConcentrationTol = 0.02;
constexpr double kMomentTol = 0.1;
constexpr double kRatioLo = 1.0 / 3.0;
constexpr double kRatioHi = 3.0;
constexpr double kTailGuard = 0.02;
constexpr double kNormLo = 1.7;
constexpr double kNormHi = 3.0;
constexpr double kBvhFraction = 0.95;
constexpr double kWitnessFraction = 0.99;

struct Outcome {
    bool pass;
    std::string detail;
    double budget_seconds;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Eigen::VectorXd random_unit(std::size_t n, const RngStream& s)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        x[static_cast<Eigen::Index>(i)] = s.normal(i);
    }
    return x / x.norm();
}

double rel_err(double a, double b)
{
    if (a == b) {
        return 0.0;
    }
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

Outcome distance_identity()
{
    std::size_t done = 0, resampled = 0;
    double worst = 0.0;
    for (std::uint64_t t = 0; done < 200; ++t) {
        const std::size_t n = 2 + t % 29;
        const EnsembleParams params{n, 0.3 + 0.7 * RngStream(1, t).uniform(99), EntryDistribution::standard_gaussian(),
                                    3.0};
        const auto a = sample_matrix(params, RngStream(1, t));
        const auto rec = quadratic_form_distance(a);
        if (rec.b_singular) {
            ++resampled;
            continue;
        }
        worst = std::max(worst, rel_err(rec.quadratic_form_distance, rec.geometric_distance));
        ++done;
    }
    return {worst <= kDistanceRelTol, fmt("200 instances, max rel err %.2e, %zu singular minors resampled", worst,
                                          resampled),
            10.0};
}

Outcome smin_oracle()
{
    double worst = 0.0, worst_jacobi = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const std::size_t n = 1 + t % 64;
        const EnsembleParams params{n, t % 3 == 0 ? 1.0 : 0.4, t % 2 ? EntryDistribution::rademacher()
                                                                      : EntryDistribution::standard_gaussian(),
                                    3.0};
        const auto a = sample_matrix(params, RngStream(2, t));
        const double it = spectral_summary(a, 1e-13, SpectralMethod::iterative).s_min;
        const double dense = spectral_summary(a, 1e-13, SpectralMethod::dense_oracle).s_min;
        const auto eig = oracle::jacobi_eigenvalues(a.to_dense());
        double jac = oracle::min_abs(eig);
        double top = 0.0;
        for (double v : eig) {
            top = std::max(top, std::abs(v));
        }
        // Eigenvalues at rounding level are exact zeros of a singular matrix.
        if (jac <= static_cast<double>(n) * 2.220446049250313e-16 * top) {
            jac = 0.0;
        }
        worst = std::max(worst, rel_err(it, dense));
        worst_jacobi = std::max(worst_jacobi, rel_err(it, jac));
    }
    return {worst <= kSminRelTol && worst_jacobi <= kSminRelTol,
            fmt("100 instances, max rel err %.2e vs dense, %.2e vs Jacobi", worst, worst_jacobi), 30.0};
}

Outcome lcd_correctness()
{
    double worst = 0.0;
    std::size_t capped = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        const std::size_t n = 2 + t % 7;
        const double L = t % 2 ? 1.0 : 2.0;
        const auto x = random_unit(n, RngStream(3, t));
        const double cap = default_theta_cap(n);
        const auto r = lcd(x, L, cap);
        capped += r.capped;
        worst = std::max(worst, std::abs(r.value - oracle::lcd_grid(x, L, cap)));
    }
    std::size_t below_l = 0, below_inv_sup = 0, below_half_inv_sup = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + t % 15;
        const double L = t % 2 ? 1.0 : 2.0;
        const auto x = random_unit(n, RngStream(4, t));
        const auto r = lcd(x, L, default_theta_cap(n));
        const double inv_sup = 1.0 / x.cwiseAbs().maxCoeff();
        below_l += !(r.value > L);
        below_inv_sup += r.value < inv_sup - 1e-9;
        below_half_inv_sup += r.value < 0.5 * inv_sup - 1e-9;
    }
    return {worst <= kLcdGridTol && below_l == 0 && below_inv_sup == 0,
            fmt("grid max diff %.2e over 50 (%zu capped); of 1000 vectors %zu have D_L <= L, %zu have "
                "D_L < 1/||x||_inf, %zu have D_L < 1/(2||x||_inf)",
                worst, capped, below_l, below_inv_sup, below_half_inv_sup),
            60.0};
}

Eigen::VectorXd spread_vector(std::size_t n, const RngStream& s)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        x[static_cast<Eigen::Index>(i)] = (1.0 + 0.3 * s.uniform(i)) * (s.bits(1000 + i) & 1 ? 1.0 : -1.0);
    }
    return x / x.norm();
}

Outcome regularized_lcd_search()
{
    // n = 12, c_oo = 1/4: three spread coordinates; lambda gives subset sizes 2 and 3.
    std::size_t disagree = 0, above = 0, replay_fail = 0, runs = 0;
    for (double lambda : {1.0 / 6.0, 0.2}) {
        StructureConstants c;
        c.c_oo = 0.25;
        c.lambda = lambda;
        for (std::uint64_t t = 0; t < 50; ++t) {
            const auto x = spread_vector(12, RngStream(5, t));
            const auto exact = regularized_lcd(x, c, 3, RngStream(6, t));
            RegularizedLcdOptions sampling;
            sampling.sample_only = true;
            const auto full = regularized_lcd(x, c, 64, RngStream(7, t), sampling);
            if (!exact.exact || full.lower_bound != exact.lower_bound) {
                ++disagree;
            }
            const auto partial = regularized_lcd(x, c, 1 + t % 2, RngStream(8, t), sampling);
            if (partial.lower_bound > exact.lower_bound) {
                ++above;
            }
            for (const auto* r : {&exact, &full, &partial}) {
                const auto replay = lcd(normalized_restriction(x, r->witness_subset), c.L, default_theta_cap(12));
                if (std::abs(replay.value - r->lower_bound) > kReplayTol) {
                    ++replay_fail;
                }
            }
            ++runs;
        }
    }
    return {disagree == 0 && above == 0 && replay_fail == 0,
            fmt("%zu runs: %zu disagreements, %zu lower bounds above exact, %zu replay failures", runs, disagree,
                above, replay_fail),
            60.0};
}

Outcome concentration()
{
    const std::size_t samples = 100000;
    const auto sampler = sampler_for(EntryDistribution::rademacher(), 0.5);
    std::vector<double> v(samples);
    const RngStream s(9, 0);
    for (std::size_t i = 0; i < samples; ++i) {
        v[i] = sampler(s.substream(i), 0);
    }
    const auto est = levy_concentration_scalar(v, 0.5);
    return {std::abs(est.value - kConcentrationTarget) <= kConcentrationTol,
            fmt("estimate %.4f (+-%.4f), target %.2f +- %.2f; exact value of the law %.4f", est.value,
                est.ci_halfwidth, kConcentrationTarget, kConcentrationTol,
                levy_concentration_law(masked_law(*EntryDistribution::rademacher().atoms(), 0.5), 0.5)),
            10.0};
}

Outcome first_moment()
{
    const EnsembleParams params{100, 0.5, EntryDistribution::rademacher(), 3.0};
    const auto r = first_moment_experiment(params, 20, 500, 0.1, 10.0, 10);
    return {std::abs(r.normalized_moment.mean - 1.0) <= kMomentTol,
            fmt("mean %.4f +- %.4f over %zu matrices (%zu excluded)", r.normalized_moment.mean,
                r.normalized_moment.halfwidth, r.matrices, r.excluded),
            120.0};
}

ExperimentConfig base_config(const std::string& kind)
{
    ExperimentConfig c;
    c.kind = kind;
    c.ensemble = EnsembleParams{200, 0.3, EntryDistribution::rademacher(), 3.0};
    c.seed = 2026;
    return c;
}

Outcome scaling_shape()
{
    auto c = base_config("scaling");
    c.n_grid = {100, 200, 400};
    c.p_grid = {0.5};
    c.trials = 300;
    const auto r = scaling_consistency(c);
    bool ok = r.ratios.size() == 2;
    std::string detail = "medians";
    for (const auto& cell : r.cells) {
        detail += fmt(" %.3f", cell.median_scaled_smin);
    }
    detail += ", ratios";
    for (const auto& ratio : r.ratios) {
        ok = ok && ratio.ratio >= kRatioLo && ratio.ratio <= kRatioHi;
        detail += fmt(" %.3f", ratio.ratio);
    }
    return {ok, detail, 300.0};
}

Outcome tail_guard()
{
    auto c = base_config("tail-sweep");
    c.n_grid = {200};
    c.p_grid = {0.3};
    c.eps_grid = {1e-3};
    c.trials = 2000;
    const auto rows = tail_sweep(c);
    const auto& r = rows.front();
    return {r.p_hat <= kTailGuard,
            fmt("p_hat %.4f [%.4f, %.4f], %zu successes of %zu", r.p_hat, r.wilson_ci.lo, r.wilson_ci.hi,
                r.successes, r.trials),
            600.0};
}

Outcome norm_bound()
{
    bool ok = true;
    std::string detail = "mean ||A||/sqrt(pn):";
    for (double p : {0.1, 0.5, 1.0}) {
        const EnsembleParams params{400, p, EntryDistribution::rademacher(), 3.0};
        NormBoundOptions opt;
        opt.gaussian_draws = 1;
        const auto r = norm_bound_experiment(params, 20, 11, opt);
        ok = ok && r.mean_ratio >= kNormLo && r.mean_ratio <= kNormHi;
        detail += fmt(" p=%.1f %.3f", p, r.mean_ratio);
    }
    const EnsembleParams params{400, 0.5, EntryDistribution::rademacher(), 3.0};
    NormBoundOptions opt;
    opt.bvh_eps = 0.5;
    const auto r = norm_bound_experiment(params, 50, 12, opt);
    ok = ok && r.bvh_fraction >= kBvhFraction;
    detail += fmt("; Gaussian comparison within bound in %.2f of 50", r.bvh_fraction);
    return {ok, detail, 300.0};
}

Outcome witness()
{
    const EnsembleParams params{400, 0.2, EntryDistribution::rademacher(), 3.0};
    const double f = witness_event_frequency(params, 1, 0.5, 500, 13);
    return {f >= kWitnessFraction, fmt("frequency %.4f over 500 trials", f), 60.0};
}

Outcome decoupling()
{
    const std::size_t n = 6;
    std::size_t failures = 0;
    double worst_margin = 1.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const RngStream s(14, t);
        Eigen::MatrixXd g(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                g(i, j) = g(j, i) = s.normal(i * n + j);
            }
        }
        const std::size_t k = 1 + t % (n - 1);
        const auto j_set = random_subset(n, k, s.substream(1));
        const double eps = 0.05 + 0.5 * s.uniform(500);
        const auto r = decoupling_consequence_check(g, j_set, EntryDistribution::rademacher(), eps, 20000,
                                                    s.substream(2), 0.5);
        failures += !r.holds;
        worst_margin = std::min(worst_margin, r.rhs + r.slack - r.lhs * r.lhs);
    }
    const auto law = masked_law(*EntryDistribution::rademacher().atoms(), 0.5);
    std::size_t exact_failures = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        const RngStream s(15, t);
        Eigen::MatrixXd g(2, 2);
        g << s.normal(0), s.normal(1), s.normal(1), s.normal(2);
        for (double eps : {0.0, 0.1, 0.5, 1.0}) {
            const auto r = decoupling_consequence_exact(g, {t % 2}, law, eps);
            exact_failures += !(r.holds && r.slack == 0.0);
        }
    }
    return {failures == 0 && exact_failures == 0,
            fmt("%zu / 100 sampled configurations fail (min margin %.4f), %zu / 80 exact cases fail", failures,
                worst_margin, exact_failures),
            120.0};
}

Outcome determinism()
{
    auto c = base_config("tail-sweep");
    c.n_grid = {40, 80};
    c.p_grid = {0.2, 0.5};
    c.eps_grid = {0.01, 0.1, 1.0};
    c.trials = 100;
    std::ostringstream one, eight;
    c.workers = 1;
    write_tail_csv(one, tail_sweep(c));
    c.workers = 8;
    write_tail_csv(eight, tail_sweep(c));
    return {one.str() == eight.str() && !one.str().empty(),
            fmt("%zu bytes, identical: %s", one.str().size(), one.str() == eight.str() ? "yes" : "no"), 60.0};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"distance identity", distance_identity},
        {"spectral oracle equivalence", smin_oracle},
        {"LCD correctness", lcd_correctness},
        {"regularized LCD search", regularized_lcd_search},
        {"Levy concentration of a sparse sign", concentration},
        {"first-moment identity", first_moment},
        {"scaling shape", scaling_shape},
        {"tail guard", tail_guard},
        {"norm bound", norm_bound},
        {"witness event", witness},
        {"decoupling consequence", decoupling},
        {"determinism", determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, "", 0.0};
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what(), 0.0};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.budget_seconds > 0.0 && secs > o.budget_seconds) {
            o.pass = false;
            o.detail += fmt("; over time budget %.0f s", o.budget_seconds);
        }
        std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
