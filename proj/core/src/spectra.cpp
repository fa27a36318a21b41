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

#include "symsparse/spectra.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "symsparse/csv.hpp"
#include "symsparse/error.hpp"
#include "symsparse/parallel.hpp"

namespace symsparse {

namespace {

double pivot_floor(const Tridiagonal& t)
{
    double emax = 1.0;
    for (const double e : t.offdiag) {
        emax = std::max(emax, e * e);
    }
    return DBL_MIN * emax;
}

void check_dense_cap(std::size_t n, std::size_t cap)
{
    if (n > cap) {
        throw CapabilityError("dimension " + std::to_string(n) + " exceeds the dense cap " + std::to_string(cap));
    }
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

} // namespace

double Tridiagonal::gershgorin_radius() const noexcept
{
    double r = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) {
            row += std::abs(offdiag[i - 1]);
        }
        if (i + 1 < n) {
            row += std::abs(offdiag[i]);
        }
        r = std::max(r, row);
    }
    return r;
}

Tridiagonal tridiagonalize(const SparseSymmetricMatrix& a)
{
    require(a.n() >= 1, "cannot reduce an empty matrix");
    Tridiagonal t;
    if (a.n() == 1) {
        t.diag = {a.at(0, 0)};
        return t;
    }
    Eigen::Tridiagonalization<Eigen::MatrixXd> reduction(a.to_dense());
    const Eigen::VectorXd d = reduction.diagonal();
    const Eigen::VectorXd e = reduction.subDiagonal();
    t.diag.assign(d.data(), d.data() + d.size());
    t.offdiag.assign(e.data(), e.data() + e.size());
    return t;
}

std::size_t count_below(const Tridiagonal& t, double shift)
{
    const double pivmin = pivot_floor(t);
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < t.diag.size(); ++i) {
        if (i == 0) {
            q = t.diag[0] - shift;
        } else {
            const double e = t.offdiag[i - 1];
            q = t.diag[i] - shift - e * e / q;
        }
        if (std::abs(q) < pivmin) {
            q = -pivmin;
        }
        count += q < 0.0;
    }
    return count;
}

double bisect_eigenvalue(const Tridiagonal& t, std::size_t k, double abs_tol, double* width)
{
    const std::size_t n = t.size();
    require(k < n, "eigenvalue index out of range");
    const double radius = t.gershgorin_radius();
    const double pad = 2.0 * kEps * radius + 2.0 * pivot_floor(t);
    double lo = -radius - pad;
    double hi = radius + pad;
    while (hi - lo > abs_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (count_below(t, mid) <= k) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (width) {
        *width = hi - lo;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> full_symmetric_spectrum(const SparseSymmetricMatrix& a, std::size_t dense_cap)
{
    check_dense_cap(a.n(), dense_cap);
    if (a.n() == 0) {
        return {};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.to_dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw CapabilityError("dense symmetric eigensolver did not converge");
    }
    const Eigen::VectorXd& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

SymmetricEigendecomposition full_symmetric_decomposition(const SparseSymmetricMatrix& a, std::size_t dense_cap)
{
    check_dense_cap(a.n(), dense_cap);
    const Eigen::MatrixXd dense = a.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw CapabilityError("dense symmetric eigensolver did not converge");
    }
    SymmetricEigendecomposition out{solver.eigenvalues(), solver.eigenvectors(), 0.0};
    out.residual = (dense * out.vectors - out.vectors * out.values.asDiagonal()).norm();
    return out;
}

double smallest_singular_value(const Tridiagonal& t, double tol, double* width)
{
    require(tol > 0.0, "tolerance must be positive");
    const std::size_t n = t.size();
    require(n >= 1, "empty matrix");
    const double radius = t.gershgorin_radius();
    const double abs_tol = tol * std::max(1.0, radius);

    const std::size_t negative = count_below(t, 0.0);
    double best = std::numeric_limits<double>::infinity();
    double achieved = 0.0;
    if (negative < n) {
        double w = 0.0;
        best = std::min(best, std::abs(bisect_eigenvalue(t, negative, abs_tol, &w)));
        achieved = std::max(achieved, w);
    }
    if (negative > 0) {
        double w = 0.0;
        best = std::min(best, std::abs(bisect_eigenvalue(t, negative - 1, abs_tol, &w)));
        achieved = std::max(achieved, w);
    }
    if (width) {
        *width = achieved;
    }
    // An eigenvalue whose bracket reaches zero cannot be told apart from zero.
    if (best <= std::max(static_cast<double>(n) * kEps * radius, achieved)) {
        return 0.0;
    }
    return best;
}

double smallest_singular_value(const SparseSymmetricMatrix& a, double tol)
{
    require(tol > 0.0, "tolerance must be positive");
    if (a.stored_count() == 0) {
        return 0.0;
    }
    return smallest_singular_value(tridiagonalize(a), tol);
}

double spectral_norm(const SparseSymmetricMatrix& a, double tol)
{
    require(tol > 0.0, "tolerance must be positive");
    const auto n = static_cast<Eigen::Index>(a.n());
    if (a.stored_count() == 0) {
        return 0.0;
    }
    if (n == 1) {
        return std::abs(a.at(0, 0));
    }

    // Fixed pseudo-random start so results are reproducible and generic.
    const RngStream start(0x4c616e637a6f73ull, 0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = start.normal(static_cast<std::uint64_t>(i));
    }
    v.normalize();

    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha;
    std::vector<double> beta;
    double estimate = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        basis.push_back(v);
        Eigen::VectorXd w = a.multiply(v);
        alpha.push_back(v.dot(w));
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                w -= q.dot(w) * q;
            }
        }
        const double b = w.norm();

        const auto m = static_cast<Eigen::Index>(alpha.size());
        const bool last = k + 1 == n;
        const bool check = last || m < 8 || m % 4 == 0 || b <= kEps * std::abs(estimate);
        if (check) {
            Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd e = Eigen::VectorXd::Zero(std::max<Eigen::Index>(m - 1, 0));
            for (Eigen::Index i = 0; i + 1 < m; ++i) {
                e[i] = beta[static_cast<std::size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz;
            ritz.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
            const double lo = ritz.eigenvalues()[0];
            const double hi = ritz.eigenvalues()[m - 1];
            estimate = std::max(std::abs(lo), std::abs(hi));
            const double res_lo = b * std::abs(ritz.eigenvectors()(m - 1, 0));
            const double res_hi = b * std::abs(ritz.eigenvectors()(m - 1, m - 1));
            const double target = tol * estimate;
            if (last || b <= kEps * estimate || (res_lo <= target && res_hi <= target)) {
                return estimate;
            }
        }
        beta.push_back(b);
        v = w / b;
    }
    return estimate;
}

SpectralSummary spectral_summary(const SparseSymmetricMatrix& a, double tol, SpectralMethod method,
                                 std::size_t dense_cap)
{
    require(tol > 0.0, "tolerance must be positive");
    require(a.n() >= 1, "empty matrix");
    SpectralSummary s;
    s.method = method;
    if (method == SpectralMethod::dense_oracle) {
        const auto values = full_symmetric_spectrum(a, dense_cap);
        s.s_min = std::numeric_limits<double>::infinity();
        for (const double v : values) {
            s.s_min = std::min(s.s_min, std::abs(v));
            s.s_max = std::max(s.s_max, std::abs(v));
        }
        s.residual = static_cast<double>(a.n()) * kEps * s.s_max;
        if (s.s_min <= s.residual) {
            s.s_min = 0.0;
        }
    } else if (a.stored_count() == 0) {
        s.s_min = 0.0;
        s.s_max = 0.0;
    } else {
        const Tridiagonal t = tridiagonalize(a);
        const double abs_tol = tol * std::max(1.0, t.gershgorin_radius());
        double w_min = 0.0;
        double w_lo = 0.0;
        double w_hi = 0.0;
        s.s_min = smallest_singular_value(t, tol, &w_min);
        const double lo = bisect_eigenvalue(t, 0, abs_tol, &w_lo);
        const double hi = bisect_eigenvalue(t, t.size() - 1, abs_tol, &w_hi);
        s.s_max = std::max(std::abs(lo), std::abs(hi));
        s.residual = std::max({w_min, w_lo, w_hi});
    }
    s.condition_number = s.s_min > 0.0 ? s.s_max / s.s_min : std::numeric_limits<double>::infinity();
    return s;
}

bool operator_norm_event(double norm, const EnsembleParams& params)
{
    return norm <= params.c_op * std::sqrt(params.p * static_cast<double>(params.n));
}

bool operator_norm_event(const SparseSymmetricMatrix& a, const EnsembleParams& params)
{
    return operator_norm_event(spectral_norm(a, 1e-10), params);
}

MaskProfile mask_profile(const SparseSymmetricMatrix& b)
{
    std::vector<double> row_sq(b.n(), 0.0);
    MaskProfile profile;
    for (const auto& e : b.entries()) {
        const double sq = e.value * e.value;
        row_sq[e.row] += sq;
        if (e.row != e.col) {
            row_sq[e.col] += sq;
        }
        profile.sigma_star = std::max(profile.sigma_star, std::abs(e.value));
    }
    for (const double s : row_sq) {
        profile.sigma = std::max(profile.sigma, std::sqrt(s));
    }
    return profile;
}

MaskProfile indicator_profile(const SparseSymmetricMatrix& a)
{
    return mask_profile(a.with_values([](std::size_t) { return 1.0; }));
}

double bvh_bound(const MaskProfile& profile, double n, double eps)
{
    // The right side is continuous in eps, so the bound extends to eps = 1/2.
    require(eps > 0.0 && eps <= 0.5, "bvh_bound needs eps in (0, 1/2]");
    require(n >= 1.0, "bvh_bound needs n >= 1");
    require(profile.sigma >= 0.0 && profile.sigma_star >= 0.0, "mask profile must be nonnegative");
    return (1.0 + eps) *
           (2.0 * profile.sigma + 6.0 / std::sqrt(std::log1p(eps)) * profile.sigma_star * std::sqrt(std::log(n)));
}

NormBoundReport norm_bound_experiment(const EnsembleParams& params, std::size_t trials, std::uint64_t master_seed,
                                      const NormBoundOptions& options)
{
    params.validate();
    require(params.p > 0.0, "norm experiment needs p > 0");
    if (!params.dist.is_sub_gaussian()) {
        throw CapabilityError("norm bound experiment needs a sub-gaussian law, got " + params.dist.name());
    }
    require(options.gaussian_draws >= 1, "need at least one Gaussian redraw");
    NormBoundReport report;
    if (trials == 0) {
        return report;
    }
    const double pn = params.p * static_cast<double>(params.n);
    report.trials = parallel_map(trials, options.workers, [&](std::size_t t) {
        const RngStream trial(master_seed, t);
        const auto a = sample_matrix(params, trial.substream(0));
        NormTrial row;
        row.trial = t;
        row.norm = spectral_norm(a, options.tol);
        row.norm_over_sqrt_pn = row.norm / std::sqrt(pn);
        row.op_event = operator_norm_event(row.norm, params);
        const auto counts = a.row_counts();
        const auto max_count = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
        row.omega_event = static_cast<double>(max_count) <= options.c_bar * pn;
        double total = 0.0;
        for (std::size_t d = 0; d < options.gaussian_draws; ++d) {
            total += spectral_norm(gaussian_on_pattern(a, trial.substream(100 + d)), options.tol);
        }
        row.gaussian_norm = total / static_cast<double>(options.gaussian_draws);
        row.bvh_bound = bvh_bound(indicator_profile(a), static_cast<double>(params.n), options.bvh_eps);
        row.bvh_satisfied = row.gaussian_norm <= row.bvh_bound;
        return row;
    });

    const auto count = static_cast<double>(trials);
    for (const auto& row : report.trials) {
        report.mean_ratio += row.norm_over_sqrt_pn / count;
        report.op_violation_fraction += (row.op_event ? 0.0 : 1.0) / count;
        report.omega_fraction += (row.omega_event ? 1.0 : 0.0) / count;
        report.bvh_fraction += (row.bvh_satisfied ? 1.0 : 0.0) / count;
        report.mean_gaussian_norm += row.gaussian_norm / count;
        report.mean_bvh_bound += row.bvh_bound / count;
    }
    return report;
}

void write_norm_csv(std::ostream& out, const NormBoundReport& report)
{
    CsvWriter csv(out, "norm-check", 1,
                  {"trial", "norm", "norm_over_sqrt_pn", "omega_event", "bvh_bound", "bvh_satisfied"});
    for (const auto& t : report.trials) {
        csv.row() << t.trial << t.norm << t.norm_over_sqrt_pn << t.omega_event << t.bvh_bound << t.bvh_satisfied;
    }
}

} // namespace symsparse
