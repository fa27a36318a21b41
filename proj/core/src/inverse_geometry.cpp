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

#include "symsparse/inverse_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "symsparse/csv.hpp"
#include "symsparse/error.hpp"
#include "symsparse/lcd.hpp"
#include "symsparse/parallel.hpp"
#include "symsparse/spectra.hpp"

namespace symsparse {

double distance_to_complement_span(const Eigen::MatrixXd& a, std::size_t j)
{
    require(a.rows() == a.cols(), "matrix must be square");
    const Eigen::Index n = a.rows();
    require(n >= 2, "distance needs n >= 2");
    require(j < static_cast<std::size_t>(n), "column index out of range");
    const auto jj = static_cast<Eigen::Index>(j);

    Eigen::MatrixXd others(n, n - 1);
    others.leftCols(jj) = a.leftCols(jj);
    others.rightCols(n - 1 - jj) = a.rightCols(n - 1 - jj);
    const Eigen::VectorXd col = a.col(jj);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
    const Eigen::Index rank = qr.rank();
    const Eigen::VectorXd coeffs = qr.householderQ().transpose() * col;
    return coeffs.tail(n - rank).norm();
}

double distance_to_complement_span(const SparseSymmetricMatrix& a, std::size_t j)
{
    return distance_to_complement_span(a.to_dense(), j);
}

DistanceRecord quadratic_form_distance(const Eigen::MatrixXd& a)
{
    require(a.rows() == a.cols(), "matrix must be square");
    const Eigen::Index n = a.rows();
    require(n >= 2, "distance needs n >= 2");
    DistanceRecord rec;
    rec.j = 0;
    rec.geometric_distance = distance_to_complement_span(a, 0);

    const Eigen::MatrixXd b = a.bottomRightCorner(n - 1, n - 1);
    const Eigen::VectorXd x = a.col(0).tail(n - 1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (!lu.isInvertible()) {
        rec.b_singular = true;
        rec.quadratic_form_distance = std::numeric_limits<double>::quiet_NaN();
        return rec;
    }
    const Eigen::VectorXd y = lu.solve(x);
    rec.quadratic_form_distance = std::abs(y.dot(x) - a(0, 0)) / std::sqrt(1.0 + y.squaredNorm());
    return rec;
}

DistanceRecord quadratic_form_distance(const SparseSymmetricMatrix& a)
{
    return quadratic_form_distance(a.to_dense());
}

std::vector<DistanceRecord> distance_records(const SparseSymmetricMatrix& a)
{
    const Eigen::MatrixXd dense = a.to_dense();
    const Eigen::Index n = dense.rows();
    std::vector<DistanceRecord> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXi order(n);
        order[0] = static_cast<int>(j);
        for (Eigen::Index k = 0, pos = 1; k < n; ++k) {
            if (k != j) {
                order[pos++] = static_cast<int>(k);
            }
        }
        const Eigen::MatrixXd permuted = dense(order, order);
        DistanceRecord rec = quadratic_form_distance(permuted);
        rec.j = static_cast<std::size_t>(j);
        out.push_back(rec);
    }
    return out;
}

SymmetricInverse::SymmetricInverse(const SparseSymmetricMatrix& a)
{
    require(a.n() >= 1, "empty matrix");
    const auto dec = full_symmetric_decomposition(a);
    values_ = dec.values;
    vectors_ = dec.vectors;
    values_.cwiseAbs().minCoeff(&min_index_);
    s_min_ = std::abs(values_[min_index_]);
    norm_ = values_.cwiseAbs().maxCoeff();
    near_singular_ = !(s_min_ > 1e3 * std::numeric_limits<double>::epsilon() * norm_);
}

double SymmetricInverse::hs_norm() const
{
    require(!near_singular_, "matrix is singular to working precision");
    return values_.cwiseInverse().norm();
}

Eigen::VectorXd SymmetricInverse::solve(const Eigen::VectorXd& x) const
{
    require(!near_singular_, "matrix is singular to working precision");
    require(x.size() == values_.size(), "vector length does not match the matrix");
    return vectors_ * (vectors_.transpose() * x).cwiseQuotient(values_);
}

std::vector<double> SymmetricInverse::column_distances() const
{
    require(!near_singular_, "matrix is singular to working precision");
    const Eigen::MatrixXd scaled = vectors_ * values_.cwiseInverse().asDiagonal();
    std::vector<double> out(static_cast<std::size_t>(values_.size()));
    for (Eigen::Index j = 0; j < values_.size(); ++j) {
        out[static_cast<std::size_t>(j)] = 1.0 / scaled.row(j).norm();
    }
    return out;
}

Eigen::VectorXd SymmetricInverse::min_vector() const
{
    return vectors_.col(min_index_);
}

InverseImageStats inverse_image_stats(const SymmetricInverse& inv, const Eigen::VectorXd& x, double p)
{
    require(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
    InverseImageStats s;
    if (inv.near_singular()) {
        s.singular = true;
        return s;
    }
    s.inv_hs_norm = inv.hs_norm();
    s.inv_image_norm = inv.solve(x).norm();
    s.ratio = s.inv_image_norm / (std::sqrt(p) * s.inv_hs_norm);
    return s;
}

InverseImageStats inverse_image_stats(const SparseSymmetricMatrix& a, const Eigen::VectorXd& x, double p)
{
    return inverse_image_stats(SymmetricInverse(a), x, p);
}

InvertibilityReport invertibility_via_distance_experiment(const EnsembleParams& params, double eps, std::size_t m,
                                                          double rho, std::size_t trials, std::uint64_t master_seed,
                                                          std::size_t workers)
{
    params.validate();
    require(params.n >= 2, "n must be at least 2");
    require(m >= 1 && m < params.n, "M must lie in [1, n)");
    require(eps >= 0.0, "eps must be nonnegative");
    require(rho > 0.0, "rho must be positive");
    InvertibilityReport report;
    report.trials = trials;
    if (trials == 0) {
        return report;
    }
    const double n = static_cast<double>(params.n);
    const double lhs_level = eps * std::sqrt(params.p / n);
    const double rhs_level = std::sqrt(params.p) * eps;

    struct Trial {
        bool lhs = false;
        bool incompressible = false;
        std::size_t close_columns = 0;
    };
    const auto rows = parallel_map(trials, workers, [&](std::size_t t) {
        const RngStream trial(master_seed, t);
        const auto a = sample_matrix(params, trial.substream(0));
        const SymmetricInverse inv(a);
        Trial r;
        r.incompressible = !is_compressible(inv.min_vector(), m, rho);
        r.lhs = r.incompressible && inv.s_min() <= lhs_level;
        if (inv.near_singular()) {
            const Eigen::MatrixXd dense = a.to_dense();
            for (std::size_t j = 0; j < params.n; ++j) {
                r.close_columns += distance_to_complement_span(dense, j) <= rhs_level ? 1 : 0;
            }
        } else {
            for (double d : inv.column_distances()) {
                r.close_columns += d <= rhs_level ? 1 : 0;
            }
        }
        return r;
    });

    std::vector<double> per_trial;
    per_trial.reserve(trials);
    for (const auto& r : rows) {
        report.lhs_hits += r.lhs ? 1 : 0;
        report.incompressible += r.incompressible ? 1 : 0;
        per_trial.push_back(static_cast<double>(r.close_columns) / static_cast<double>(m));
    }
    report.lhs = static_cast<double>(report.lhs_hits) / static_cast<double>(trials);
    report.lhs_ci = wilson_interval(report.lhs_hits, trials);
    const MeanCi rhs = mean_with_ci(per_trial);
    report.rhs = rhs.mean;
    report.rhs_halfwidth = rhs.halfwidth;
    report.holds = report.lhs_ci.lo <= report.rhs + report.rhs_halfwidth;
    return report;
}

FirstMomentReport first_moment_experiment(const EnsembleParams& params, std::size_t matrices, std::size_t draws,
                                          double eps, double lower_constant, std::uint64_t master_seed,
                                          std::size_t workers)
{
    params.validate();
    require(params.p > 0.0, "p must be positive");
    require(draws >= 1, "need at least one X draw per matrix");
    require(eps > 0.0, "eps must be positive");
    require(lower_constant > 0.0, "lower constant must be positive");
    FirstMomentReport report;
    report.matrices = matrices;
    report.draws = draws;
    report.eps = eps;
    report.lower_constant = lower_constant;
    if (matrices == 0) {
        return report;
    }
    struct Cell {
        bool excluded = false;
        std::vector<double> moments;
        std::size_t lower = 0;
        std::size_t markov = 0;
        std::size_t lower_hs = 0;
    };
    const double sp = std::sqrt(params.p);
    const auto cells = parallel_map(matrices, workers, [&](std::size_t t) {
        const RngStream trial(master_seed, t);
        const SymmetricInverse inv(sample_matrix(params, trial.substream(0)));
        Cell c;
        if (inv.near_singular()) {
            c.excluded = true;
            return c;
        }
        const double hs = inv.hs_norm();
        const RngStream xs = trial.substream(1);
        c.moments.reserve(draws);
        for (std::size_t d = 0; d < draws; ++d) {
            const auto x = sample_sparse_vector(params.n, params.p, params.dist, xs.substream(d));
            const double w = inv.solve(x).norm();
            c.moments.push_back(w * w / (params.p * hs * hs));
            c.lower += w >= 1.0 / lower_constant ? 1 : 0;
            c.markov += w <= sp / std::sqrt(eps) * hs ? 1 : 0;
            c.lower_hs += w >= sp * eps * hs ? 1 : 0;
        }
        return c;
    });

    std::vector<double> all;
    std::size_t lower = 0;
    std::size_t markov = 0;
    std::size_t lower_hs = 0;
    for (const auto& c : cells) {
        if (c.excluded) {
            ++report.excluded;
            continue;
        }
        all.insert(all.end(), c.moments.begin(), c.moments.end());
        lower += c.lower;
        markov += c.markov;
        lower_hs += c.lower_hs;
    }
    if (all.empty()) {
        return report;
    }
    const double total = static_cast<double>(all.size());
    report.normalized_moment = mean_with_ci(all);
    report.freq_lower_constant = static_cast<double>(lower) / total;
    report.freq_markov = static_cast<double>(markov) / total;
    report.freq_lower_hs = static_cast<double>(lower_hs) / total;
    return report;
}

RlcdStructureReport rlcd_structure_experiment(const EnsembleParams& params, const Eigen::VectorXd& u,
                                                    const StructureConstants& consts, std::size_t budget,
                                                    std::size_t trials, const std::vector<double>& thresholds,
                                                    std::uint64_t master_seed, std::size_t workers)
{
    params.validate();
    consts.validate();
    require(u.size() == static_cast<Eigen::Index>(params.n), "u has the wrong length");
    require(u.norm() > 0.0, "u must be nonzero");
    require(budget >= 1, "budget must be positive");
    require(std::is_sorted(thresholds.begin(), thresholds.end()), "thresholds must be increasing");
    const std::size_t m = std::max<std::size_t>(1, compressibility_budget(params.n, consts));
    require(m < params.n, "compressibility budget must be below n");

    RlcdStructureReport report;
    report.trials = trials;
    report.thresholds = thresholds;
    report.survival.assign(thresholds.size(), 0.0);

    struct Trial {
        bool excluded = false;
        bool incompressible = false;
        bool spread = false;
        double lower = 0.0;
    };
    const auto rows = parallel_map(trials, workers, [&](std::size_t t) {
        const RngStream trial(master_seed, t);
        const SymmetricInverse inv(sample_matrix(params, trial.substream(0)));
        Trial r;
        if (inv.near_singular()) {
            r.excluded = true;
            return r;
        }
        Eigen::VectorXd x0 = inv.solve(u);
        x0 /= x0.norm();
        r.incompressible = !is_compressible(x0, m, consts.c_d);
        if (r.incompressible && spread_set(x0, consts)) {
            r.spread = true;
            r.lower = regularized_lcd(x0, consts, budget, trial.substream(1)).lower_bound;
        }
        return r;
    });

    std::size_t used = 0;
    for (const auto& r : rows) {
        if (r.excluded) {
            ++report.excluded;
            continue;
        }
        ++used;
        report.incompressible += r.incompressible ? 1 : 0;
        report.spread_defined += r.spread ? 1 : 0;
        report.lower_bounds.push_back(r.lower);
        for (std::size_t k = 0; k < thresholds.size(); ++k) {
            if (r.spread && r.lower >= thresholds[k]) {
                report.survival[k] += 1.0;
            }
        }
    }
    if (used > 0) {
        report.incompressible_fraction = static_cast<double>(report.incompressible) / static_cast<double>(used);
        for (auto& s : report.survival) {
            s /= static_cast<double>(used);
        }
    }
    return report;
}

QuadraticReport quadratic_smallball_experiment(const EnsembleParams& params, const std::vector<double>& eps_grid,
                                               std::size_t trials, std::uint64_t master_seed, std::size_t workers)
{
    params.validate();
    require(params.p > 0.0, "p must be positive");
    require(!eps_grid.empty(), "eps grid is empty");
    require(std::is_sorted(eps_grid.begin(), eps_grid.end()), "eps grid must be increasing");
    require(eps_grid.front() >= 0.0, "eps must be nonnegative");
    QuadraticReport report;
    report.trials = trials;

    struct Trial {
        bool excluded = false;
        bool op_event = false;
        double quad = 0.0;
        double denom = 1.0;
    };
    const auto rows = parallel_map(trials, workers, [&](std::size_t t) {
        const RngStream trial(master_seed, t);
        const SymmetricInverse inv(sample_matrix(params, trial.substream(0)));
        Trial r;
        if (inv.near_singular()) {
            r.excluded = true;
            return r;
        }
        const auto x = sample_sparse_vector(params.n, params.p, params.dist, trial.substream(1));
        const Eigen::VectorXd y = inv.solve(x);
        r.op_event = operator_norm_event(inv.norm(), params);
        r.quad = y.dot(x);
        r.denom = std::sqrt(1.0 + y.squaredNorm());
        return r;
    });

    std::vector<double> quads;
    for (const auto& r : rows) {
        if (r.excluded) {
            ++report.excluded;
        } else {
            quads.push_back(r.quad);
        }
    }
    const std::size_t used = quads.size();
    report.median_center = used > 0 ? median(quads) : 0.0;

    const double sp = std::sqrt(params.p);
    std::vector<double> lx0, ly0, lxm, lym;
    for (double eps : eps_grid) {
        QuadraticRow row;
        row.eps = eps;
        for (const auto& r : rows) {
            if (r.excluded || !r.op_event) {
                continue;
            }
            row.hits_zero += std::abs(r.quad) / r.denom <= eps * sp ? 1 : 0;
            row.hits_median += std::abs(r.quad - report.median_center) / r.denom <= eps * sp ? 1 : 0;
        }
        if (used > 0) {
            row.p_hat_zero = static_cast<double>(row.hits_zero) / static_cast<double>(used);
            row.p_hat_median = static_cast<double>(row.hits_median) / static_cast<double>(used);
            row.ci_zero = wilson_interval(row.hits_zero, used);
            row.ci_median = wilson_interval(row.hits_median, used);
        }
        if (eps > 0.0 && row.hits_zero > 0) {
            lx0.push_back(std::log(eps));
            ly0.push_back(std::log(row.p_hat_zero));
        }
        if (eps > 0.0 && row.hits_median > 0) {
            lxm.push_back(std::log(eps));
            lym.push_back(std::log(row.p_hat_median));
        }
        report.rows.push_back(row);
    }
    report.slope_zero = least_squares(lx0, ly0);
    report.slope_median = least_squares(lxm, lym);
    return report;
}

void write_distance_csv(std::ostream& out, const std::vector<DistanceRecord>& records)
{
    CsvWriter csv(out, "distance-check", 1, {"j", "geometric_distance", "quadratic_form_distance", "b_singular"});
    for (const auto& r : records) {
        csv.row() << r.j << r.geometric_distance << r.quadratic_form_distance << r.b_singular;
    }
}

void write_quadratic_csv(std::ostream& out, const QuadraticReport& report)
{
    CsvWriter csv(out, "quadratic", 1,
                  {"eps", "hits_u0", "p_hat_u0", "ci_lo_u0", "ci_hi_u0", "hits_median", "p_hat_median",
                   "ci_lo_median", "ci_hi_median"});
    for (const auto& r : report.rows) {
        csv.row() << r.eps << r.hits_zero << r.p_hat_zero << r.ci_zero.lo << r.ci_zero.hi << r.hits_median
                  << r.p_hat_median << r.ci_median.lo << r.ci_median.hi;
    }
}

} // namespace symsparse
