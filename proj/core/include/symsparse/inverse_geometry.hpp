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
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "symsparse/ensemble.hpp"
#include "symsparse/sparse_matrix.hpp"
#include "symsparse/stats.hpp"
#include "symsparse/structure.hpp"

namespace symsparse {

/// dist(A_j, H_j) with H_j the span of the other columns, by projecting onto
/// the numerical column space of a column-pivoted QR of those columns.
double distance_to_complement_span(const Eigen::MatrixXd& a, std::size_t j);
double distance_to_complement_span(const SparseSymmetricMatrix& a, std::size_t j);

struct DistanceRecord {
    std::size_t j = 0;
    double geometric_distance = 0.0;
    double quadratic_form_distance = 0.0; // meaningless when b_singular
    bool b_singular = false;
};

/// |<B^-1 X, X> - a_00| / sqrt(1 + ||B^-1 X||^2) for column 0, with B the
/// minor without row and column 0 and X the rest of column 0. B is factored
/// (full-pivot LU), never inverted; a rank-deficient B sets b_singular.
DistanceRecord quadratic_form_distance(const Eigen::MatrixXd& a);
DistanceRecord quadratic_form_distance(const SparseSymmetricMatrix& a);

/// Records for every column j: column j is moved to the front by a symmetric
/// permutation, which leaves dist(A_j, H_j) unchanged.
std::vector<DistanceRecord> distance_records(const SparseSymmetricMatrix& a);

/// Dense symmetric factorization shared by the inverse-based experiments.
class SymmetricInverse {
public:
    explicit SymmetricInverse(const SparseSymmetricMatrix& a);

    double s_min() const noexcept { return s_min_; }
    double norm() const noexcept { return norm_; }
    /// s_min below 1e3 * machine epsilon * ||A||.
    bool near_singular() const noexcept { return near_singular_; }
    /// ||A^-1||_HS; requires !near_singular().
    double hs_norm() const;
    Eigen::VectorXd solve(const Eigen::VectorXd& x) const;
    /// 1 / ||row j of A^-1||_2 for every j, which equals dist(A_j, H_j).
    std::vector<double> column_distances() const;
    /// Unit eigenvector of the eigenvalue of least magnitude.
    Eigen::VectorXd min_vector() const;

private:
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
    double s_min_ = 0.0;
    double norm_ = 0.0;
    bool near_singular_ = true;
    Eigen::Index min_index_ = 0;
};

struct InverseImageStats {
    double inv_hs_norm = 0.0;
    double inv_image_norm = 0.0;
    double ratio = 0.0; // inv_image_norm / (sqrt(p) inv_hs_norm)
    bool singular = false;
};

InverseImageStats inverse_image_stats(const SymmetricInverse& inv, const Eigen::VectorXd& x, double p);
InverseImageStats inverse_image_stats(const SparseSymmetricMatrix& a, const Eigen::VectorXd& x, double p);

struct InvertibilityReport {
    std::size_t trials = 0;
    std::size_t lhs_hits = 0;        // s_min <= eps sqrt(p/n) with an incompressible minimizer
    std::size_t incompressible = 0;  // trials whose minimizer is in Incomp(M, rho)
    double lhs = 0.0;
    Interval lhs_ci{0.0, 0.0};
    double rhs = 0.0;                // (1/M) sum_j P(dist(A_j, H_j) <= sqrt(p) eps)
    double rhs_halfwidth = 0.0;
    bool holds = true;               // lhs_ci.lo <= rhs + rhs_halfwidth
};

/// Monte Carlo of both sides of the invertibility-via-distance inequality.
InvertibilityReport invertibility_via_distance_experiment(const EnsembleParams& params, double eps, std::size_t m,
                                                          double rho, std::size_t trials, std::uint64_t master_seed,
                                                          std::size_t workers = 1);

struct FirstMomentReport {
    std::size_t matrices = 0;
    std::size_t excluded = 0;        // near-singular realizations
    std::size_t draws = 0;           // X draws per matrix
    MeanCi normalized_moment{0.0, 0.0}; // mean of ||A^-1 X||^2 / (p ||A^-1||_HS^2)
    double eps = 0.0;
    double lower_constant = 0.0;     // C in (i)
    double freq_lower_constant = 0.0; // (i)   ||A^-1 X|| >= 1/C
    double freq_markov = 0.0;         // (ii)  ||A^-1 X|| <= sqrt(p) eps^-1/2 ||A^-1||_HS
    double freq_lower_hs = 0.0;       // (iii) ||A^-1 X|| >= sqrt(p) eps ||A^-1||_HS
};

/// For each of `matrices` realizations, `draws` fresh vectors X.
FirstMomentReport first_moment_experiment(const EnsembleParams& params, std::size_t matrices, std::size_t draws,
                                          double eps, double lower_constant, std::uint64_t master_seed,
                                          std::size_t workers = 1);

struct RlcdStructureReport {
    std::size_t trials = 0;
    std::size_t excluded = 0;
    std::size_t incompressible = 0;
    std::size_t spread_defined = 0;
    double incompressible_fraction = 0.0; // over non-excluded trials
    std::vector<double> thresholds;
    std::vector<double> survival; // fraction with certified lower bound >= threshold
    std::vector<double> lower_bounds; // per non-excluded trial; 0 when not spread
};

/// x0 = A^-1 u / ||A^-1 u||: incompressibility and certified regularized-LCD
/// lower bounds against a threshold schedule.
RlcdStructureReport rlcd_structure_experiment(const EnsembleParams& params, const Eigen::VectorXd& u,
                                                    const StructureConstants& consts, std::size_t budget,
                                                    std::size_t trials, const std::vector<double>& thresholds,
                                                    std::uint64_t master_seed, std::size_t workers = 1);

struct QuadraticRow {
    double eps = 0.0;
    std::size_t hits_zero = 0;
    std::size_t hits_median = 0;
    double p_hat_zero = 0.0;
    Interval ci_zero{0.0, 0.0};
    double p_hat_median = 0.0;
    Interval ci_median{0.0, 0.0};
};

struct QuadraticReport {
    std::size_t trials = 0;
    std::size_t excluded = 0;
    double median_center = 0.0;
    std::vector<QuadraticRow> rows;
    std::optional<LinearFit> slope_zero;   // log p_hat vs log eps, u = 0
    std::optional<LinearFit> slope_median; // same at the median center
};

/// P(|<A^-1 X, X> - u| / sqrt(1 + ||A^-1 X||^2) <= eps sqrt(p), ||A|| <= C_op sqrt(pn))
/// at u = 0 and u = the empirical median of <A^-1 X, X>.
QuadraticReport quadratic_smallball_experiment(const EnsembleParams& params, const std::vector<double>& eps_grid,
                                               std::size_t trials, std::uint64_t master_seed,
                                               std::size_t workers = 1);

/// CSV: j,geometric_distance,quadratic_form_distance,b_singular
void write_distance_csv(std::ostream& out, const std::vector<DistanceRecord>& records);

/// CSV: eps,hits_u0,p_hat_u0,ci_lo_u0,ci_hi_u0,hits_median,p_hat_median,ci_lo_median,ci_hi_median
void write_quadratic_csv(std::ostream& out, const QuadraticReport& report);

} // namespace symsparse
