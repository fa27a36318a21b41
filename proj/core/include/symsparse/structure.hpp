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
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace symsparse {

/// Constants of the compressible/incompressible decomposition and of the
/// regularized LCD. None of them is fixed numerically by the theory; the
/// defaults satisfy the required relations and every report records them.
struct StructureConstants {
    double c_s = 0.1;      // sparsity fraction of Comp(c_s n, c_d)
    double c_d = 0.1;      // distance of Comp(c_s n, c_d)
    double c_oo = 0.025;   // spread fraction, |spread(x)| = ceil(c_oo n)
    double lambda = 0.01;  // subset fraction of the regularized LCD
    double L = 2.0;        // LCD scale
    double delta0 = 0.1;   // concentration constant
    double c_p = 1.0 / 3.0; // sparsity exponent, p >= n^-c_p

    /// Throws ParameterError unless c_s c_d^2 / 4 <= c_oo <= 1/4,
    /// 0 < lambda < c_oo, L >= 1 and the remaining constants are positive.
    void validate() const;

    friend bool operator==(const StructureConstants&, const StructureConstants&) = default;
};

/// Indices sorted by non-increasing |x_k|, ties broken by lower index.
std::vector<std::size_t> decreasing_rearrangement(const Eigen::VectorXd& x);

struct SparseApproximation {
    double distance;
    Eigen::VectorXd nearest;
};

/// Nearest m-sparse vector to a unit vector: keep the m largest coordinates.
/// Requires 1 <= m < n and ||x|| = 1 within 1e-12.
SparseApproximation sparse_tail_distance(const Eigen::VectorXd& x, std::size_t m);

/// x in Comp(m, delta): within distance delta of Sparse(m).
bool is_compressible(const Eigen::VectorXd& x, std::size_t m, double delta);

/// x in Dom(m, alpha): ||x_[m+1:n]||_2 <= alpha sqrt(m) ||x_[m+1:n]||_inf.
bool is_dominated(const Eigen::VectorXd& x, std::size_t m, double alpha);

/// ceil(fraction * n), ignoring rounding noise of the product (so that
/// ceil(24 / 12) is 2 even when 24 * (1 / 12) rounds above 2).
std::size_t fraction_count(double fraction, std::size_t n);

/// Sparsity budget floor(c_s n) used for Comp(c_s n, c_d).
std::size_t compressibility_budget(std::size_t n, const StructureConstants& consts);

/// ceil(c_oo n) indices k with c_d/sqrt(2n) <= |x_k| <= 1/sqrt(c_s n), chosen
/// by largest |x_k| then lowest index and returned in increasing order.
/// nullopt when x is compressible or too few coordinates qualify.
std::optional<std::vector<std::size_t>> spread_set(const Eigen::VectorXd& x, const StructureConstants& consts);

struct StructureReport {
    std::size_t m = 0;
    double dist_to_sparse = 0.0;
    bool comp_member = false;
    bool dom_member = false;
    std::optional<std::vector<std::size_t>> spread;
};

/// Classification of a unit vector against Sparse(m), Comp(m, delta),
/// Dom(m, alpha) and its spread set under `consts`.
StructureReport classify(const Eigen::VectorXd& x, std::size_t m, double delta, double alpha,
                         const StructureConstants& consts);

} // namespace symsparse
