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
#include <vector>

#include <Eigen/Dense>

#include "symsparse/distribution.hpp"
#include "symsparse/rng.hpp"
#include "symsparse/sparse_matrix.hpp"

namespace symsparse {

/// Dimension, mask probability, entry law and operator-norm constant of the
/// masked symmetric ensemble a_ij = xi_ij * delta_ij (i <= j, diagonal included).
struct EnsembleParams {
    std::size_t n = 2;
    double p = 1.0;
    EntryDistribution dist = EntryDistribution::rademacher();
    double c_op = 3.0;

    /// Throws ParameterError unless n >= 1, 0 <= p <= 1 and c_op > 0.
    void validate() const;
    friend bool operator==(const EnsembleParams&, const EnsembleParams&) = default;
};

/// Independent copy of the ensemble: each upper-triangle slot is present
/// with probability p and then drawn from `dist`.
SparseSymmetricMatrix sample_matrix(const EnsembleParams& params, const RngStream& stream);

/// Vector with i.i.d. coordinates delta_i * xi_i.
Eigen::VectorXd sample_sparse_vector(std::size_t n, double p, const EntryDistribution& dist, const RngStream& stream);

/// Matrix with the same mask as `pattern` and fresh standard normal values.
SparseSymmetricMatrix gaussian_on_pattern(const SparseSymmetricMatrix& pattern, const RngStream& stream);

struct TwoSidedTail {
    double p_minus; // P(xi <= -c)
    double p_plus;  // P(xi >= c)
};

/// Empirical frequencies of the two tails from `samples` draws.
TwoSidedTail two_sided_tail_estimate(const EntryDistribution& dist, double c, std::size_t samples,
                                     const RngStream& stream);

/// Exact tails for finitely supported kinds; CapabilityError otherwise.
TwoSidedTail two_sided_tail_exact(const EntryDistribution& dist, double c);

struct WitnessSets {
    std::vector<std::size_t> one_hit; // rows with a single qualifying J-entry
    std::vector<std::size_t> clear;   // rows vanishing on every J' column
};

/// Row sets of the combinatorial sparsity argument.
///
/// `one_hit` holds rows i outside J u J' whose only nonzero J-entry a_{i,j}
/// satisfies |a_ij| >= c1 and sign(a_ij) = signs[position of j in J];
/// `clear` holds rows outside J u J' that vanish on all of J'.
WitnessSets row_witness_sets(const SparseSymmetricMatrix& a, const std::vector<std::size_t>& j_set,
                             const std::vector<std::size_t>& j_prime, const std::vector<int>& signs, double c1);

/// Size of J' used with |J| = kappa: ceil(kappa * sqrt(pn) ^ 1/(8p)), at least 1.
std::size_t witness_clear_size(std::size_t n, double p, std::size_t kappa);

/// Fraction of `trials` realizations where |one_hit n clear| >= 1 for a
/// random disjoint (J, J') with |J| = kappa, |J'| = witness_clear_size and
/// random signs.
double witness_event_frequency(const EnsembleParams& params, std::size_t kappa, double c1, std::size_t trials,
                               std::uint64_t master_seed, std::size_t workers = 1);

/// Uniformly random k-subset of {0..n-1} (sorted), drawn from `stream`.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, const RngStream& stream,
                                       std::uint64_t first_draw = 0);

} // namespace symsparse
