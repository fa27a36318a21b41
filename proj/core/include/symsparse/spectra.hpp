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
#include <vector>

#include <Eigen/Dense>

#include "symsparse/ensemble.hpp"
#include "symsparse/sparse_matrix.hpp"

namespace symsparse {

inline constexpr std::size_t kDefaultDenseCap = 2048;

enum class SpectralMethod { dense_oracle, iterative };

struct SpectralSummary {
    double s_min = 0.0;
    double s_max = 0.0;
    double condition_number = 0.0; // +inf when s_min == 0
    SpectralMethod method = SpectralMethod::iterative;
    double residual = 0.0;          // achieved error bound on s_min and s_max
};

/// Symmetric tridiagonal matrix: diagonal d (size n), off-diagonal e (size n-1).
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const noexcept { return diag.size(); }
    /// Gershgorin bound on the spectral radius.
    double gershgorin_radius() const noexcept;
};

/// Orthogonal similarity reduction A = Q T Q^T (Householder).
Tridiagonal tridiagonalize(const SparseSymmetricMatrix& a);

/// Number of eigenvalues strictly below `shift`: the negative inertia of
/// T - shift*I, read off the pivots of its LDL^T factorization.
std::size_t count_below(const Tridiagonal& t, double shift);

/// k-th smallest eigenvalue (0-based) by inertia bisection to absolute
/// tolerance `abs_tol`; `width` receives the final bracket width.
double bisect_eigenvalue(const Tridiagonal& t, std::size_t k, double abs_tol, double* width = nullptr);

/// Dense oracle: all eigenvalues ascending. CapabilityError above `dense_cap`.
std::vector<double> full_symmetric_spectrum(const SparseSymmetricMatrix& a, std::size_t dense_cap = kDefaultDenseCap);

struct SymmetricEigendecomposition {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // orthonormal columns
    double residual;         // ||A V - V diag(values)||_F
};

SymmetricEigendecomposition full_symmetric_decomposition(const SparseSymmetricMatrix& a,
                                                         std::size_t dense_cap = kDefaultDenseCap);

/// min |lambda| by inertia bisection around zero; tolerance is
/// tol * max(1, ||A||). Returns exactly 0 when the matrix is singular to
/// working precision.
double smallest_singular_value(const SparseSymmetricMatrix& a, double tol);
double smallest_singular_value(const Tridiagonal& t, double tol, double* width = nullptr);

/// max |lambda| by Lanczos with full reorthogonalization, stopped when the
/// Ritz residual bound falls below tol * ||A||.
double spectral_norm(const SparseSymmetricMatrix& a, double tol);

/// s_min, s_max and condition number. The iterative path reuses one
/// tridiagonal reduction for both extremes.
SpectralSummary spectral_summary(const SparseSymmetricMatrix& a, double tol,
                                 SpectralMethod method = SpectralMethod::iterative,
                                 std::size_t dense_cap = kDefaultDenseCap);

/// ||A|| <= c_op * sqrt(p n).
bool operator_norm_event(const SparseSymmetricMatrix& a, const EnsembleParams& params);
bool operator_norm_event(double norm, const EnsembleParams& params);

/// Row-variance profile of a variance pattern b_ij.
struct MaskProfile {
    double sigma = 0.0;      // max_i sqrt(sum_j b_ij^2)
    double sigma_star = 0.0; // max_ij |b_ij|
};

/// Profile of the pattern b_ij = a_ij (pass a 0/1 mask to get the mask profile).
MaskProfile mask_profile(const SparseSymmetricMatrix& b);
/// Profile of the indicator pattern of the stored entries of `a`.
MaskProfile indicator_profile(const SparseSymmetricMatrix& a);

/// (1 + eps) * (2 sigma + 6 / sqrt(log(1 + eps)) * sigma_star * sqrt(log n)),
/// the expected-norm bound for Gaussian matrices with variance pattern b.
/// Requires eps in (0, 1/2]; `n` may be any real >= 1.
double bvh_bound(const MaskProfile& profile, double n, double eps);

struct NormTrial {
    std::size_t trial = 0;
    double norm = 0.0;
    double norm_over_sqrt_pn = 0.0;
    bool omega_event = false;     // max row count <= c_bar * p * n
    double gaussian_norm = 0.0;   // mean ||W|| over the Gaussian redraws
    double bvh_bound = 0.0;
    bool bvh_satisfied = false;
    bool op_event = false;        // ||A|| <= c_op sqrt(pn)
};

struct NormBoundOptions {
    double c_bar = 2.0;
    double bvh_eps = 0.5;
    std::size_t gaussian_draws = 4;
    double tol = 1e-8;
    std::size_t workers = 1;
};

struct NormBoundReport {
    std::vector<NormTrial> trials;
    double mean_ratio = 0.0;
    double op_violation_fraction = 0.0;
    double omega_fraction = 0.0;
    double bvh_fraction = 0.0;
    double mean_gaussian_norm = 0.0;
    double mean_bvh_bound = 0.0;
};

/// Norm statistics of `trials` independent realizations: ||A||/sqrt(pn), the
/// operator-norm event, the row-sparsity event and the comparison of the
/// Gaussian matrix on the same mask against bvh_bound of that mask.
/// CapabilityError for laws that are not sub-gaussian.
NormBoundReport norm_bound_experiment(const EnsembleParams& params, std::size_t trials, std::uint64_t master_seed,
                                      const NormBoundOptions& options = {});

/// CSV: trial,norm,norm_over_sqrt_pn,omega_event,bvh_bound,bvh_satisfied
void write_norm_csv(std::ostream& out, const NormBoundReport& report);

} // namespace symsparse
