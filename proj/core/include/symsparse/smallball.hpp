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
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "symsparse/distribution.hpp"
#include "symsparse/rng.hpp"

namespace symsparse {

/// Estimate of the Levy concentration function sup_u P(||Z - u|| <= eps).
struct ConcentrationEstimate {
    double epsilon = 0.0;
    double value = 0.0;
    std::size_t samples = 0;
    double ci_halfwidth = 0.0;
    /// Set when the sup over centers was only searched over candidates, so
    /// `value` is a lower bound of the empirical sup.
    bool lower_bound_of_sup = false;
};

/// Two-sided DKW band at 95%: the window mass F(b) - F(a-) deviates from its
/// population value by at most twice the sup-norm CDF error, so the reported
/// half-width is 2 sqrt(log(2 / 0.05) / (2 N)).
double dkw_window_halfwidth(std::size_t samples, double alpha = 0.05);

/// Exact maximization of the empirical mass of a closed window of width
/// 2 eps (sliding window over sorted samples). Throws on empty input or eps < 0.
ConcentrationEstimate levy_concentration_scalar(std::span<const double> samples, double eps);

/// Same scan over a finitely supported law; exact.
double levy_concentration_law(const DiscreteLaw& law, double eps);

/// Vector case: the sup over centers is searched over the origin and every
/// sample point, giving a lower bound of the empirical sup.
ConcentrationEstimate levy_concentration_vector(const std::vector<Eigen::VectorXd>& samples, double eps);

/// eps + 1 / (sqrt(p) * lcd); the unknown absolute constant is not applied.
double lcd_smallball_bound(double p, double eps, double lcd_value);

/// eps / sqrt(lambda) + 1 / (sqrt(p) * rlcd_lower). Throws when lambda <= 0.
double rlcd_smallball_bound(double lambda, double p, double eps, double rlcd_lower);

/// log of bracket^(n - lambda n), evaluated in log space.
double rlcd_matrix_bound_log(double bracket, std::size_t n, double lambda);

struct PaleyZygmundResult {
    double probability; // P(xi > theta E xi)
    double bound;       // (E xi - theta E xi)^2 / E xi^2
    bool holds;
};

/// Exact check of P(xi > theta E xi) >= (1 - theta)^2 (E xi)^2 / E xi^2 on a
/// finitely supported law with E xi > 0 and theta in [0, 1].
PaleyZygmundResult paley_zygmund_check(const DiscreteLaw& law, double theta);

/// CapabilityError unless the distribution is finitely supported.
PaleyZygmundResult paley_zygmund_check(const EntryDistribution& dist, double theta);

/// Coordinate sampler: value addressed by (stream, index).
using CoordinateSampler = std::function<double(const RngStream&, std::uint64_t)>;

CoordinateSampler sampler_for(const EntryDistribution& dist, double p = 1.0);

struct TensorizationReport {
    double vector_estimate = 0.0;     // L(X, eps sqrt(n)), lower bound of the sup
    double coordinate_estimate = 0.0; // L(X_k, eps), pooled over coordinates
    double fitted_constant = 0.0;     // smallest C with vector <= (C * coordinate)^n
    std::size_t trials = 0;
};

/// Monte Carlo comparison of the concentration of a vector with i.i.d.
/// coordinates against the n-th power of the coordinate concentration.
TensorizationReport tensorization_check(const CoordinateSampler& coordinate, std::size_t n, double eps,
                                        std::size_t trials, const RngStream& stream);

struct DecouplingReport {
    double lhs = 0.0;       // L(<GX, X>, eps)
    double rhs = 0.0;       // P(|<G P_Jc (X - X'), P_J X> - v| <= eps)
    double slack = 0.0;     // sum of CI half-widths on the squared scale
    bool holds = false;     // lhs^2 <= rhs + slack
    std::size_t trials = 0;
};

/// Monte Carlo check of L(<GX,X>, eps)^2 <= P(|<G P_Jc(X - X'), P_J X> - v| <= eps)
/// with v = -(<G_JcJc Z, Z> - <G_JcJc Z', Z'>) / 2, Z = P_Jc X, Z' = P_Jc X'.
/// Coordinates of X are delta * xi with P(delta = 1) = x_sparsity.
DecouplingReport decoupling_consequence_check(const Eigen::MatrixXd& g, const std::vector<std::size_t>& j_set,
                                              const EntryDistribution& dist, double eps, std::size_t trials,
                                              const RngStream& stream, double x_sparsity = 1.0);

/// Same inequality by exact enumeration over a finitely supported coordinate law.
DecouplingReport decoupling_consequence_exact(const Eigen::MatrixXd& g, const std::vector<std::size_t>& j_set,
                                              const DiscreteLaw& law, double eps);

/// Law of delta * xi for a finitely supported xi and P(delta = 1) = p.
DiscreteLaw masked_law(const DiscreteLaw& law, double p);

struct SweepRow {
    double eps;
    double estimate;
    double ci;
    double bound_bracket;
    bool pass;
};

/// CSV: eps,estimate,ci,bound_bracket,pass
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const char* schema = "smallball");

} // namespace symsparse
