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

#include "symsparse/rng.hpp"
#include "symsparse/structure.hpp"

namespace symsparse {

/// Least common denominator D_L(x) = inf{theta > 0 : dist(theta x, Z^n) < L sqrt(log+(theta / L))}.
///
/// `value` is an upper bracket of the infimum within `tol`, so it is itself a
/// qualifying theta (witness_theta == value) and always exceeds L. When no
/// theta up to the cap qualifies, `capped` is set and value == theta_cap is
/// only a certified lower bound.
struct LcdResult {
    double value = 0.0;
    double witness_theta = 0.0;
    double witness_dist = 0.0;
    bool capped = false;
};

/// 10 n sqrt(n).
double default_theta_cap(std::size_t n);

/// dist(theta x, Z^n).
double lattice_distance(const Eigen::VectorXd& x, double theta);

/// L sqrt(log+(theta / L)).
double lcd_threshold(double theta, double L);

/// Exact event-driven scan over theta in (L, theta_cap].
///
/// Between consecutive breakpoints (theta where some theta |x_i| crosses a
/// half-integer) the nearest lattice point is fixed, so dist^2 is a quadratic
/// in theta and dist^2 - L^2 log(theta / L) is convex; its first negative
/// point on each interval is located in closed form and refined by bisection.
/// Requires L >= 1, theta_cap > L, tol > 0 and x != 0.
LcdResult lcd(const Eigen::VectorXd& x, double L, double theta_cap, double tol = 1e-9);

/// Replays a result: dist(witness x, Z^n) < L sqrt(log+(witness / L)) + tol.
bool lcd_certificate_holds(const Eigen::VectorXd& x, double L, const LcdResult& result, double tol);

/// x_I / ||x_I||_2 as a vector in R^|I|.
Eigen::VectorXd normalized_restriction(const Eigen::VectorXd& x, const std::vector<std::size_t>& subset);

struct RegularizedLcdOptions {
    double theta_cap = 0.0; // 0 selects default_theta_cap(n) of the full vector
    double tol = 1e-9;
    bool sample_only = false; // never switch to enumeration, even when the budget allows it
};

struct RegularizedLcdResult {
    double lower_bound = 0.0;
    std::vector<std::size_t> witness_subset; // indices into x, increasing
    bool exact = false;                      // every subset was evaluated
    bool capped = false;                     // the witness LCD hit the cap
    std::size_t subsets_evaluated = 0;
    LcdResult witness;
};

/// Regularized LCD: max of D_L(x_I / ||x_I||) over I in spread(x) with
/// |I| = ceil(lambda n).
///
/// Enumerates every subset when their number is at most `budget`; otherwise
/// evaluates `budget` uniform subsets, subset j drawn from stream.substream(j),
/// and reports the best as a certified lower bound. CapabilityError when the
/// spread set is undefined.
RegularizedLcdResult regularized_lcd(const Eigen::VectorXd& x, const StructureConstants& consts, std::size_t budget,
                                     const RngStream& stream, const RegularizedLcdOptions& options = {});

enum class Membership { in, out, unknown };

const char* to_string(Membership m);

/// Membership in the sublevel set {x incompressible : regularized LCD <= D}.
/// "out" needs a certified lower bound above D; "in" needs exact enumeration.
Membership sublevel_membership(const Eigen::VectorXd& x, const StructureConstants& consts, double level,
                               std::size_t budget, const RngStream& stream, const RegularizedLcdOptions& options = {});

} // namespace symsparse
