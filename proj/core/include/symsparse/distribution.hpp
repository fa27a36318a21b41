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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symsparse/rng.hpp"

namespace symsparse {

/// A point mass of a finitely supported law.
struct Atom {
    double value;
    double mass;
};

/// Finitely supported law; masses are positive and sum to one.
using DiscreteLaw = std::vector<Atom>;

/// Validates masses and merges equal support points; throws ParameterError.
DiscreteLaw normalize_law(DiscreteLaw law);

enum class EntryKind {
    rademacher,
    standard_gaussian,
    uniform_symmetric,
    two_point,
    laplace,
};

/// Law of the matrix entries xi: mean zero, unit variance, finite fourth moment.
///
/// The two-point kind places mass `prob` on `a` and the rest on
/// b = -prob * a / (1 - prob); construction fails unless that law has unit
/// variance.
class EntryDistribution {
public:
    static EntryDistribution rademacher();
    static EntryDistribution standard_gaussian();
    /// Uniform on [-sqrt(3), sqrt(3)].
    static EntryDistribution uniform_symmetric();
    static EntryDistribution two_point(double a, double prob);
    /// Laplace with scale 1/sqrt(2); heavier than sub-gaussian tails.
    static EntryDistribution laplace();

    /// Parses "rademacher", "gaussian", "uniform", "laplace", or "two-point:a,prob".
    static EntryDistribution parse(const std::string& text);

    EntryKind kind() const noexcept { return kind_; }
    std::string name() const;

    double mean() const noexcept;
    double variance() const noexcept;
    /// E xi^4 (the M_4^4 of the moment assumption).
    double fourth_moment() const noexcept;
    bool is_sub_gaussian() const noexcept;

    /// Support and masses for finitely supported kinds, nullopt otherwise.
    std::optional<DiscreteLaw> atoms() const;

    /// Deterministic draw addressed by `index` in `stream`.
    double sample(const RngStream& stream, std::uint64_t index) const noexcept;

    double two_point_a() const noexcept { return a_; }
    double two_point_prob() const noexcept { return prob_; }

    friend bool operator==(const EntryDistribution&, const EntryDistribution&) = default;

private:
    EntryDistribution(EntryKind kind, double a, double prob) : kind_(kind), a_(a), prob_(prob) {}

    double two_point_b() const noexcept { return -prob_ * a_ / (1.0 - prob_); }

    EntryKind kind_;
    double a_ = 0.0;
    double prob_ = 0.0;
};

} // namespace symsparse
