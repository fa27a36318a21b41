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

#include "symsparse/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "symsparse/error.hpp"

namespace symsparse {

DiscreteLaw normalize_law(DiscreteLaw law)
{
    require(!law.empty(), "discrete law has no atoms");
    double total = 0.0;
    for (const auto& atom : law) {
        require(std::isfinite(atom.value), "discrete law has a non-finite atom");
        require(atom.mass >= 0.0, "discrete law has a negative mass");
        total += atom.mass;
    }
    require(std::abs(total - 1.0) <= 1e-9, "discrete law masses do not sum to one");

    std::sort(law.begin(), law.end(), [](const Atom& l, const Atom& r) { return l.value < r.value; });
    DiscreteLaw merged;
    for (const auto& atom : law) {
        if (atom.mass == 0.0) {
            continue;
        }
        if (!merged.empty() && merged.back().value == atom.value) {
            merged.back().mass += atom.mass;
        } else {
            merged.push_back(atom);
        }
    }
    return merged;
}

EntryDistribution EntryDistribution::rademacher()
{
    return {EntryKind::rademacher, 0.0, 0.0};
}

EntryDistribution EntryDistribution::standard_gaussian()
{
    return {EntryKind::standard_gaussian, 0.0, 0.0};
}

EntryDistribution EntryDistribution::uniform_symmetric()
{
    return {EntryKind::uniform_symmetric, 0.0, 0.0};
}

EntryDistribution EntryDistribution::laplace()
{
    return {EntryKind::laplace, 0.0, 0.0};
}

EntryDistribution EntryDistribution::two_point(double a, double prob)
{
    require(prob > 0.0 && prob < 1.0, "two-point law needs prob in (0, 1)");
    require(std::isfinite(a) && a != 0.0, "two-point law needs a finite nonzero atom");
    EntryDistribution d{EntryKind::two_point, a, prob};
    require(std::abs(d.variance() - 1.0) <= 1e-12,
            "two-point law (a, prob) does not have unit variance; need a^2 = (1 - prob) / prob");
    return d;
}

EntryDistribution EntryDistribution::parse(const std::string& text)
{
    if (text == "rademacher") {
        return rademacher();
    }
    if (text == "gaussian" || text == "standard-gaussian" || text == "normal") {
        return standard_gaussian();
    }
    if (text == "uniform" || text == "uniform-symmetric") {
        return uniform_symmetric();
    }
    if (text == "laplace") {
        return laplace();
    }
    const std::string prefix = "two-point:";
    if (text.rfind(prefix, 0) == 0) {
        std::istringstream in(text.substr(prefix.size()));
        double a = 0.0;
        double prob = 0.0;
        char comma = 0;
        if (in >> a >> comma >> prob && comma == ',' && (in >> std::ws).eof()) {
            return two_point(a, prob);
        }
        throw ParameterError("cannot parse two-point law '" + text + "'; expected two-point:a,prob");
    }
    throw ParameterError("unknown entry distribution '" + text + "'");
}

std::string EntryDistribution::name() const
{
    switch (kind_) {
    case EntryKind::rademacher:
        return "rademacher";
    case EntryKind::standard_gaussian:
        return "gaussian";
    case EntryKind::uniform_symmetric:
        return "uniform";
    case EntryKind::laplace:
        return "laplace";
    case EntryKind::two_point: {
        char buf[96];
        std::snprintf(buf, sizeof buf, "two-point:%.17g,%.17g", a_, prob_);
        return buf;
    }
    }
    return "unknown";
}

double EntryDistribution::mean() const noexcept
{
    if (kind_ == EntryKind::two_point) {
        return prob_ * a_ + (1.0 - prob_) * two_point_b();
    }
    return 0.0;
}

double EntryDistribution::variance() const noexcept
{
    if (kind_ == EntryKind::two_point) {
        const double b = two_point_b();
        return prob_ * a_ * a_ + (1.0 - prob_) * b * b;
    }
    return 1.0;
}

double EntryDistribution::fourth_moment() const noexcept
{
    switch (kind_) {
    case EntryKind::rademacher:
        return 1.0;
    case EntryKind::standard_gaussian:
        return 3.0;
    case EntryKind::uniform_symmetric:
        return 9.0 / 5.0;
    case EntryKind::laplace:
        return 6.0;
    case EntryKind::two_point: {
        const double b = two_point_b();
        return prob_ * std::pow(a_, 4) + (1.0 - prob_) * std::pow(b, 4);
    }
    }
    return 0.0;
}

bool EntryDistribution::is_sub_gaussian() const noexcept
{
    return kind_ != EntryKind::laplace;
}

std::optional<DiscreteLaw> EntryDistribution::atoms() const
{
    switch (kind_) {
    case EntryKind::rademacher:
        return DiscreteLaw{{-1.0, 0.5}, {1.0, 0.5}};
    case EntryKind::two_point:
        return normalize_law({{a_, prob_}, {two_point_b(), 1.0 - prob_}});
    default:
        return std::nullopt;
    }
}

double EntryDistribution::sample(const RngStream& stream, std::uint64_t index) const noexcept
{
    switch (kind_) {
    case EntryKind::rademacher:
        return (stream.bits(index) >> 63) ? 1.0 : -1.0;
    case EntryKind::standard_gaussian:
        return stream.normal(index);
    case EntryKind::uniform_symmetric:
        return std::numbers::sqrt3 * (2.0 * stream.uniform(index) - 1.0);
    case EntryKind::two_point:
        return stream.uniform(index) < prob_ ? a_ : two_point_b();
    case EntryKind::laplace: {
        const auto block = stream.block(index);
        const std::uint64_t hi = (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
        const double u = (static_cast<double>(hi >> 11) + 1.0) * 0x1.0p-53;
        const double magnitude = -std::log(u) / std::numbers::sqrt2;
        return (block[2] & 1u) ? magnitude : -magnitude;
    }
    }
    return 0.0;
}

} // namespace symsparse
