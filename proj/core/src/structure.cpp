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

#include "symsparse/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "symsparse/error.hpp"

namespace symsparse {

namespace {

void require_unit(const Eigen::VectorXd& x)
{
    require(x.size() > 0, "vector is empty");
    require(std::abs(x.norm() - 1.0) <= 1e-12, "vector must have unit Euclidean norm");
}

} // namespace

void StructureConstants::validate() const
{
    require(c_s > 0.0 && c_s <= 1.0, "c_s must lie in (0, 1]");
    require(c_d > 0.0, "c_d must be positive");
    require(c_oo >= 0.25 * c_s * c_d * c_d && c_oo <= 0.25, "c_oo must satisfy c_s c_d^2 / 4 <= c_oo <= 1/4");
    require(lambda > 0.0 && lambda < c_oo, "lambda must lie in (0, c_oo)");
    require(L >= 1.0, "L must be at least 1");
    require(delta0 > 0.0 && delta0 < 1.0, "delta0 must lie in (0, 1)");
    require(c_p > 0.0, "c_p must be positive");
}

std::vector<std::size_t> decreasing_rearrangement(const Eigen::VectorXd& x)
{
    std::vector<std::size_t> order(static_cast<std::size_t>(x.size()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return std::abs(x[static_cast<Eigen::Index>(l)]) > std::abs(x[static_cast<Eigen::Index>(r)]);
    });
    return order;
}

SparseApproximation sparse_tail_distance(const Eigen::VectorXd& x, std::size_t m)
{
    require_unit(x);
    const auto n = static_cast<std::size_t>(x.size());
    require(m >= 1 && m < n, "sparsity budget must satisfy 1 <= m < n");
    const auto order = decreasing_rearrangement(x);
    SparseApproximation out{0.0, Eigen::VectorXd::Zero(x.size())};
    for (std::size_t r = 0; r < m; ++r) {
        const auto k = static_cast<Eigen::Index>(order[r]);
        out.nearest[k] = x[k];
    }
    double tail = 0.0;
    for (std::size_t r = m; r < n; ++r) {
        const double v = x[static_cast<Eigen::Index>(order[r])];
        tail += v * v;
    }
    out.distance = std::sqrt(tail);
    return out;
}

bool is_compressible(const Eigen::VectorXd& x, std::size_t m, double delta)
{
    require_unit(x);
    if (m == 0) {
        return 1.0 <= delta;
    }
    if (m >= static_cast<std::size_t>(x.size())) {
        return true;
    }
    return sparse_tail_distance(x, m).distance <= delta;
}

bool is_dominated(const Eigen::VectorXd& x, std::size_t m, double alpha)
{
    require_unit(x);
    const auto n = static_cast<std::size_t>(x.size());
    require(m <= n, "budget m exceeds the dimension");
    const auto order = decreasing_rearrangement(x);
    double tail_sq = 0.0;
    double tail_max = 0.0;
    for (std::size_t r = m; r < n; ++r) {
        const double v = std::abs(x[static_cast<Eigen::Index>(order[r])]);
        tail_sq += v * v;
        tail_max = std::max(tail_max, v);
    }
    return std::sqrt(tail_sq) <= alpha * std::sqrt(static_cast<double>(m)) * tail_max;
}

std::size_t fraction_count(double fraction, std::size_t n)
{
    const double x = fraction * static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

std::size_t compressibility_budget(std::size_t n, const StructureConstants& consts)
{
    const double x = consts.c_s * static_cast<double>(n);
    return static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

std::optional<std::vector<std::size_t>> spread_set(const Eigen::VectorXd& x, const StructureConstants& consts)
{
    require_unit(x);
    const auto n = static_cast<std::size_t>(x.size());
    if (is_compressible(x, compressibility_budget(n, consts), consts.c_d)) {
        return std::nullopt;
    }
    const double dn = static_cast<double>(n);
    const double lower = consts.c_d / std::sqrt(2.0 * dn);
    const double upper = 1.0 / std::sqrt(consts.c_s * dn);
    const auto want = fraction_count(consts.c_oo, n);

    std::vector<std::size_t> chosen;
    for (const auto k : decreasing_rearrangement(x)) {
        const double v = std::abs(x[static_cast<Eigen::Index>(k)]);
        if (v >= lower && v <= upper) {
            chosen.push_back(k);
            if (chosen.size() == want) {
                break;
            }
        }
    }
    if (chosen.size() < want) {
        return std::nullopt;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

StructureReport classify(const Eigen::VectorXd& x, std::size_t m, double delta, double alpha,
                         const StructureConstants& consts)
{
    StructureReport report;
    report.m = m;
    report.dist_to_sparse = sparse_tail_distance(x, m).distance;
    report.comp_member = report.dist_to_sparse <= delta;
    report.dom_member = is_dominated(x, m, alpha);
    report.spread = spread_set(x, consts);
    return report;
}

} // namespace symsparse
