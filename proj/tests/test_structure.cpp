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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "symsparse/error.hpp"
#include "symsparse/rng.hpp"
#include "symsparse/structure.hpp"

using namespace symsparse;

namespace {

Eigen::VectorXd random_unit(std::size_t n, const RngStream& s)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        x[static_cast<Eigen::Index>(i)] = s.normal(i);
    }
    return x / x.norm();
}

Eigen::VectorXd permuted(const Eigen::VectorXd& x, const std::vector<std::size_t>& perm)
{
    Eigen::VectorXd y(x.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        y[static_cast<Eigen::Index>(perm[i])] = x[static_cast<Eigen::Index>(i)];
    }
    return y;
}

} // namespace

TEST(StructureConstants, DefaultsAreValid)
{
    StructureConstants c;
    EXPECT_NO_THROW(c.validate());
    c.c_oo = 0.3;
    EXPECT_THROW(c.validate(), ParameterError);
    c = {};
    c.lambda = c.c_oo;
    EXPECT_THROW(c.validate(), ParameterError);
    c = {};
    c.L = 0.5;
    EXPECT_THROW(c.validate(), ParameterError);
    c = {};
    c.c_oo = 0.25 * c.c_s * c.c_d * c.c_d * 0.5;
    c.lambda = c.c_oo / 2;
    EXPECT_THROW(c.validate(), ParameterError);
}

TEST(SparseTailDistance, Examples)
{
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
    e1[0] = 1.0;
    const auto r = sparse_tail_distance(e1, 1);
    EXPECT_EQ(r.distance, 0.0);
    EXPECT_EQ(r.nearest, e1);

    Eigen::VectorXd h = Eigen::VectorXd::Zero(3);
    h[0] = h[1] = 1.0 / std::sqrt(2.0);
    const auto s = sparse_tail_distance(h, 1);
    EXPECT_NEAR(s.distance, 1.0 / std::sqrt(2.0), 1e-15);
    Eigen::VectorXd want = Eigen::VectorXd::Zero(3);
    want[0] = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(s.nearest, want);

    EXPECT_THROW(sparse_tail_distance(2.0 * e1, 1), ParameterError);
    EXPECT_THROW(sparse_tail_distance(e1, 0), ParameterError);
    EXPECT_THROW(sparse_tail_distance(e1, 4), ParameterError);
}

TEST(SparseTailDistance, MatchesExhaustiveSupports)
{
    for (std::uint64_t t = 0; t < 20; ++t) {
        const auto x = random_unit(12, RngStream(12, t));
        EXPECT_NEAR(sparse_tail_distance(x, 4).distance, oracle::sparse_distance_exhaustive(x, 4), 1e-12);
    }
}

TEST(Rearrangement, SplitsNormExactly)
{
    for (std::uint64_t t = 0; t < 50; ++t) {
        const auto x = random_unit(15, RngStream(3, t));
        const auto order = decreasing_rearrangement(x);
        for (std::size_t m = 1; m < 15; ++m) {
            double head = 0.0, tail = 0.0;
            for (std::size_t k = 0; k < 15; ++k) {
                const double v = x[static_cast<Eigen::Index>(order[k])];
                (k < m ? head : tail) += v * v;
            }
            EXPECT_NEAR(head + tail, 1.0, 1e-12);
            EXPECT_NEAR(std::sqrt(tail), sparse_tail_distance(x, m).distance, 1e-12);
        }
    }
}

TEST(IsDominated, Examples)
{
    Eigen::VectorXd sparse = Eigen::VectorXd::Zero(10);
    sparse[2] = 0.6;
    sparse[7] = -0.8;
    EXPECT_TRUE(is_dominated(sparse, 2, 0.5));
    EXPECT_TRUE(is_dominated(sparse, 3, 0.5));

    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(16, 0.25);
    EXPECT_FALSE(is_dominated(flat, 8, 0.5));
    // Ties: any permutation of a vector with tied magnitudes classifies the same way.
    Eigen::VectorXd tied(4);
    tied << 0.5, -0.5, 0.5, 0.5;
    EXPECT_EQ(is_dominated(tied, 2, 0.9), is_dominated(-tied.reverse(), 2, 0.9));
}

TEST(Classification, InvariantUnderPermutationAndSignFlips)
{
    StructureConstants c;
    for (std::uint64_t t = 0; t < 30; ++t) {
        const RngStream s(44, t);
        Eigen::VectorXd x = random_unit(20, s);
        if (t % 3 == 0) {
            x.head(15).setZero();
            x /= x.norm();
        }
        std::vector<std::size_t> perm(20);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 19; i > 0; --i) {
            std::swap(perm[i], perm[s.bits(100 + i) % (i + 1)]);
        }
        Eigen::VectorXd y = permuted(x, perm);
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            if (s.bits(200 + static_cast<std::uint64_t>(i)) & 1) {
                y[i] = -y[i];
            }
        }
        for (std::size_t m : {1u, 3u, 7u}) {
            const auto a = classify(x, m, 0.3, 0.5, c);
            const auto b = classify(y, m, 0.3, 0.5, c);
            EXPECT_NEAR(a.dist_to_sparse, b.dist_to_sparse, 1e-15);
            EXPECT_EQ(a.comp_member, b.comp_member);
            EXPECT_EQ(a.dom_member, b.dom_member);
        }
    }
}

TEST(SpreadSet, UniformVector)
{
    StructureConstants c;
    c.c_d = 0.5;
    const std::size_t n = 200;
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    const auto s = spread_set(x, c);
    ASSERT_TRUE(s.has_value());
    std::vector<std::size_t> want(static_cast<std::size_t>(std::ceil(0.025 * n)));
    std::iota(want.begin(), want.end(), 0);
    EXPECT_EQ(*s, want);
}

TEST(SpreadSet, CompressibleIsUndefined)
{
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(100);
    e1[0] = 1.0;
    EXPECT_FALSE(spread_set(e1, StructureConstants{}).has_value());
}

TEST(SpreadSet, PermutationEquivariant)
{
    StructureConstants c;
    for (std::uint64_t t = 0; t < 20; ++t) {
        const RngStream s(91, t);
        const auto x = random_unit(120, s);
        std::vector<std::size_t> perm(120);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 119; i > 0; --i) {
            std::swap(perm[i], perm[s.bits(1000 + i) % (i + 1)]);
        }
        const auto a = spread_set(x, c);
        const auto b = spread_set(permuted(x, perm), c);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) {
            std::vector<std::size_t> mapped;
            for (auto i : *a) {
                mapped.push_back(perm[i]);
            }
            std::sort(mapped.begin(), mapped.end());
            EXPECT_EQ(mapped, *b);
            EXPECT_EQ(a->size(), static_cast<std::size_t>(std::ceil(c.c_oo * 120)));
        }
    }
}
