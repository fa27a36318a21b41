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

#include <cmath>

#include "oracles.hpp"
#include "symsparse/distribution.hpp"
#include "symsparse/ensemble.hpp"
#include "symsparse/error.hpp"

using namespace symsparse;

namespace {

double law_moment(const DiscreteLaw& law, int k)
{
    double m = 0.0;
    for (const auto& a : law) {
        m += a.mass * std::pow(a.value, k);
    }
    return m;
}

} // namespace

TEST(EntryDistribution, AnalyticMomentsPerKind)
{
    for (const auto& d : {EntryDistribution::rademacher(), EntryDistribution::standard_gaussian(),
                          EntryDistribution::uniform_symmetric(), EntryDistribution::laplace(),
                          EntryDistribution::two_point(2.0, 0.2)}) {
        EXPECT_EQ(d.mean(), 0.0) << d.name();
        EXPECT_NEAR(d.variance(), 1.0, 1e-12) << d.name();
        EXPECT_GE(d.fourth_moment(), 1.0) << d.name();
    }
    EXPECT_DOUBLE_EQ(EntryDistribution::rademacher().fourth_moment(), 1.0);
    EXPECT_DOUBLE_EQ(EntryDistribution::standard_gaussian().fourth_moment(), 3.0);
    EXPECT_NEAR(EntryDistribution::uniform_symmetric().fourth_moment(), 9.0 / 5.0, 1e-12);
    EXPECT_DOUBLE_EQ(EntryDistribution::laplace().fourth_moment(), 6.0);
}

TEST(EntryDistribution, DiscreteFourthMomentMatchesAtoms)
{
    for (const auto& d : {EntryDistribution::rademacher(), EntryDistribution::two_point(2.0, 0.2),
                          EntryDistribution::two_point(-3.0, 0.1)}) {
        const auto atoms = d.atoms();
        ASSERT_TRUE(atoms.has_value());
        EXPECT_NEAR(law_moment(*atoms, 1), 0.0, 1e-12);
        EXPECT_NEAR(law_moment(*atoms, 2), 1.0, 1e-12);
        EXPECT_NEAR(law_moment(*atoms, 4), d.fourth_moment(), 1e-12);
    }
}

TEST(EntryDistribution, TwoPointRejectsNonUnitVariance)
{
    EXPECT_THROW(EntryDistribution::two_point(1.0, 0.2), ParameterError);
    EXPECT_THROW(EntryDistribution::two_point(2.0, 1.0), ParameterError);
    EXPECT_NO_THROW(EntryDistribution::two_point(2.0, 0.2));
}

TEST(EntryDistribution, ParseRoundTrip)
{
    for (const auto& d : {EntryDistribution::rademacher(), EntryDistribution::standard_gaussian(),
                          EntryDistribution::uniform_symmetric(), EntryDistribution::laplace(),
                          EntryDistribution::two_point(2.0, 0.2)}) {
        EXPECT_EQ(EntryDistribution::parse(d.name()), d);
    }
    EXPECT_THROW(EntryDistribution::parse("cauchy"), ParameterError);
}

TEST(EntryDistribution, SampleMomentsMatch)
{
    const RngStream s(5, 0);
    for (const auto& d : {EntryDistribution::standard_gaussian(), EntryDistribution::uniform_symmetric(),
                          EntryDistribution::laplace(), EntryDistribution::two_point(2.0, 0.2)}) {
        const int n = 200000;
        double m1 = 0.0, m2 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double v = d.sample(s, static_cast<std::uint64_t>(k));
            m1 += v;
            m2 += v * v;
        }
        EXPECT_NEAR(m1 / n, 0.0, 0.015) << d.name();
        EXPECT_NEAR(m2 / n, 1.0, 0.03) << d.name();
    }
}

TEST(TwoSidedTail, RademacherExact)
{
    const auto half = two_sided_tail_exact(EntryDistribution::rademacher(), 0.5);
    EXPECT_DOUBLE_EQ(half.p_minus, 0.5);
    EXPECT_DOUBLE_EQ(half.p_plus, 0.5);
    const auto far = two_sided_tail_exact(EntryDistribution::rademacher(), 1.5);
    EXPECT_EQ(far.p_minus, 0.0);
    EXPECT_EQ(far.p_plus, 0.0);
    const auto est = two_sided_tail_estimate(EntryDistribution::rademacher(), 1.5, 1000, RngStream(1, 1));
    EXPECT_EQ(est.p_minus, 0.0);
    EXPECT_EQ(est.p_plus, 0.0);
}

TEST(TwoSidedTail, GaussianMatchesNormalCdf)
{
    const auto est = two_sided_tail_estimate(EntryDistribution::standard_gaussian(), 1.0, 1000000, RngStream(11, 0));
    const double expected = oracle::normal_cdf(-1.0);
    EXPECT_NEAR(est.p_minus, expected, 0.002);
    EXPECT_NEAR(est.p_plus, expected, 0.002);
}

TEST(TwoSidedTail, ContinuousExactIsUnsupported)
{
    EXPECT_THROW(two_sided_tail_exact(EntryDistribution::standard_gaussian(), 1.0), CapabilityError);
    EXPECT_THROW(two_sided_tail_estimate(EntryDistribution::rademacher(), 0.0, 10, RngStream(0, 0)), ParameterError);
}
