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
#include <set>
#include <thread>
#include <vector>

#include "symsparse/parallel.hpp"
#include "symsparse/rng.hpp"

using namespace symsparse;

TEST(Philox, KnownAnswerVectors)
{
    using Block = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, DrawsArePureFunctionsOfTheAddress)
{
    const RngStream a(42, 7);
    const RngStream b(42, 7);
    for (std::uint64_t k = 0; k < 100; ++k) {
        EXPECT_EQ(a.bits(k), b.bits(k));
    }
    // Reverse order of consumption gives the same values.
    std::vector<double> forward, backward(100);
    for (std::uint64_t k = 0; k < 100; ++k) {
        forward.push_back(a.uniform(k));
    }
    for (std::uint64_t k = 100; k-- > 0;) {
        backward[k] = b.uniform(k);
    }
    EXPECT_EQ(forward, backward);
}

TEST(RngStream, StreamsAndSubstreamsDiffer)
{
    const RngStream a(1, 0);
    EXPECT_NE(a.bits(0), RngStream(1, 1).bits(0));
    EXPECT_NE(a.bits(0), RngStream(2, 0).bits(0));
    EXPECT_NE(a.substream(0).bits(0), a.substream(1).bits(0));
    EXPECT_EQ(a.substream(5).bits(3), RngStream(1, 0).substream(5).bits(3));
}

TEST(RngStream, UniformRangesAndMoments)
{
    const RngStream s(2024, 3);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, gsum = 0.0, gsum2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = s.uniform(static_cast<std::uint64_t>(k));
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double v = s.uniform_open0(static_cast<std::uint64_t>(k));
        ASSERT_GT(v, 0.0);
        ASSERT_LE(v, 1.0);
        sum += u;
        sum2 += u * u;
        const double g = s.normal(static_cast<std::uint64_t>(k));
        gsum += g;
        gsum2 += g * g;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
    EXPECT_NEAR(sum2 / n - 0.25, 1.0 / 12.0, 0.002);
    EXPECT_NEAR(gsum / n, 0.0, 0.01);
    EXPECT_NEAR(gsum2 / n, 1.0, 0.015);
}

TEST(ParallelMap, ResultsDoNotDependOnWorkerCount)
{
    auto fn = [](std::size_t i) { return RngStream(9, i).uniform(0); };
    const auto one = parallel_map(257, 1, fn);
    const auto eight = parallel_map(257, 8, fn);
    EXPECT_EQ(one, eight);
}

TEST(ParallelMap, PropagatesExceptions)
{
    EXPECT_THROW(parallel_map(50, 4,
                              [](std::size_t i) -> int {
                                  if (i == 17) {
                                      throw std::runtime_error("boom");
                                  }
                                  return 0;
                              }),
                 std::runtime_error);
}
