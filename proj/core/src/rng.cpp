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

#include "symsparse/rng.hpp"

#include <cmath>
#include <numbers>

namespace symsparse {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;
constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi)
{
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kMulA, ctr[0], lo0, hi0);
        mulhilo(kMulB, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

std::array<std::uint32_t, 4> RngStream::block(std::uint64_t k) const noexcept
{
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
        static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    return philox4x32(ctr, key);
}

std::uint64_t RngStream::bits(std::uint64_t k) const noexcept
{
    const auto b = block(k);
    return (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
}

double RngStream::uniform(std::uint64_t k) const noexcept
{
    return static_cast<double>(bits(k) >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open0(std::uint64_t k) const noexcept
{
    return (static_cast<double>(bits(k) >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal(std::uint64_t k) const noexcept
{
    const auto b = block(k);
    const std::uint64_t hi = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
    const std::uint64_t lo = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
    const double u1 = (static_cast<double>(hi >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(lo >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngStream RngStream::substream(std::uint64_t sub) const noexcept
{
    return RngStream(seed_, mix64(stream_id_ ^ mix64(sub + 0x632BE59BD9B4E019ull)));
}

} // namespace symsparse
