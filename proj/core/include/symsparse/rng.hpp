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

#include <array>
#include <cstdint>

namespace symsparse {

/// Philox4x32-10 block function (Salmon et al., SC'11).
///
/// Pure function of (counter, key); used as the keyed hash behind RngStream.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// Every draw is addressed explicitly: `uniform(k)` is a pure function of
/// (seed, stream_id, k). Two streams with the same (seed, stream_id) produce
/// the same values no matter how many threads consume them or in which order.
class RngStream {
public:
    constexpr RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id)
    {
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Raw 128-bit block for draw index `k`.
    std::array<std::uint32_t, 4> block(std::uint64_t k) const noexcept;

    /// 64 random bits for draw index `k`.
    std::uint64_t bits(std::uint64_t k) const noexcept;

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform(std::uint64_t k) const noexcept;

    /// Uniform on (0, 1]; safe as a log argument.
    double uniform_open0(std::uint64_t k) const noexcept;

    /// Standard normal by Box-Muller on the two halves of block `k`.
    double normal(std::uint64_t k) const noexcept;

    /// Derived stream whose id mixes this one's id with `sub`; used to give
    /// each trial or sub-task an independent, order-free stream.
    RngStream substream(std::uint64_t sub) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

} // namespace symsparse
