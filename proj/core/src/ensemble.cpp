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

#include "symsparse/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "symsparse/error.hpp"
#include "symsparse/parallel.hpp"

namespace symsparse {

namespace {

constexpr std::uint64_t kMaskTag = 0x6d61736b;  // "mask"
constexpr std::uint64_t kValueTag = 0x76616c75; // "valu"

// Partial Fisher-Yates: k distinct values of {0..n-1} in draw order.
std::vector<std::size_t> random_distinct(std::size_t n, std::size_t k, const RngStream& stream,
                                         std::uint64_t first_draw)
{
    require(k <= n, "cannot draw more distinct indices than available");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t t = 0; t < k; ++t) {
        const auto span = static_cast<double>(n - t);
        auto r = t + static_cast<std::size_t>(stream.uniform(first_draw + t) * span);
        r = std::min(r, n - 1);
        std::swap(perm[t], perm[r]);
    }
    perm.resize(k);
    return perm;
}

} // namespace

void EnsembleParams::validate() const
{
    require(n >= 1, "ensemble dimension n must be positive");
    require(p >= 0.0 && p <= 1.0, "sparsity p must lie in [0, 1]");
    require(c_op > 0.0, "operator-norm constant c_op must be positive");
}

SparseSymmetricMatrix sample_matrix(const EnsembleParams& params, const RngStream& stream)
{
    params.validate();
    const RngStream mask = stream.substream(kMaskTag);
    const RngStream value = stream.substream(kValueTag);
    const std::size_t n = params.n;

    std::vector<MatrixEntry> entries;
    entries.reserve(static_cast<std::size_t>(params.p * static_cast<double>(n * (n + 1) / 2) * 1.1) + 16);
    std::uint64_t slot = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j, ++slot) {
            if (!(mask.uniform(slot) < params.p)) {
                continue;
            }
            const double v = params.dist.sample(value, slot);
            if (v != 0.0) {
                entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), v});
            }
        }
    }
    // Generated in (row, col) order without duplicates.
    return SparseSymmetricMatrix::from_entries(n, std::move(entries));
}

Eigen::VectorXd sample_sparse_vector(std::size_t n, double p, const EntryDistribution& dist, const RngStream& stream)
{
    EnsembleParams{std::max<std::size_t>(n, 1), p, dist, 1.0}.validate();
    const RngStream mask = stream.substream(kMaskTag);
    const RngStream value = stream.substream(kValueTag);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (mask.uniform(i) < p) {
            x[static_cast<Eigen::Index>(i)] = dist.sample(value, i);
        }
    }
    return x;
}

SparseSymmetricMatrix gaussian_on_pattern(const SparseSymmetricMatrix& pattern, const RngStream& stream)
{
    return pattern.with_values([&](std::size_t k) { return stream.normal(k); });
}

TwoSidedTail two_sided_tail_estimate(const EntryDistribution& dist, double c, std::size_t samples,
                                     const RngStream& stream)
{
    require(c > 0.0, "tail threshold c must be positive");
    require(samples >= 1, "tail estimate needs at least one sample");
    std::size_t minus = 0;
    std::size_t plus = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double x = dist.sample(stream, k);
        minus += x <= -c;
        plus += x >= c;
    }
    const auto total = static_cast<double>(samples);
    return {static_cast<double>(minus) / total, static_cast<double>(plus) / total};
}

TwoSidedTail two_sided_tail_exact(const EntryDistribution& dist, double c)
{
    require(c > 0.0, "tail threshold c must be positive");
    const auto law = dist.atoms();
    if (!law) {
        throw CapabilityError("exact tails need a finitely supported law, got " + dist.name());
    }
    TwoSidedTail t{0.0, 0.0};
    for (const auto& atom : *law) {
        if (atom.value <= -c) {
            t.p_minus += atom.mass;
        }
        if (atom.value >= c) {
            t.p_plus += atom.mass;
        }
    }
    return t;
}

WitnessSets row_witness_sets(const SparseSymmetricMatrix& a, const std::vector<std::size_t>& j_set,
                             const std::vector<std::size_t>& j_prime, const std::vector<int>& signs, double c1)
{
    const std::size_t n = a.n();
    require(signs.size() == j_set.size(), "sign vector must have one entry per index of J");
    require(c1 > 0.0, "threshold c1 must be positive");

    // position in J (+1), or -1 for members of J'
    std::vector<long> role(n, 0);
    for (std::size_t k = 0; k < j_set.size(); ++k) {
        require(j_set[k] < n, "index in J out of range");
        require(role[j_set[k]] == 0, "J contains a repeated index");
        require(signs[k] == 1 || signs[k] == -1, "signs must be +1 or -1");
        role[j_set[k]] = static_cast<long>(k) + 1;
    }
    for (const auto j : j_prime) {
        require(j < n, "index in J' out of range");
        require(role[j] <= 0, "J and J' must be disjoint");
        require(role[j] == 0, "J' contains a repeated index");
        role[j] = -1;
    }

    WitnessSets out;
    const auto rows = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (role[i] != 0) {
            continue;
        }
        std::size_t j_hits = 0;
        bool hit_ok = false;
        bool clear = true;
        for (const auto& [col, value] : rows[i]) {
            const long r = role[col];
            if (r > 0) {
                ++j_hits;
                const int s = signs[static_cast<std::size_t>(r - 1)];
                hit_ok = std::abs(value) >= c1 && (value > 0 ? 1 : -1) == s;
            } else if (r < 0) {
                clear = false;
            }
        }
        if (j_hits == 1 && hit_ok) {
            out.one_hit.push_back(i);
        }
        if (clear) {
            out.clear.push_back(i);
        }
    }
    return out;
}

std::size_t witness_clear_size(std::size_t n, double p, std::size_t kappa)
{
    require(p > 0.0, "witness sizes need p > 0");
    const double m = std::min(static_cast<double>(kappa) * std::sqrt(p * static_cast<double>(n)), 1.0 / (8.0 * p));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(m)));
}

double witness_event_frequency(const EnsembleParams& params, std::size_t kappa, double c1, std::size_t trials,
                               std::uint64_t master_seed, std::size_t workers)
{
    params.validate();
    require(kappa >= 1, "kappa must be at least 1");
    if (trials == 0) {
        return 0.0;
    }
    const std::size_t m = witness_clear_size(params.n, params.p, kappa);
    require(kappa + m <= params.n, "J and J' do not fit in [n]");

    const auto hits = parallel_map(trials, workers, [&](std::size_t t) -> int {
        const RngStream trial(master_seed, t);
        const auto a = sample_matrix(params, trial.substream(0));
        const RngStream pick = trial.substream(1);
        const auto drawn = random_distinct(params.n, kappa + m, pick, 0);
        const std::vector<std::size_t> j_set(drawn.begin(), drawn.begin() + static_cast<long>(kappa));
        const std::vector<std::size_t> j_prime(drawn.begin() + static_cast<long>(kappa), drawn.end());
        std::vector<int> signs(kappa);
        const RngStream sign_stream = trial.substream(2);
        for (std::size_t k = 0; k < kappa; ++k) {
            signs[k] = (sign_stream.bits(k) >> 63) ? 1 : -1;
        }
        const auto sets = row_witness_sets(a, j_set, j_prime, signs, c1);
        std::vector<std::size_t> both;
        std::set_intersection(sets.one_hit.begin(), sets.one_hit.end(), sets.clear.begin(), sets.clear.end(),
                              std::back_inserter(both));
        return both.empty() ? 0 : 1;
    });
    return static_cast<double>(std::accumulate(hits.begin(), hits.end(), 0)) / static_cast<double>(trials);
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, const RngStream& stream, std::uint64_t first_draw)
{
    auto out = random_distinct(n, k, stream, first_draw);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace symsparse
