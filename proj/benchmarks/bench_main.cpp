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

#include <benchmark/benchmark.h>

#include "symsparse/ensemble.hpp"
#include "symsparse/lcd.hpp"
#include "symsparse/spectra.hpp"

using namespace symsparse;

namespace {

EnsembleParams params(benchmark::State& state)
{
    return EnsembleParams{static_cast<std::size_t>(state.range(0)), 0.3, EntryDistribution::rademacher(), 3.0};
}

void BM_SampleMatrix(benchmark::State& state)
{
    const auto p = params(state);
    std::uint64_t t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_matrix(p, RngStream(1, t++)));
    }
}
BENCHMARK(BM_SampleMatrix)->Arg(100)->Arg(400)->Arg(1600);

void BM_SmallestSingularValue(benchmark::State& state)
{
    const auto a = sample_matrix(params(state), RngStream(2, 0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(smallest_singular_value(a, 1e-10));
    }
}
BENCHMARK(BM_SmallestSingularValue)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_DenseSpectrum(benchmark::State& state)
{
    const auto a = sample_matrix(params(state), RngStream(3, 0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(full_symmetric_spectrum(a));
    }
}
BENCHMARK(BM_DenseSpectrum)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SpectralNorm(benchmark::State& state)
{
    const auto a = sample_matrix(params(state), RngStream(4, 0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_norm(a, 1e-8));
    }
}
BENCHMARK(BM_SpectralNorm)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_Lcd(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const RngStream s(5, n);
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        x[static_cast<Eigen::Index>(i)] = s.normal(i);
    }
    x /= x.norm();
    for (auto _ : state) {
        benchmark::DoNotOptimize(lcd(x, 2.0, default_theta_cap(n)));
    }
}
BENCHMARK(BM_Lcd)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
