// Copyright 2026 The primesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <vector>

#include "primesq/covariance.hpp"
#include "primesq/interval_statistics.hpp"
#include "primesq/prime_engine.hpp"
#include "primesq/random_models.hpp"

namespace {

using namespace primesq;

const PrimeTable& table() {
    static const PrimeTable t = PrimeTable::with_count(20002);
    return t;
}

void BM_SievePrimes(benchmark::State& state) {
    const auto limit = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sieve_primes(limit).size());
}
BENCHMARK(BM_SievePrimes)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);

void BM_IntervalCounts(benchmark::State& state) {
    const auto K = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(interval_counts(table(), K).back());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(table()[K + 1] * table()[K + 1]));
}
BENCHMARK(BM_IntervalCounts)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_IntervalCountsSegment(benchmark::State& state) {
    SieveOptions opts;
    opts.segment_bytes = static_cast<std::size_t>(state.range(0)) * 1024;
    for (auto _ : state) benchmark::DoNotOptimize(interval_counts(table(), 3000, opts).back());
}
BENCHMARK(BM_IntervalCountsSegment)->Arg(16)->Arg(128)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_TauTruncated(benchmark::State& state) {
    const auto K = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(tau_truncated(table(), K).back());
}
BENCHMARK(BM_TauTruncated)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LiAt(benchmark::State& state) {
    long double x = 1e10L;
    for (auto _ : state) {
        benchmark::DoNotOptimize(li_at(x));
        x += 1.0L;
    }
}
BENCHMARK(BM_LiAt);

void BM_LiInterval(benchmark::State& state) {
    std::size_t k = 19000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(li_interval(table(), k));
        k = k == 20000 ? 19000 : k + 1;
    }
}
BENCHMARK(BM_LiInterval);

void BM_GThreesum(benchmark::State& state) {
    const auto j = static_cast<std::size_t>(state.range(0));
    const CovParams p{Modulus::primorial(j / 2, table()), Modulus::primorial(j, table()),
                      static_cast<std::int64_t>(make_interval(table(), j / 2).length),
                      static_cast<std::int64_t>(make_interval(table(), j).length),
                      separation(table(), j / 2, j, Separation::start_to_start)};
    for (auto _ : state) benchmark::DoNotOptimize(G_threesum(p));
}
BENCHMARK(BM_GThreesum)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

void BM_GCompact(benchmark::State& state) {
    const CovParams p{Modulus::primorial(8, table()), Modulus::primorial(10, table()), 500, 900, 77};
    for (auto _ : state) benchmark::DoNotOptimize(G_compact(p));
}
BENCHMARK(BM_GCompact)->Unit(benchmark::kMicrosecond);

void BM_GEnum(benchmark::State& state) {
    const CovParams p{Modulus::primorial(3, table()), Modulus::primorial(6, table()), 40, 90, 17};
    for (auto _ : state) benchmark::DoNotOptimize(G_enum(p));
}
BENCHMARK(BM_GEnum)->Unit(benchmark::kMicrosecond);

void BM_RealizeCorrelated(benchmark::State& state) {
    const auto K = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(realize_correlated(table(), K, seed++).counts.back());
}
BENCHMARK(BM_RealizeCorrelated)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_RealizeConstrained(benchmark::State& state) {
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(realize_constrained(table(), 300, seed++).counts.back());
}
BENCHMARK(BM_RealizeConstrained)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
