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


#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "primesq/interval_statistics.hpp"
#include "primesq/prime_engine.hpp"
#include "primesq/random_models.hpp"

namespace primesq {
namespace {

const PrimeTable& table() {
    static const PrimeTable t = PrimeTable::with_count(600);
    return t;
}

double ld(long double v) { return static_cast<double>(v); }

TEST(Rng, Mt19937_64Reference) {
    Rng rng(5489);
    std::uint64_t last = 0;
    for (int i = 0; i < 10000; ++i) last = rng.next();
    EXPECT_EQ(last, 9981545732273789042ULL);
}

TEST(Rng, Transforms) {
    Rng rng(42);
    std::vector<int> hits(7, 0);
    double sum = 0, sum_sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto b = rng.below(7);
        ASSERT_LT(b, 7u);
        ++hits[b];
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    for (int h : hits) EXPECT_NEAR(h, n / 7.0, 5 * std::sqrt(n / 7.0));
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sum_sq / n, 1.0, 0.02);
    EXPECT_EQ(rng.below(1), 0u);
}

TEST(Seeds, DeriveSeed) {
    EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(ModelKind, Names) {
    for (auto kind : {ModelKind::correlated, ModelKind::uncorrelated, ModelKind::constrained}) {
        EXPECT_EQ(parse_model_kind(to_string(kind)), kind);
    }
    EXPECT_THROW(parse_model_kind("gaussian"), std::invalid_argument);
}

TEST(Offsets, RangeAndSeed) {
    const auto off = draw_offsets(table(), 100, 99);
    ASSERT_EQ(off.offsets.size(), 100u);
    EXPECT_EQ(off.seed, 99u);
    for (std::size_t j = 1; j <= 100; ++j) ASSERT_LT(off.offsets[j - 1], table()[j]);
    EXPECT_EQ(draw_offsets(table(), 100, 99).offsets, off.offsets);
}

TEST(Correlated, ZeroOffsetsGiveThePrimes) {
    const std::size_t K = 500;
    const std::vector<std::uint64_t> zeros(K, 0);
    const auto s = realize_with_offsets(table(), K, zeros);
    EXPECT_EQ(s.counts, interval_counts(table(), K));
}

TEST(Correlated, OffsetPeriodicity) {
    const std::size_t K = 200;
    const auto off = draw_offsets(table(), K, 5);
    std::vector<std::uint64_t> shifted(off.offsets);
    for (std::size_t j = 1; j <= K; ++j) shifted[j - 1] += table()[j] * (j % 3 + 1);
    EXPECT_EQ(realize_with_offsets(table(), K, off.offsets).counts,
              realize_with_offsets(table(), K, shifted).counts);
    EXPECT_EQ(realize_correlated(table(), K, 5).counts, realize_with_offsets(table(), K, off.offsets).counts);
}

TEST(Models, CountsWithinIntervalLength) {
    for (auto kind : {ModelKind::correlated, ModelKind::uncorrelated, ModelKind::constrained}) {
        const auto s = realize(table(), kind, 300, 3);
        EXPECT_EQ(s.model, kind);
        EXPECT_EQ(s.K, 300u);
        EXPECT_EQ(s.seed, 3u);
        for (std::size_t j = 1; j <= 300; ++j) ASSERT_LE(s.counts[j - 1], make_interval(table(), j).length);
    }
}

TEST(Models, EnsembleMeanMatchesTildePi) {
    const std::size_t K = 20, R = 1000;
    const auto tilde = tilde_pi_intervals(table(), K);
    for (auto kind : {ModelKind::correlated, ModelKind::uncorrelated}) {
        const auto ens = run_ensemble(table(), kind, K, R, 17);
        const auto st = ensemble_stats(ens, tilde, 1);
        long double chi2 = 0;
        for (std::size_t j = 1; j <= K; ++j) {
            const long double se = std::sqrt(st.variance[j - 1] / R);
            EXPECT_NEAR(ld(st.mean[j - 1]), ld(tilde[j - 1]), 4 * ld(se) + 1e-12) << to_string(kind) << " " << j;
            const long double z = (ld(st.mean[j - 1]) - ld(tilde[j - 1])) / ld(se);
            chi2 += z * z;
        }
        EXPECT_LT(chi2, K + 5 * std::sqrt(2.0L * K)) << to_string(kind);
    }
}

TEST(Models, DeterministicAcrossThreadCounts) {
    const int saved = omp_get_max_threads();
    for (auto kind : {ModelKind::correlated, ModelKind::uncorrelated, ModelKind::constrained}) {
        omp_set_num_threads(1);
        const auto a = run_ensemble(table(), kind, 80, 12, 2024);
        omp_set_num_threads(4);
        const auto b = run_ensemble(table(), kind, 80, 12, 2024);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t r = 0; r < a.size(); ++r) {
            EXPECT_EQ(a[r].counts, b[r].counts);
            EXPECT_EQ(a[r].seed, derive_seed(2024, r));
            EXPECT_EQ(a[r].counts, realize(table(), kind, 80, derive_seed(2024, r)).counts);
        }
    }
    omp_set_num_threads(saved);
}

TEST(Uncorrelated, IntervalsAreIndependent) {
    const std::size_t K = 100, R = 300;
    const auto tilde = tilde_pi_intervals(table(), K);
    const auto ens = run_ensemble(table(), ModelKind::uncorrelated, K, R, 8);
    const auto st = ensemble_stats(ens, tilde, 2);
    EXPECT_NEAR(ld(st.profile.kappa_at(1, K)), 0.0, 3 * ld(st.kappa_stderr[0]));
    // sample covariance of two fixed intervals
    const std::size_t a = 40, b = 41;
    long double cov = 0;
    for (const auto& s : ens) {
        cov += (static_cast<long double>(s.counts[a - 1]) - st.mean[a - 1]) *
               (static_cast<long double>(s.counts[b - 1]) - st.mean[b - 1]);
    }
    cov /= R - 1;
    const long double scale = std::sqrt(st.variance[a - 1] * st.variance[b - 1]);
    EXPECT_LT(std::fabs(cov / scale), 3.0L / std::sqrt(static_cast<long double>(R)));
}

TEST(Correlated, FirstLagNegative) {
    const std::size_t K = 200, R = 100;
    const auto tilde = tilde_pi_intervals(table(), K);
    const auto st = ensemble_stats(run_ensemble(table(), ModelKind::correlated, K, R, 31), tilde, 2);
    EXPECT_LT(st.profile.kappa_at(1, K), 0.0L);
}

TEST(Constrained, FirstInterval) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_EQ(realize_constrained(table(), 1, seed).counts, (std::vector<std::uint64_t>{2}));
    }
}

TEST(Constrained, RatioTendsToOne) {
    const std::size_t K = 500, R = 20;
    const auto tilde = tilde_pi_intervals(table(), K);
    const long double expected = std::accumulate(tilde.begin(), tilde.end(), 0.0L);
    long double ratio = 0;
    for (const auto& s : run_ensemble(table(), ModelKind::constrained, K, R, 9)) {
        ratio += static_cast<long double>(std::accumulate(s.counts.begin(), s.counts.end(), 0ULL)) / expected;
    }
    EXPECT_NEAR(ld(ratio / R), 1.0, 0.01);
}

TEST(MeanCorrected, Scaling) {
    RealizationSeries s;
    s.K = 3;
    s.counts = {0, 7, 3};
    const auto v = mean_corrected(s);
    const long double f = std::exp(kEulerGamma) / 2.0L;
    EXPECT_EQ(v[0], 0.0L);
    EXPECT_NEAR(ld(v[1]), ld(7 * f), 1e-15);
    EXPECT_GT(v[1], v[2]);
    EXPECT_NEAR(ld(6.4L * f), 5.700, 1e-3);
}

TEST(LagProfile, MatchesBruteForce) {
    const std::vector<long double> eps{1.5L, -2.0L, 0.25L, 3.0L, -1.0L, 0.5L};
    const auto prof = lag_profile(eps, 3);
    ASSERT_EQ(prof.K, eps.size());
    for (std::size_t k = 1; k <= eps.size(); ++k) {
        long double sum = 0, squares = 0;
        for (std::size_t i = 0; i < k; ++i) {
            sum += eps[i];
            squares += eps[i] * eps[i];
        }
        EXPECT_EQ(prof.sum_of_squares[k - 1], squares);
        EXPECT_NEAR(ld(prof.square_of_sum[k - 1]), ld(sum * sum), 1e-15);
        long double all_lags = 0;
        for (std::size_t lag = 1; lag < k; ++lag) {
            long double kappa = 0;
            for (std::size_t i = 0; i + lag < k; ++i) kappa += eps[i] * eps[i + lag];
            all_lags += kappa;
            if (lag <= 3) {
                EXPECT_NEAR(ld(prof.kappa_at(lag, k)), ld(kappa), 1e-15) << lag << " " << k;
            }
        }
        EXPECT_NEAR(ld(prof.pair_sum(k)), ld(all_lags), 1e-14);
        if (k > 1) {
            EXPECT_NEAR(ld(prof.remainder(1, k)), ld(all_lags - prof.kappa_at(1, k)), 1e-14);
        }
    }
    EXPECT_THROW(prof.remainder(4, 6), std::invalid_argument);
}

TEST(EnsembleStats, MeansAndVariance) {
    std::vector<RealizationSeries> series(3);
    const std::vector<std::vector<std::uint64_t>> counts{{1, 4}, {3, 4}, {5, 10}};
    for (std::size_t r = 0; r < 3; ++r) {
        series[r].K = 2;
        series[r].counts = counts[r];
    }
    const std::vector<long double> tilde{3.0L, 6.0L};
    const auto st = ensemble_stats(series, tilde, 1);
    EXPECT_EQ(st.realizations, 3u);
    EXPECT_EQ(st.mean[0], 3.0L);
    EXPECT_EQ(st.mean[1], 6.0L);
    EXPECT_EQ(st.variance[0], 4.0L);
    EXPECT_EQ(st.variance[1], 12.0L);
    // sums 5, 7, 15
    EXPECT_NEAR(ld(st.sum_variance), 28.0, 1e-15);
    // eps products at lag 1: (-2)(-2), 0, (2)(4)
    EXPECT_NEAR(ld(st.profile.kappa_at(1, 2)), 4.0, 1e-15);
    EXPECT_THROW(ensemble_stats(std::vector<RealizationSeries>{}, tilde, 1), std::invalid_argument);
    EXPECT_THROW(ensemble_stats(series, std::vector<long double>{1.0L}, 1), std::invalid_argument);
}

}  // namespace
}  // namespace primesq
