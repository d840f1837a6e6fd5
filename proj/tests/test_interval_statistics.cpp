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

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "primesq/errors.hpp"
#include "primesq/interval_statistics.hpp"
#include "primesq/prime_engine.hpp"

namespace primesq {
namespace {

class IntervalStatistics : public ::testing::Test {
  protected:
    static void SetUpTestSuite() { table_ = new PrimeTable(PrimeTable::with_count(1201)); }
    static void TearDownTestSuite() {
        delete table_;
        table_ = nullptr;
    }
    static const PrimeTable& table() { return *table_; }

    static long double log_sq(std::size_t k) {
        return 2.0L * std::log(static_cast<long double>(table()[k]));
    }

  private:
    static PrimeTable* table_;
};

PrimeTable* IntervalStatistics::table_ = nullptr;

TEST_F(IntervalStatistics, EulerDensity) {
    EXPECT_EQ(euler_density(table(), 1), 0.5L);
    EXPECT_NEAR(static_cast<double>(euler_density(table(), 3)), 4.0 / 15.0, 1e-18);
    const auto all = euler_densities(table(), 50);
    long double product = 1.0L;
    for (std::size_t k = 1; k <= 50; ++k) {
        product *= 1.0L - 1.0L / static_cast<long double>(table()[k]);
        EXPECT_NEAR(static_cast<double>(all[k - 1]), static_cast<double>(product), 1e-17);
    }
    const long double ratio = euler_density(table(), 1000) * log_sq(1001) / 2.0L;
    EXPECT_NEAR(static_cast<double>(ratio / std::exp(-kEulerGamma)), 1.0, 0.005);
}

TEST_F(IntervalStatistics, MertensSandwich) {
    for (std::size_t k = 1; k <= 1200; ++k) {
        const long double delta = mertens_delta_bound(std::pow(static_cast<long double>(table()[k + 1]), 2));
        const long double v = euler_density(table(), k) * log_sq(k + 1) / 2.0L;
        ASSERT_GE(v, std::exp(-kEulerGamma - delta)) << k;
        ASSERT_LE(v, std::exp(-kEulerGamma + delta)) << k;
    }
}

TEST_F(IntervalStatistics, MertensDeltaBound) {
    EXPECT_NEAR(static_cast<double>(mertens_delta_bound(49.0L)), 2.1418, 5e-4);
    const long double four = 4.0L / std::log(3.0L) + 2.0L / (2.0L * std::log(2.0L)) + 0.25L;
    EXPECT_NEAR(static_cast<double>(mertens_delta_bound(4.0L)), static_cast<double>(four), 1e-15);
    EXPECT_NEAR(static_cast<double>(mertens_delta_bound(4.0L)), 5.334, 1e-3);
    EXPECT_GT(mertens_delta_bound(1e6L), mertens_delta_bound(1e8L));
    EXPECT_GT(mertens_delta_bound(1e8L), 0.0L);
    EXPECT_THROW(mertens_delta_bound(1.0L), std::invalid_argument);
}

TEST_F(IntervalStatistics, TildePiInterval) {
    EXPECT_NEAR(static_cast<double>(tilde_pi_interval(table(), 3)), 6.4, 1e-15);
    EXPECT_NEAR(static_cast<double>(tilde_pi_interval(table(), 1)), 2.5, 1e-15);
    const long double ratio = tilde_pi_interval(table(), 1000) / ms_mean(table(), 1000);
    EXPECT_NEAR(static_cast<double>(ratio), 2.0 * std::exp(-0.5772156649015329), 0.02);
}

TEST_F(IntervalStatistics, TildePiAt) {
    EXPECT_NEAR(static_cast<double>(tilde_pi_at(table(), 9.0L)), 2.5, 1e-15);
    EXPECT_NEAR(static_cast<double>(tilde_pi_at(table(), 6.5L)), 1.25, 1e-15);
    EXPECT_EQ(tilde_pi_at(table(), 4.0L), 0.0L);
    EXPECT_THROW(tilde_pi_at(table(), 3.0L), std::invalid_argument);

    const auto parts = tilde_pi_intervals(table(), 200);
    long double sum = 0;
    for (std::size_t k = 1; k <= 200; ++k) {
        sum += parts[k - 1];
        const auto x = static_cast<long double>(table()[k + 1] * table()[k + 1]);
        ASSERT_NEAR(static_cast<double>(tilde_pi_at(table(), x)), static_cast<double>(sum),
                    1e-12 * static_cast<double>(sum))
            << k;
        // continuity across the interval boundary
        ASSERT_NEAR(static_cast<double>(tilde_pi_at(table(), x - 1e-6L)),
                    static_cast<double>(sum), 1e-5)
            << k;
    }
    long double prev = 0;
    for (long double x = 4.0L; x < 40000.0L; x += 3.7L) {
        const long double v = tilde_pi_at(table(), x);
        ASSERT_GE(v, prev) << static_cast<double>(x);
        prev = v;
    }
}

TEST_F(IntervalStatistics, LiMatchesSeriesOracle) {
    EXPECT_EQ(li_at(2.0L), 0.0L);
    EXPECT_NEAR(static_cast<double>(li_at(100.0L)), 29.0810, 1e-4);
    for (long double x : {2.5L, 10.0L, 100.0L, 1e4L, 1e7L, 1234567.0L, 1e10L, 5e10L, 1e12L}) {
        const long double expected = oracle::li_series(x);
        EXPECT_NEAR(static_cast<double>(li_at(x) / expected), 1.0, 1e-17) << static_cast<double>(x);
    }
    EXPECT_THROW(li_at(1.5L), std::invalid_argument);
}

TEST_F(IntervalStatistics, LiBetween) {
    EXPECT_EQ(li_between(7.0L, 7.0L), 0.0L);
    for (auto [a, b] : {std::pair{4.0L, 9.0L}, {1000.0L, 1900.0L}, {49.0L, 121.0L}, {10.0L, 1e6L}}) {
        const long double expected = oracle::li_series(b) - oracle::li_series(a);
        EXPECT_NEAR(static_cast<double>(li_between(a, b) / expected), 1.0, 1e-15);
    }
    EXPECT_THROW(li_between(9.0L, 4.0L), std::invalid_argument);
    EXPECT_THROW(li_between(1.0L, 4.0L), std::invalid_argument);
}

TEST_F(IntervalStatistics, LiIntervalBracketing) {
    const long double li3 = li_interval(table(), 3);
    EXPECT_GT(24.0L / std::log(25.0L), li3);
    EXPECT_GT(li3, 24.0L / std::log(49.0L));
    for (std::size_t k = 1; k <= 1200; ++k) {
        const long double l = static_cast<long double>(make_interval(table(), k).length);
        const long double v = li_interval(table(), k);
        ASSERT_GT(l / log_sq(k), v) << k;
        ASSERT_GT(v, l / log_sq(k + 1)) << k;
    }
}

TEST_F(IntervalStatistics, TruncatedSumsExactSmallK) {
    const std::vector<Rational> expected{
        Rational(1, 2),     Rational(1, 3),     Rational(4, 15),           Rational(47, 210),
        Rational(67, 330),  Rational(13, 70),   Rational(15517, 85085),    Rational(1648693, 9699690)};
    const auto exact = truncated_mobius_sums_exact(table(), 8);
    const auto primes = std::vector<std::uint64_t>(table().primes().begin(), table().primes().begin() + 9);
    ASSERT_EQ(exact.size(), 8u);
    for (std::size_t k = 1; k <= 8; ++k) {
        EXPECT_EQ(exact[k - 1], oracle::truncated_sum_direct(primes, k)) << k;
        EXPECT_EQ(exact[k - 1], expected[k - 1]) << k;
    }
    const auto fast = truncated_mobius_sums(table(), 8);
    for (std::size_t k = 1; k <= 8; ++k) {
        EXPECT_NEAR(static_cast<double>(fast[k - 1]), exact[k - 1].to_double(), 1e-17) << k;
    }
    const auto tau = tau_truncated(table(), 1);
    EXPECT_NEAR(static_cast<double>(tau[0]), 2.5, 1e-15);
}

TEST_F(IntervalStatistics, TruncatedSumsExactWideK) {
    const auto exact = truncated_mobius_sums_exact(table(), 16);
    const auto primes = std::vector<std::uint64_t>(table().primes().begin(), table().primes().begin() + 17);
    for (std::size_t k = 9; k <= 16; ++k) {
        EXPECT_EQ(exact[k - 1], oracle::truncated_sum_direct(primes, k)) << k;
    }
    EXPECT_THROW(truncated_mobius_sums_exact(table(), 21), ResourceLimitError);
}

TEST_F(IntervalStatistics, TruncatedSumsSegmentation) {
    TauOptions small;
    small.segment_size = 1000;
    const auto a = truncated_mobius_sums(table(), 150);
    const auto b = truncated_mobius_sums(table(), 150, small);
    for (std::size_t k = 1; k <= 150; ++k) {
        EXPECT_NEAR(static_cast<double>(a[k - 1]), static_cast<double>(b[k - 1]), 1e-16) << k;
    }
    TauOptions tight;
    tight.capacity = 1000;
    EXPECT_THROW(truncated_mobius_sums(table(), 150, tight), ResourceLimitError);
}

TEST_F(IntervalStatistics, TruncatedRatioNearOnePointZeroThree) {
    const auto tau = tau_truncated(table(), 1000);
    long double mean = 0;
    for (std::size_t k = 900; k <= 1000; ++k) mean += tau[k - 1] / ms_mean(table(), k);
    mean /= 101;
    EXPECT_NEAR(static_cast<double>(mean), 1.03, 0.03);
}

TEST_F(IntervalStatistics, MontgomerySoundararajan) {
    EXPECT_NEAR(static_cast<double>(kMontgomerySoundararajanB), -1.4151, 1e-4);
    EXPECT_NEAR(static_cast<double>(ms_mean(table(), 25)), 85.80, 0.005);
    const auto s25 = ms_std(table(), 25);
    ASSERT_TRUE(s25.has_value());
    EXPECT_NEAR(static_cast<double>(*s25), 3.256, 5e-4);
    EXPECT_FALSE(ms_std(table(), 3).has_value());
    for (std::size_t k = 1; k <= 1200; ++k) {
        const auto l = static_cast<long double>(make_interval(table(), k).length);
        ASSERT_NEAR(static_cast<double>(ms_mean(table(), k) * log_sq(k + 1) / l), 1.0, 1e-17);
        const bool valid = std::log(std::pow(static_cast<long double>(table()[k + 1]), 2) / l) +
                               kMontgomerySoundararajanB >
                           0;
        ASSERT_EQ(ms_std(table(), k).has_value(), valid) << k;
    }
}

TEST_F(IntervalStatistics, NormalizePi) {
    const auto counts = interval_counts(table(), 30);
    const auto z = normalize_pi(table(), 25, counts[24]);
    ASSERT_TRUE(z.has_value());
    EXPECT_GT(*z, -5.0L);
    EXPECT_LT(*z, 5.0L);
    EXPECT_FALSE(normalize_pi(table(), 3, counts[2]).has_value());
    // pi_k equal to mu_k gives 0, up to mu_k not being an integer
    const long double mu = ms_mean(table(), 25);
    const auto at_mu = normalize_pi(table(), 25, static_cast<std::uint64_t>(std::llround(mu)));
    EXPECT_NEAR(static_cast<double>(*at_mu),
                static_cast<double>((std::round(mu) - mu) / *ms_std(table(), 25)), 1e-15);
}

TEST_F(IntervalStatistics, IntervalStatsRecords) {
    const std::size_t K = 300;
    const auto counts = interval_counts(table(), K);
    const auto tau = tau_truncated(table(), K);
    const auto stats = interval_stats(table(), counts, tau);
    ASSERT_EQ(stats.size(), K);
    for (std::size_t k = 1; k <= K; ++k) {
        const auto& s = stats[k - 1];
        ASSERT_EQ(s.k, k);
        ASSERT_EQ(s.li_k, li_interval(table(), k));
        ASSERT_EQ(s.mu_k, ms_mean(table(), k));
        ASSERT_TRUE(s.tau_k.has_value());
        ASSERT_EQ(*s.tau_k, tau[k - 1]);
        ASSERT_EQ(s.sigma_k.has_value(), s.pi_bar_k.has_value());
        ASSERT_NEAR(static_cast<double>(s.tilde_pi_k), static_cast<double>(tilde_pi_interval(table(), k)),
                    1e-12 * static_cast<double>(s.tilde_pi_k));
    }
    const auto no_tau = interval_stats(table(), counts);
    EXPECT_FALSE(no_tau.front().tau_k.has_value());
}

TEST_F(IntervalStatistics, ErrorSeriesInvariants) {
    const std::size_t K = 1000;
    const auto cumulative = cumulative_pi(table(), K);
    const auto es = error_series(table(), cumulative);
    ASSERT_EQ(es.K, K);
    EXPECT_EQ(es.c, kDefaultMeanWeight);
    EXPECT_NEAR(static_cast<double>(kDefaultMeanWeight), 0.396, 1e-15);
    long double prev = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        const std::size_t i = k - 1;
        ASSERT_GT(es.delta_norm[i], prev) << k;
        prev = es.delta_norm[i];
        ASSERT_EQ(es.E[i], es.epsilon[i] / es.delta_norm[i]);
        ASSERT_LT(es.upper_sum[i], es.li[i]) << k;
        ASSERT_LT(es.upper_sum[i], es.lower_sum[i]) << k;
        ASSERT_NEAR(static_cast<double>(es.delta_norm[i]),
                    static_cast<double>((es.lower_sum[i] - es.upper_sum[i]) / 2.0L),
                    1e-9 * static_cast<double>(es.delta_norm[i]));
        ASSERT_EQ(es.epsilon[i], static_cast<long double>(cumulative[i]) - es.li[i]);
    }
    const auto x = static_cast<long double>(table()[K + 1] * table()[K + 1]);
    EXPECT_NEAR(static_cast<double>(es.li[K - 1] / oracle::li_series(x)), 1.0, 1e-17);
    EXPECT_NEAR(static_cast<double>(es.li_sum[K - 1] / (es.li[K - 1] - li_at(4.0L))), 1.0, 1e-15);

    const auto unit = error_series(table(), cumulative, 1.0L);
    for (std::size_t i = 0; i < K; ++i) ASSERT_EQ(unit.epsilon_adj[i], unit.epsilon[i]);
    EXPECT_THROW(error_series(table(), std::vector<std::uint64_t>{}), std::invalid_argument);
}

}  // namespace
}  // namespace primesq
