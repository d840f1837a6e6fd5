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

#pragma once

// Per-interval and cumulative estimators for the prime counts pi_k:
// Euler products, Mertens' approximation, the logarithmic integral,
// truncated Moebius sums, Montgomery–Soundararajan normalization and the
// normalized global error series.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "primesq/numeric.hpp"
#include "primesq/prime_engine.hpp"

namespace primesq {

inline constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
// B = 1 - gamma - log(2 pi)
inline constexpr long double kMontgomerySoundararajanB =
    1.0L - kEulerGamma - 1.837877066409345483560659472811235279L;
// Default weight c of li in the adjusted mean c*li + (1-c)*sum l_j/log p_{j+1}^2.
inline constexpr long double kDefaultMeanWeight = 1.0L - 0.604L;

// prod_{p <= p_k} (1 - 1/p), as a running product in long double.
long double euler_density(const PrimeTable& table, std::size_t k);
// euler_density(k) for k = 1..K.
std::vector<long double> euler_densities(const PrimeTable& table, std::size_t K);

// tilde_pi_k = l_k * euler_density(k).
long double tilde_pi_interval(const PrimeTable& table, std::size_t k);
std::vector<long double> tilde_pi_intervals(const PrimeTable& table, std::size_t K);

// Expected prime count up to x: full intervals below x plus the linear
// share of the interval containing x. Requires x >= 4.
long double tilde_pi_at(const PrimeTable& table, long double x);

// Bound on |delta| in prod (1-1/p) = 2 e^{-gamma+delta} / log x. Requires x > 1.
long double mertens_delta_bound(long double x);

// li(x) = integral from 2 to x of dt / log t (note: not the principal value
// from 0). Gauss–Kronrod quadrature in log space. Requires x >= 2.
long double li_at(long double x);
// li(b) - li(a), integrated directly over [a, b].
long double li_between(long double a, long double b);
// li_k = li(p_{k+1}^2) - li(p_k^2).
long double li_interval(const PrimeTable& table, std::size_t k);

struct TauOptions {
    // Numbers per segment of the Moebius / largest-prime-factor sieve.
    std::size_t segment_size = 1 << 18;
    // Largest p_{K+1}^2 the sieve may reach.
    std::uint64_t capacity = 20'000'000'000ULL;
};

// sum_{d | p_k#, d < p_{k+1}^2} mu(d)/d for k = 1..K, computed in one pass
// over d < p_{K+1}^2: each squarefree p_K-smooth d enters at
// k0(d) = max(index of its largest prime factor, pi(isqrt(d))).
std::vector<long double> truncated_mobius_sums(const PrimeTable& table, std::size_t K,
                                               const TauOptions& options = {});
// Same algorithm with exact rational accumulation (small K only).
std::vector<Rational> truncated_mobius_sums_exact(const PrimeTable& table, std::size_t K);

// tau_k = l_k * truncated_mobius_sums[k].
std::vector<long double> tau_truncated(const PrimeTable& table, std::size_t K,
                                       const TauOptions& options = {});

// mu_k = l_k / log p_{k+1}^2.
long double ms_mean(const PrimeTable& table, std::size_t k);
// sigma_k = sqrt(l_k (log(p_{k+1}^2 / l_k) + B)) / log p_{k+1}^2, absent when
// the radicand is not positive.
std::optional<long double> ms_std(const PrimeTable& table, std::size_t k);
// (pi_k - mu_k) / sigma_k, absent with sigma_k.
std::optional<long double> normalize_pi(const PrimeTable& table, std::size_t k,
                                        std::uint64_t pi_k);

struct IntervalStats {
    std::size_t k = 0;
    long double li_k = 0;
    long double tilde_pi_k = 0;
    std::optional<long double> tau_k;
    long double mu_k = 0;
    std::optional<long double> sigma_k;
    std::optional<long double> pi_bar_k;
};

// Stats for k = 1..counts.size(); counts[k-1] = pi_k. tau is filled in when
// `tau` is non-empty (same length as counts).
std::vector<IntervalStats> interval_stats(const PrimeTable& table,
                                          std::span<const std::uint64_t> counts,
                                          std::span<const long double> tau = {});

struct ErrorSeries {
    std::size_t K = 0;
    long double c = kDefaultMeanWeight;
    std::vector<long double> li;           // li(p_{k+1}^2)
    std::vector<long double> epsilon;      // pi(p_{k+1}^2) - li(p_{k+1}^2)
    std::vector<long double> epsilon_adj;  // pi - [c li + (1-c) upper_sum]
    std::vector<long double> delta_norm;   // Delta_k
    std::vector<long double> E;            // epsilon / Delta_k
    std::vector<long double> lower_sum;    // sum_{j<=k} l_j / log p_j^2
    std::vector<long double> upper_sum;    // sum_{j<=k} l_j / log p_{j+1}^2
    std::vector<long double> li_sum;       // sum_{j<=k} li_j
};

// cumulative[k-1] = pi(p_{k+1}^2), as returned by cumulative_pi.
ErrorSeries error_series(const PrimeTable& table, std::span<const std::uint64_t> cumulative,
                         long double c = kDefaultMeanWeight);

}  // namespace primesq
