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

// Covariance of coprime counts in windows: F_n(m, h), the covariance G in
// enumeration, three-sum and compact Moebius forms, the variance H, and the
// aggregate covariance sums over the intervals s_k.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primesq/numeric.hpp"
#include "primesq/prime_engine.hpp"

namespace primesq {

// A modulus given either explicitly or as a primorial p_i#. Only the set of
// distinct prime factors is kept; primorials are never materialized.
class Modulus {
  public:
    // Throws std::invalid_argument for n < 1.
    static Modulus explicit_value(std::uint64_t n);
    // p_index#; the table must hold p_index.
    static Modulus primorial(std::size_t index, const PrimeTable& table);
    // "P#i" or a decimal integer.
    static Modulus parse(const std::string& text, const PrimeTable& table);

    bool is_primorial() const { return primorial_index_.has_value(); }
    std::optional<std::size_t> primorial_index() const { return primorial_index_; }
    // The integer value when it fits in 64 bits.
    std::optional<std::uint64_t> value() const { return value_; }
    // Distinct prime factors, ascending.
    const std::vector<std::uint64_t>& primes() const { return primes_; }
    // Product of the distinct prime factors, when it fits in 64 bits.
    std::optional<std::uint64_t> radical() const;
    bool is_even() const { return !primes_.empty() && primes_.front() == 2; }
    // Phi(n)/n = prod_{p | n} (1 - 1/p).
    long double totient_ratio() const;
    std::string label() const;

  private:
    Modulus() = default;
    std::optional<std::uint64_t> value_;
    std::optional<std::size_t> primorial_index_;
    std::vector<std::uint64_t> primes_;
};

struct CovParams {
    Modulus n1;
    Modulus n2;
    std::int64_t h1 = 1;
    std::int64_t h2 = 1;
    std::int64_t q = 0;
};

// Largest averaging period accepted by the enumeration path.
inline constexpr std::uint64_t kEnumPeriodLimit = 10'000'000;
// Largest omega((n1, n2)') accepted by the compact form.
inline constexpr std::size_t kCompactMaxOmega = 25;

// F_n(m, h): number of r in [m, m + h - 1] coprime to n.
std::int64_t count_coprime_window(const Modulus& n, std::int64_t m, std::int64_t h);

// Exact covariance by averaging over a full joint period. Needs the
// radicals' lcm to be at most kEnumPeriodLimit (ResourceLimitError otherwise).
Rational G_enum(const CovParams& params);

// Weighted sum over window offsets t with even t, weights
// prod_{p | (n1,n2)', p | t} (1 + 1/(p-2)), minus the cross term.
// Both moduli must be even (UnsupportedCaseError otherwise); any h1, h2 >= 1
// and any integer q are accepted.
long double G_threesum(const CovParams& params);

// Q(n1,n2)/(n1 n2) * sum_{d | (n1,n2)'} mu^2(d)/rho(d) * B(h1,h2,q,d).
// Both moduli even; omega((n1,n2)') <= kCompactMaxOmega.
long double G_compact(const CovParams& params);

// Three-sum when both moduli are even, enumeration otherwise.
long double G_value(const CovParams& params);

// Helpers of the compact form. d is taken as given (B passes 2d).
// Q(n1,n2) = n1 n2/2 prod_{p | n1 n2/(n1,n2)^2} (1-1/p) prod_{p | (n1,n2)'} (1-2/p).
Rational Q_value(std::uint64_t n1, std::uint64_t n2);
// Q(n1,n2)/(n1 n2) from prime lists, for radical moduli.
long double Q_scale(const Modulus& n1, const Modulus& n2);
// prod_{p | d} (p - 2).
std::int64_t rho(std::uint64_t d);
// Moebius function.
int mobius(std::uint64_t n);
// 1 iff d | q + i for some i in [1, d{h/d}].
int gamma_plus(std::int64_t h, std::int64_t q, int128 d);
// 1 iff d | q - i for some i in [1, d{h/d}].
int gamma_minus(std::int64_t h, std::int64_t q, int128 d);
// {q/d}_1: the fractional part, except 1 when d | q.
Rational frac_one(std::int64_t q, std::int64_t d);
// B(h1, h2, q, d) of the compact form.
long double compact_B(std::int64_t h1, std::int64_t h2, std::int64_t q, int128 d);

// H(n, h) = G(n, n, h, h, 0). Even n: Hausman–Shapiro divisor sum when
// omega(n') is small, three-sum otherwise. Odd n: enumeration.
long double H_variance(const Modulus& n, std::int64_t h);

// Start offset q between the windows of s_i and s_j, i < j.
enum class Separation {
    end_to_end,      // p_{j+1}^2 - p_{i+1}^2
    start_to_start,  // p_j^2 - p_i^2
};

std::int64_t separation(const PrimeTable& table, std::size_t i, std::size_t j, Separation sep);

// G(p_i#, p_j#, l_i, l_j, q_ij) for i < j.
long double interval_covariance(const PrimeTable& table, std::size_t i, std::size_t j,
                                Separation sep);

// kappa_th(j) = sum_{i=1}^{K-j} G(p_i#, p_{i+j}#, l_i, l_{i+j}, q) for j = 1..max_lag.
std::vector<long double> kappa_theory(const PrimeTable& table, std::size_t K,
                                      std::size_t max_lag, Separation sep);

struct CovarianceSums {
    std::size_t K = 0;
    Separation sep = Separation::end_to_end;
    std::vector<long double> H;               // H(p_k#, l_k), k = 1..K
    std::vector<long double> kappa;           // kappa_th(j), j = 1..K-1
    std::vector<long double> var_correlated;  // Var[Pi~(p_{k+1}^2)], k = 1..K
    std::vector<long double> var_uncorrelated;  // sum_{j<=k} H, k = 1..K
    // G for the pair i < j at (j-1)(j-2)/2 + i - 1.
    std::vector<long double> pairs;

    long double pair(std::size_t i, std::size_t j) const {
        return pairs[(j - 1) * (j - 2) / 2 + (i - 1)];
    }
    // kappa_th(lag; k) = sum_{i=1}^{k-lag} G(i, i+lag).
    long double kappa_at(std::size_t lag, std::size_t k) const;
    // sum_{j>d} kappa_th(j; k).
    long double remainder(std::size_t d, std::size_t k) const;
};

// Largest K accepted by covariance_sums (every pair is evaluated).
inline constexpr std::size_t kCovarianceMaxK = 1000;

// Every pair i < j <= K; ResourceLimitError beyond kCovarianceMaxK.
CovarianceSums covariance_sums(const PrimeTable& table, std::size_t K, Separation sep);

// sum_{j<=K} H(p_j#, l_j).
long double var_uncorrelated_theory(const PrimeTable& table, std::size_t K);
// sqrt(2 e^{-gamma} li(p_{K+1}^2)).
long double sigma_upper_bound(const PrimeTable& table, std::size_t K);

}  // namespace primesq
