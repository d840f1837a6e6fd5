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

#include "primesq/interval_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "primesq/errors.hpp"

namespace primesq {

namespace {

long double log_square(std::uint64_t p) { return 2.0L * std::log(static_cast<long double>(p)); }

void require_interval(const PrimeTable& table, std::size_t k, const char* who) {
    if (k < 1 || !table.has_index(k + 1)) {
        throw std::out_of_range(std::string(who) + ": interval " + std::to_string(k) +
                                " needs p_{k+1} in the prime table");
    }
}

long double interval_length(const PrimeTable& table, std::size_t k) {
    return static_cast<long double>(make_interval(table, k).length);
}

// Integral of e^u / u over [lo, hi] (u = log t).
long double integrate_log_space(long double lo, long double hi) {
    using boost::math::quadrature::gauss_kronrod;
    const auto integrand = [](long double u) { return std::exp(u) / u; };
    return gauss_kronrod<long double, 31>::integrate(integrand, lo, hi, 15, 1e-15L);
}

// Integral of 1 / log(a + u) over [0, width]; used for short ranges where
// the log-space nodes crowd together.
long double integrate_offset(long double a, long double width) {
    using boost::math::quadrature::gauss_kronrod;
    const auto integrand = [a](long double u) { return 1.0L / std::log(a + u); };
    return gauss_kronrod<long double, 31>::integrate(integrand, 0.0L, width, 15, 1e-15L);
}

}  // namespace

long double euler_density(const PrimeTable& table, std::size_t k) {
    if (k < 1) throw std::invalid_argument("euler_density: k must be >= 1");
    long double product = 1.0L;
    for (std::uint64_t p : table.first(k)) {
        product *= 1.0L - 1.0L / static_cast<long double>(p);
    }
    return product;
}

std::vector<long double> euler_densities(const PrimeTable& table, std::size_t K) {
    std::vector<long double> out;
    out.reserve(K);
    long double product = 1.0L;
    for (std::uint64_t p : table.first(K)) {
        product *= 1.0L - 1.0L / static_cast<long double>(p);
        out.push_back(product);
    }
    return out;
}

long double tilde_pi_interval(const PrimeTable& table, std::size_t k) {
    require_interval(table, k, "tilde_pi_interval");
    return interval_length(table, k) * euler_density(table, k);
}

std::vector<long double> tilde_pi_intervals(const PrimeTable& table, std::size_t K) {
    require_interval(table, K, "tilde_pi_intervals");
    const auto density = euler_densities(table, K);
    std::vector<long double> out(K);
    for (std::size_t k = 1; k <= K; ++k) out[k - 1] = interval_length(table, k) * density[k - 1];
    return out;
}

long double tilde_pi_at(const PrimeTable& table, long double x) {
    if (!(x >= 4.0L)) throw std::invalid_argument("tilde_pi_at: x must be >= 4");
    // k with p_k^2 <= x < p_{k+1}^2
    std::size_t k = 1;
    CompensatedSum<long double> total;
    long double density = 1.0L;
    while (true) {
        require_interval(table, k, "tilde_pi_at");
        const Interval iv = make_interval(table, k);
        density *= 1.0L - 1.0L / static_cast<long double>(iv.p_lo);
        const long double tilde = static_cast<long double>(iv.length) * density;
        if (x < static_cast<long double>(iv.end())) {
            const long double share = (x - static_cast<long double>(iv.first())) /
                                      static_cast<long double>(iv.length);
            total += share * tilde;
            return total.value();
        }
        total += tilde;
        ++k;
    }
}

long double mertens_delta_bound(long double x) {
    if (!(x > 1.0L)) throw std::invalid_argument("mertens_delta_bound: x must be > 1");
    const long double r = std::sqrt(x);
    return 4.0L / std::log(r + 1.0L) + 2.0L / (r * std::log(r)) + 1.0L / (2.0L * r);
}

long double li_at(long double x) {
    if (!(x >= 2.0L)) throw std::invalid_argument("li_at: x must be >= 2");
    if (x == 2.0L) return 0.0L;
    return integrate_log_space(std::log(2.0L), std::log(x));
}

long double li_between(long double a, long double b) {
    if (!(a >= 2.0L) || !(b >= a)) throw std::invalid_argument("li_between: need 2 <= a <= b");
    if (a == b) return 0.0L;
    if (b < 2.0L * a) return integrate_offset(a, b - a);
    return integrate_log_space(std::log(a), std::log(b));
}

long double li_interval(const PrimeTable& table, std::size_t k) {
    const Interval iv = make_interval(table, k);
    return li_between(static_cast<long double>(iv.first()), static_cast<long double>(iv.end()));
}

namespace {

// Accumulates mu(d)/d into the bucket where d first enters the truncated
// sum; see truncated_mobius_sums.
template <typename Sink>
void sieve_smooth_squarefree(const PrimeTable& table, std::size_t K, std::size_t segment_size,
                             Sink&& sink) {
    const std::uint64_t limit = table[K + 1] * table[K + 1];  // exclusive
    const auto primes = table.first(K);
    std::vector<std::uint64_t> product(segment_size);
    std::vector<std::int8_t> sign(segment_size);
    std::vector<std::uint32_t> largest(segment_size);

    std::size_t root_index = 0;  // pi(isqrt(d)) for the current d
    for (std::uint64_t lo = 1; lo < limit; lo += segment_size) {
        const std::uint64_t hi = std::min<std::uint64_t>(lo + segment_size, limit);
        const std::size_t len = static_cast<std::size_t>(hi - lo);
        std::fill_n(product.begin(), len, 1);
        std::fill_n(sign.begin(), len, 1);
        std::fill_n(largest.begin(), len, 0);
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const std::uint64_t p = primes[i];
            if (p >= hi) break;
            for (std::uint64_t n = ((lo + p - 1) / p) * p; n < hi; n += p) {
                const std::size_t at = static_cast<std::size_t>(n - lo);
                product[at] *= p;
                sign[at] = static_cast<std::int8_t>(-sign[at]);
                largest[at] = static_cast<std::uint32_t>(i + 1);
            }
            const std::uint64_t sq = p * p;
            if (sq < hi) {
                for (std::uint64_t n = std::max(((lo + sq - 1) / sq) * sq, sq); n < hi; n += sq) {
                    sign[static_cast<std::size_t>(n - lo)] = 0;
                }
            }
        }
        for (std::size_t at = 0; at < len; ++at) {
            const std::uint64_t d = lo + at;
            while (root_index < table.size() &&
                   table.primes()[root_index] * table.primes()[root_index] <= d) {
                ++root_index;
            }
            if (sign[at] == 0 || product[at] != d) continue;
            const std::size_t k0 = std::max<std::size_t>({largest[at], root_index, 1});
            if (k0 <= K) sink(k0, sign[at], d);
        }
    }
}

void check_tau_capacity(const PrimeTable& table, std::size_t K, std::uint64_t capacity) {
    if (K < 1) throw std::invalid_argument("truncated_mobius_sums: K must be >= 1");
    if (!table.has_index(K + 1)) {
        throw ResourceLimitError("truncated_mobius_sums: prime table lacks p_{K+1}", K);
    }
    const std::uint64_t top = checked_mul(table[K + 1], table[K + 1]);
    if (top > capacity) {
        throw ResourceLimitError("truncated_mobius_sums: p_{K+1}^2 = " + std::to_string(top) +
                                     " exceeds capacity",
                                 K);
    }
}

}  // namespace

std::vector<long double> truncated_mobius_sums(const PrimeTable& table, std::size_t K,
                                               const TauOptions& options) {
    check_tau_capacity(table, K, options.capacity);
    std::vector<CompensatedSum<long double>> entering(K + 1);
    sieve_smooth_squarefree(table, K, options.segment_size,
                            [&](std::size_t k0, int sign, std::uint64_t d) {
                                entering[k0] += static_cast<long double>(sign) /
                                                static_cast<long double>(d);
                            });
    std::vector<long double> sums(K);
    CompensatedSum<long double> running;
    for (std::size_t k = 1; k <= K; ++k) {
        running += entering[k].value();
        sums[k - 1] = running.value();
    }
    return sums;
}

std::vector<Rational> truncated_mobius_sums_exact(const PrimeTable& table, std::size_t K) {
    // Denominators divide p_K#, which must stay well inside 128 bits.
    if (K > 20) throw ResourceLimitError("truncated_mobius_sums_exact: K too large", K);
    check_tau_capacity(table, K, kDefaultSieveCapacity);
    std::vector<Rational> entering(K + 1);
    sieve_smooth_squarefree(table, K, 1 << 16, [&](std::size_t k0, int sign, std::uint64_t d) {
        entering[k0] += Rational(sign, static_cast<int128>(d));
    });
    std::vector<Rational> sums(K);
    Rational running;
    for (std::size_t k = 1; k <= K; ++k) {
        running += entering[k];
        sums[k - 1] = running;
    }
    return sums;
}

std::vector<long double> tau_truncated(const PrimeTable& table, std::size_t K,
                                       const TauOptions& options) {
    auto sums = truncated_mobius_sums(table, K, options);
    for (std::size_t k = 1; k <= K; ++k) sums[k - 1] *= interval_length(table, k);
    return sums;
}

long double ms_mean(const PrimeTable& table, std::size_t k) {
    const Interval iv = make_interval(table, k);
    return static_cast<long double>(iv.length) / log_square(iv.p_hi);
}

std::optional<long double> ms_std(const PrimeTable& table, std::size_t k) {
    const Interval iv = make_interval(table, k);
    const long double log_end = log_square(iv.p_hi);
    const long double l = static_cast<long double>(iv.length);
    const long double radicand = l * (log_end - std::log(l) + kMontgomerySoundararajanB);
    if (!(radicand > 0.0L)) return std::nullopt;
    return std::sqrt(radicand) / log_end;
}

std::optional<long double> normalize_pi(const PrimeTable& table, std::size_t k,
                                        std::uint64_t pi_k) {
    const auto sigma = ms_std(table, k);
    if (!sigma) return std::nullopt;
    return (static_cast<long double>(pi_k) - ms_mean(table, k)) / *sigma;
}

std::vector<IntervalStats> interval_stats(const PrimeTable& table,
                                          std::span<const std::uint64_t> counts,
                                          std::span<const long double> tau) {
    const std::size_t K = counts.size();
    if (!tau.empty() && tau.size() != K) {
        throw std::invalid_argument("interval_stats: tau and counts differ in length");
    }
    const auto tilde = tilde_pi_intervals(table, K);
    std::vector<IntervalStats> out(K);
#pragma omp parallel for schedule(static)
    for (std::size_t k = 1; k <= K; ++k) {
        IntervalStats& s = out[k - 1];
        s.k = k;
        s.li_k = li_interval(table, k);
        s.tilde_pi_k = tilde[k - 1];
        if (!tau.empty()) s.tau_k = tau[k - 1];
        s.mu_k = ms_mean(table, k);
        s.sigma_k = ms_std(table, k);
        if (s.sigma_k) s.pi_bar_k = (static_cast<long double>(counts[k - 1]) - s.mu_k) / *s.sigma_k;
    }
    return out;
}

ErrorSeries error_series(const PrimeTable& table, std::span<const std::uint64_t> cumulative,
                         long double c) {
    const std::size_t K = cumulative.size();
    if (K < 1) throw std::invalid_argument("error_series: empty cumulative counts");
    require_interval(table, K, "error_series");
    ErrorSeries es;
    es.K = K;
    es.c = c;
    es.li.resize(K);
    es.epsilon.resize(K);
    es.epsilon_adj.resize(K);
    es.delta_norm.resize(K);
    es.E.resize(K);
    es.lower_sum.resize(K);
    es.upper_sum.resize(K);
    es.li_sum.resize(K);

    std::vector<long double> li_parts(K);
#pragma omp parallel for schedule(static)
    for (std::size_t k = 1; k <= K; ++k) {
        es.li[k - 1] = li_at(static_cast<long double>(table[k + 1] * table[k + 1]));
        li_parts[k - 1] = li_interval(table, k);
    }

    CompensatedSum<long double> lower, upper, half_diff, li_sum;
    for (std::size_t k = 1; k <= K; ++k) {
        const Interval iv = make_interval(table, k);
        const long double l = static_cast<long double>(iv.length);
        const long double below = l / log_square(iv.p_lo);
        const long double above = l / log_square(iv.p_hi);
        lower += below;
        upper += above;
        half_diff += 0.5L * (below - above);
        li_sum += li_parts[k - 1];

        const std::size_t i = k - 1;
        const long double pi = static_cast<long double>(cumulative[i]);
        es.lower_sum[i] = lower.value();
        es.upper_sum[i] = upper.value();
        es.li_sum[i] = li_sum.value();
        es.delta_norm[i] = half_diff.value();
        es.epsilon[i] = pi - es.li[i];
        es.epsilon_adj[i] = pi - (c * es.li[i] + (1.0L - c) * es.upper_sum[i]);
        es.E[i] = es.epsilon[i] / es.delta_norm[i];
    }
    return es;
}

}  // namespace primesq
