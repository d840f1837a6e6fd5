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

#include "primesq/covariance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "primesq/errors.hpp"
#include "primesq/interval_statistics.hpp"

namespace primesq {

namespace {

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::vector<std::uint64_t> common_odd_primes(const Modulus& a, const Modulus& b) {
    std::vector<std::uint64_t> out;
    std::set_intersection(a.primes().begin(), a.primes().end(), b.primes().begin(),
                          b.primes().end(), std::back_inserter(out));
    if (!out.empty() && out.front() == 2) out.erase(out.begin());
    return out;
}

std::vector<std::uint64_t> exclusive_primes(const Modulus& a, const Modulus& b) {
    std::vector<std::uint64_t> out;
    std::set_symmetric_difference(a.primes().begin(), a.primes().end(), b.primes().begin(),
                                  b.primes().end(), std::back_inserter(out));
    return out;
}

int128 floor_mod128(int128 a, int128 m) {
    const int128 r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    const std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// Number of window pairs (x in [0,h1), y in [0,h2)) with y - x = s.
std::int64_t pair_count(std::int64_t h1, std::int64_t h2, std::int64_t s) {
    return std::max<std::int64_t>(0, std::min(h1, h2 - s) - std::max<std::int64_t>(0, -s));
}

void require_even(const CovParams& params, const char* who) {
    if (!params.n1.is_even() || !params.n2.is_even()) {
        throw UnsupportedCaseError(std::string(who) + ": both moduli must be even");
    }
}

void require_windows(const CovParams& params, const char* who) {
    if (params.h1 < 1 || params.h2 < 1) {
        throw std::invalid_argument(std::string(who) + ": window lengths must be >= 1");
    }
}

// Coprime counts over one period of a radical modulus.
class CoprimeCounter {
  public:
    explicit CoprimeCounter(const Modulus& n) {
        const auto radical = n.radical();
        if (!radical || *radical > kEnumPeriodLimit) {
            throw ResourceLimitError("G_enum: modulus " + n.label() + " too large to enumerate");
        }
        r_ = static_cast<std::int64_t>(*radical);
        prefix_.assign(static_cast<std::size_t>(r_) + 1, 0);
        for (std::int64_t x = 0; x < r_; ++x) {
            prefix_[x + 1] = prefix_[x] + (std::gcd(x, r_) == 1 ? 1 : 0);
        }
        phi_ = prefix_[r_];
    }
    std::int64_t radical() const { return r_; }
    std::int64_t phi() const { return phi_; }
    // #{r in [0, x) coprime}, relative to 0 (negative x allowed).
    std::int64_t below(std::int64_t x) const {
        const std::int64_t periods = floor_div(x, r_);
        return periods * phi_ + prefix_[x - periods * r_];
    }
    std::int64_t window(std::int64_t m, std::int64_t h) const { return below(m + h) - below(m); }

  private:
    std::int64_t r_ = 1;
    std::int64_t phi_ = 1;
    std::vector<std::int64_t> prefix_;
};

}  // namespace

Modulus Modulus::explicit_value(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("Modulus: n must be >= 1");
    Modulus m;
    m.value_ = n;
    m.primes_ = distinct_prime_factors(n);
    return m;
}

Modulus Modulus::primorial(std::size_t index, const PrimeTable& table) {
    if (index < 1) throw std::invalid_argument("Modulus: primorial index must be >= 1");
    if (!table.has_index(index)) {
        throw ResourceLimitError("Modulus: prime table lacks p_" + std::to_string(index), index);
    }
    Modulus m;
    m.primorial_index_ = index;
    const auto ps = table.first(index);
    m.primes_.assign(ps.begin(), ps.end());
    std::uint64_t value = 1;
    bool fits = true;
    for (std::uint64_t p : m.primes_) {
        if (value > UINT64_MAX / p) {
            fits = false;
            break;
        }
        value *= p;
    }
    if (fits) m.value_ = value;
    return m;
}

Modulus Modulus::parse(const std::string& text, const PrimeTable& table) {
    const bool primorial_form = text.rfind("P#", 0) == 0;
    const std::string digits = primorial_form ? text.substr(2) : text;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || v < 1) {
        throw std::invalid_argument("Modulus: cannot parse '" + text + "'");
    }
    return primorial_form ? primorial(static_cast<std::size_t>(v), table) : explicit_value(v);
}

std::optional<std::uint64_t> Modulus::radical() const {
    std::uint64_t r = 1;
    for (std::uint64_t p : primes_) {
        if (r > UINT64_MAX / p) return std::nullopt;
        r *= p;
    }
    return r;
}

long double Modulus::totient_ratio() const {
    long double r = 1.0L;
    for (std::uint64_t p : primes_) r *= 1.0L - 1.0L / static_cast<long double>(p);
    return r;
}

std::string Modulus::label() const {
    if (primorial_index_) return "P#" + std::to_string(*primorial_index_);
    return std::to_string(*value_);
}

std::int64_t count_coprime_window(const Modulus& n, std::int64_t m, std::int64_t h) {
    if (h <= 0) return 0;
    std::vector<char> hit(static_cast<std::size_t>(h), 0);
    for (std::uint64_t up : n.primes()) {
        const auto p = static_cast<std::int64_t>(up);
        for (std::int64_t x = floor_mod(-m, p); x < h; x += p) hit[static_cast<std::size_t>(x)] = 1;
    }
    return h - std::count(hit.begin(), hit.end(), 1);
}

Rational G_enum(const CovParams& params) {
    require_windows(params, "G_enum");
    const CoprimeCounter c1(params.n1);
    const CoprimeCounter c2(params.n2);
    const std::int64_t g = std::gcd(c1.radical(), c2.radical());
    const std::int64_t period = c1.radical() / g * c2.radical();
    if (period > static_cast<std::int64_t>(kEnumPeriodLimit)) {
        throw ResourceLimitError("G_enum: joint period " + std::to_string(period) + " too large");
    }
    int128 sum = 0;
    for (std::int64_t m = 0; m < period; ++m) {
        sum += static_cast<int128>(c1.window(m, params.h1)) * c2.window(m + params.q, params.h2);
    }
    const Rational cross(static_cast<int128>(params.h1) * c1.phi() * params.h2 * c2.phi(),
                         static_cast<int128>(c1.radical()) * c2.radical());
    return Rational(sum, period) - cross;
}

long double Q_scale(const Modulus& n1, const Modulus& n2) {
    long double scale = 0.5L;
    for (std::uint64_t p : exclusive_primes(n1, n2)) {
        scale *= 1.0L - 1.0L / static_cast<long double>(p);
    }
    for (std::uint64_t p : common_odd_primes(n1, n2)) {
        scale *= 1.0L - 2.0L / static_cast<long double>(p);
    }
    return scale;
}

long double G_threesum(const CovParams& params) {
    require_windows(params, "G_threesum");
    require_even(params, "G_threesum");
    const std::int64_t h1 = params.h1;
    const std::int64_t h2 = params.h2;
    const std::int64_t q = params.q;
    // Even t in [q - h1 + 1, q + h2 - 1], stored as t = t0 + 2u.
    const std::int64_t lo = q - h1 + 1;
    const std::int64_t t0 = lo + floor_mod(lo, 2);
    const std::int64_t hi = q + h2 - 1;
    if (t0 > hi) return -static_cast<long double>(h1) * h2 * params.n1.totient_ratio() *
                        params.n2.totient_ratio();
    const auto n = static_cast<std::size_t>((hi - t0) / 2 + 1);
    thread_local std::vector<double> weight;
    weight.assign(n, 1.0);
    for (std::uint64_t up : common_odd_primes(params.n1, params.n2)) {
        const auto step = static_cast<std::int64_t>(up);
        const double factor = static_cast<double>(up - 1) / static_cast<double>(up - 2);
        // t = t0 + 2u is divisible by p iff u = -t0/2 mod p
        const auto first = static_cast<std::size_t>(floor_mod(-(t0 / 2), step));
        for (std::size_t u = first; u < n; u += up) weight[u] *= factor;
    }
    // Double blocks, combined in long double.
    CompensatedSum<long double> sum;
    std::size_t u = 0;
    while (u < n) {
        const std::size_t end = std::min(n, u + 4096);
        double block = 0.0;
        for (; u < end; ++u) {
            const std::int64_t s = t0 + 2 * static_cast<std::int64_t>(u) - q;
            block += static_cast<double>(pair_count(h1, h2, s)) * weight[u];
        }
        sum += block;
    }
    const long double cross =
        static_cast<long double>(h1) * h2 * params.n1.totient_ratio() * params.n2.totient_ratio();
    return Q_scale(params.n1, params.n2) * sum.value() - cross;
}

int gamma_plus(std::int64_t h, std::int64_t q, int128 d) {
    const int128 span = floor_mod128(h, d);
    const int128 r = floor_mod128(q, d);
    return r != 0 && d - r <= span ? 1 : 0;
}

int gamma_minus(std::int64_t h, std::int64_t q, int128 d) {
    const int128 span = floor_mod128(h, d);
    const int128 r = floor_mod128(q, d);
    return r >= 1 && r <= span ? 1 : 0;
}

Rational frac_one(std::int64_t q, std::int64_t d) {
    if (d < 1) throw std::invalid_argument("frac_one: d must be >= 1");
    const std::int64_t r = floor_mod(q, d);
    return r == 0 ? Rational(1) : Rational(r, d);
}

long double compact_B(std::int64_t h1, std::int64_t h2, std::int64_t q, int128 d) {
    const int128 D = 2 * d;
    const int128 a = floor_mod128(h1, D);                // D {h1/D}
    const int128 b = floor_mod128(h2 - h1 + 1, D);       // D {(h2-h1+1)/D}
    const int128 A = floor_mod128(q + h2 - h1, D);       // D {(q+h2-h1)/D}
    const int128 rq = floor_mod128(q, D);
    const int128 C = rq == 0 ? D : rq;                   // D {q/D}_1
    const int gp1 = gamma_plus(h2 - h1 + 1, q - 1, D);
    const int gp2 = gamma_plus(h1, q + h2 - h1, D);
    const int gm = gamma_minus(h1, q, D);
    // Everything but the first term is an integer of size O(h).
    const int128 whole = (static_cast<int128>(h1) - a) / D * (A - C) + gp1 * static_cast<int128>(h1) +
                         gp2 * (a - D + A) + gm * (a - C);
    const int128 small = static_cast<int128>(h1) * (1 - b) - a * a;
    return static_cast<long double>(small) / static_cast<long double>(D) +
           static_cast<long double>(whole);
}

long double G_compact(const CovParams& params) {
    require_windows(params, "G_compact");
    require_even(params, "G_compact");
    if (params.h1 > params.h2) {
        return G_compact(CovParams{params.n2, params.n1, params.h2, params.h1, -params.q});
    }
    const auto common = common_odd_primes(params.n1, params.n2);
    if (common.size() > kCompactMaxOmega) {
        throw ResourceLimitError("G_compact: too many common prime factors (" +
                                 std::to_string(common.size()) + ")");
    }
    CompensatedSum<long double> sum;
    const std::size_t subsets = std::size_t{1} << common.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        int128 d = 1;
        long double rho_d = 1.0L;
        for (std::size_t i = 0; i < common.size(); ++i) {
            if ((mask >> i) & 1U) {
                d *= common[i];
                rho_d *= static_cast<long double>(common[i] - 2);
            }
        }
        sum += compact_B(params.h1, params.h2, params.q, d) / rho_d;
    }
    return Q_scale(params.n1, params.n2) * sum.value();
}

long double G_value(const CovParams& params) {
    if (params.n1.is_even() && params.n2.is_even()) return G_threesum(params);
    return G_enum(params).to_long_double();
}

Rational Q_value(std::uint64_t n1, std::uint64_t n2) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("Q_value: moduli must be >= 1");
    const std::uint64_t g = std::gcd(n1, n2);
    Rational q(static_cast<int128>(n1) * n2, 2);
    for (std::uint64_t p : distinct_prime_factors((n1 / g) * (n2 / g))) {
        q *= Rational(static_cast<int128>(p - 1), p);
    }
    std::uint64_t odd = g;
    while (odd % 2 == 0) odd /= 2;
    for (std::uint64_t p : distinct_prime_factors(odd)) {
        q *= Rational(static_cast<int128>(p - 2), p);
    }
    return q;
}

std::int64_t rho(std::uint64_t d) {
    if (d < 1) throw std::invalid_argument("rho: d must be >= 1");
    std::int64_t r = 1;
    for (std::uint64_t p : distinct_prime_factors(d)) r *= static_cast<std::int64_t>(p) - 2;
    return r;
}

int mobius(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("mobius: n must be >= 1");
    int sign = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            sign = -sign;
        }
    }
    return n > 1 ? -sign : sign;
}

long double H_variance(const Modulus& n, std::int64_t h) {
    if (h < 1) throw std::invalid_argument("H_variance: h must be >= 1");
    if (!n.is_even()) return G_enum(CovParams{n, n, h, h, 0}).to_long_double();
    std::vector<std::uint64_t> odd(n.primes().begin() + 1, n.primes().end());
    if (odd.size() > 20) return G_threesum(CovParams{n, n, h, h, 0});
    long double prefactor = 1.0L;
    for (std::uint64_t p : odd) prefactor *= 1.0L - 2.0L / static_cast<long double>(p);
    CompensatedSum<long double> sum;
    const std::size_t subsets = std::size_t{1} << odd.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        int128 d = 1;
        long double rho_d = 1.0L;
        for (std::size_t i = 0; i < odd.size(); ++i) {
            if ((mask >> i) & 1U) {
                d *= odd[i];
                rho_d *= static_cast<long double>(odd[i] - 2);
            }
        }
        // d {h/2d} (1 - {h/2d}) = r/2 - r^2/(4d), r = h mod 2d
        const auto r = static_cast<long double>(floor_mod128(h, 2 * d));
        sum += (r / 2.0L - r * r / (4.0L * static_cast<long double>(d))) / rho_d;
    }
    return prefactor * sum.value();
}

std::int64_t separation(const PrimeTable& table, std::size_t i, std::size_t j, Separation sep) {
    if (i < 1 || j <= i) throw std::invalid_argument("separation: need 1 <= i < j");
    const Interval a = make_interval(table, i);
    const Interval b = make_interval(table, j);
    const std::uint64_t q = sep == Separation::end_to_end ? b.end() - a.end() : b.first() - a.first();
    return static_cast<std::int64_t>(q);
}

long double interval_covariance(const PrimeTable& table, std::size_t i, std::size_t j,
                                Separation sep) {
    const std::int64_t q = separation(table, i, j, sep);
    return G_threesum(CovParams{Modulus::primorial(i, table), Modulus::primorial(j, table),
                                static_cast<std::int64_t>(make_interval(table, i).length),
                                static_cast<std::int64_t>(make_interval(table, j).length), q});
}

std::vector<long double> kappa_theory(const PrimeTable& table, std::size_t K,
                                      std::size_t max_lag, Separation sep) {
    if (K < 1) throw std::invalid_argument("kappa_theory: K must be >= 1");
    if (!table.has_index(K + 1)) throw ResourceLimitError("kappa_theory: prime table too small", K);
    std::vector<long double> kappa(max_lag, 0.0L);
    for (std::size_t lag = 1; lag <= max_lag && lag < K; ++lag) {
        std::vector<long double> terms(K - lag);
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 1; i <= K - lag; ++i) {
            terms[i - 1] = interval_covariance(table, i, i + lag, sep);
        }
        CompensatedSum<long double> sum;
        for (long double t : terms) sum += t;
        kappa[lag - 1] = sum.value();
    }
    return kappa;
}

CovarianceSums covariance_sums(const PrimeTable& table, std::size_t K, Separation sep) {
    if (K < 1) throw std::invalid_argument("covariance_sums: K must be >= 1");
    if (K > kCovarianceMaxK) {
        throw ResourceLimitError("covariance_sums: K exceeds " + std::to_string(kCovarianceMaxK),
                                 K);
    }
    if (!table.has_index(K + 1)) {
        throw ResourceLimitError("covariance_sums: prime table too small", K);
    }
    CovarianceSums out;
    out.K = K;
    out.sep = sep;
    out.H.resize(K);
    // G for the pair (i, j), i < j, stored row by row over j.
    auto& pairs = out.pairs;
    pairs.assign(K * (K - 1) / 2, 0.0L);
    const auto pair_index = [](std::size_t i, std::size_t j) { return (j - 1) * (j - 2) / 2 + (i - 1); };
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 1; j <= K; ++j) {
        out.H[j - 1] = H_variance(Modulus::primorial(j, table),
                                  static_cast<std::int64_t>(make_interval(table, j).length));
        for (std::size_t i = 1; i < j; ++i) pairs[pair_index(i, j)] = interval_covariance(table, i, j, sep);
    }
    out.kappa.assign(K > 1 ? K - 1 : 0, 0.0L);
    for (std::size_t lag = 1; lag < K; ++lag) {
        CompensatedSum<long double> sum;
        for (std::size_t i = 1; i + lag <= K; ++i) sum += pairs[pair_index(i, i + lag)];
        out.kappa[lag - 1] = sum.value();
    }
    out.var_correlated.resize(K);
    out.var_uncorrelated.resize(K);
    CompensatedSum<long double> correlated, uncorrelated;
    for (std::size_t j = 1; j <= K; ++j) {
        uncorrelated += out.H[j - 1];
        correlated += out.H[j - 1];
        for (std::size_t i = 1; i < j; ++i) correlated += 2.0L * pairs[pair_index(i, j)];
        out.var_uncorrelated[j - 1] = uncorrelated.value();
        out.var_correlated[j - 1] = correlated.value();
    }
    return out;
}

long double CovarianceSums::kappa_at(std::size_t lag, std::size_t k) const {
    CompensatedSum<long double> sum;
    for (std::size_t i = 1; i + lag <= k; ++i) sum += pair(i, i + lag);
    return sum.value();
}

long double CovarianceSums::remainder(std::size_t d, std::size_t k) const {
    CompensatedSum<long double> sum;
    for (std::size_t j = d + 2; j <= k; ++j) {
        for (std::size_t i = 1; i + d < j; ++i) sum += pair(i, j);
    }
    return sum.value();
}

long double var_uncorrelated_theory(const PrimeTable& table, std::size_t K) {
    if (K < 1) throw std::invalid_argument("var_uncorrelated_theory: K must be >= 1");
    if (!table.has_index(K + 1)) {
        throw ResourceLimitError("var_uncorrelated_theory: prime table too small", K);
    }
    std::vector<long double> terms(K);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 1; j <= K; ++j) {
        terms[j - 1] = H_variance(Modulus::primorial(j, table),
                                  static_cast<std::int64_t>(make_interval(table, j).length));
    }
    CompensatedSum<long double> sum;
    for (long double t : terms) sum += t;
    return sum.value();
}

long double sigma_upper_bound(const PrimeTable& table, std::size_t K) {
    const Interval iv = make_interval(table, K);
    return std::sqrt(2.0L * std::exp(-kEulerGamma) * li_at(static_cast<long double>(iv.end())));
}

}  // namespace primesq
