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

#include "primesq/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "primesq/errors.hpp"
#include "primesq/interval_statistics.hpp"
#include "primesq/numeric.hpp"

namespace primesq {

namespace {

// Largest interval length a realization will mark.
constexpr std::uint64_t kMaxIntervalLength = std::uint64_t{1} << 30;

// Per-interval marks, cleared by bumping a generation stamp.
class MarkBuffer {
  public:
    void begin(std::size_t length) {
        if (length > stamps_.size()) stamps_.resize(length, 0);
        if (++generation_ == 0) {
            std::fill(stamps_.begin(), stamps_.end(), 0);
            generation_ = 1;
        }
        marked_ = 0;
    }
    void mark_progression(std::uint64_t first, std::uint64_t step, std::uint64_t length) {
        for (std::uint64_t x = first; x < length; x += step) {
            if (stamps_[x] != generation_) {
                stamps_[x] = generation_;
                ++marked_;
            }
        }
    }
    std::uint64_t marked() const { return marked_; }

  private:
    std::vector<std::uint32_t> stamps_;
    std::uint32_t generation_ = 0;
    std::uint64_t marked_ = 0;
};

void check_model_range(const PrimeTable& table, std::size_t K, const char* who) {
    if (K < 1) throw std::invalid_argument(std::string(who) + ": K must be >= 1");
    if (!table.has_index(K + 1)) {
        throw ResourceLimitError(std::string(who) + ": prime table lacks p_{K+1}", K);
    }
    for (std::size_t k = 1; k <= K; ++k) {
        if (make_interval(table, k).length > kMaxIntervalLength) {
            throw ResourceLimitError(std::string(who) + ": interval too long", k);
        }
    }
}

// Index inside s_j of the first n with (n + m) mod p == 0.
std::uint64_t first_hit(std::uint64_t lo, std::uint64_t m, std::uint64_t p) {
    const std::uint64_t r = (lo % p + m % p) % p;
    return r == 0 ? 0 : p - r;
}

template <typename OffsetFor>
RealizationSeries realize_translated(const PrimeTable& table, std::size_t K, ModelKind kind,
                                     std::uint64_t seed, OffsetFor&& offset_for) {
    RealizationSeries out{kind, K, std::vector<std::uint64_t>(K), seed};
    MarkBuffer buffer;
    for (std::size_t j = 1; j <= K; ++j) {
        const Interval iv = make_interval(table, j);
        buffer.begin(iv.length);
        for (std::size_t i = 1; i <= j; ++i) {
            const std::uint64_t p = table[i];
            buffer.mark_progression(first_hit(iv.first(), offset_for(i, j), p), p, iv.length);
        }
        out.counts[j - 1] = iv.length - buffer.marked();
    }
    return out;
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::correlated: return "correlated";
        case ModelKind::uncorrelated: return "uncorrelated";
        case ModelKind::constrained: return "constrained";
    }
    return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "correlated") return ModelKind::correlated;
    if (name == "uncorrelated") return ModelKind::uncorrelated;
    if (name == "constrained") return ModelKind::constrained;
    throw std::invalid_argument("unknown model kind '" + name + "'");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be >= 1");
    unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<unsigned __int128>(engine_()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    while (u == 0.0) u = uniform();
    const double v = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * std::numbers::pi * v;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

OffsetAssignment draw_offsets(const PrimeTable& table, std::size_t K, std::uint64_t seed) {
    if (!table.has_index(K)) throw ResourceLimitError("draw_offsets: prime table too small", K);
    Rng rng(seed);
    OffsetAssignment out{K, std::vector<std::uint64_t>(K), seed};
    for (std::size_t j = 1; j <= K; ++j) out.offsets[j - 1] = rng.below(table[j]);
    return out;
}

RealizationSeries realize_correlated(const PrimeTable& table, std::size_t K, std::uint64_t seed) {
    check_model_range(table, K, "realize_correlated");
    const OffsetAssignment offsets = draw_offsets(table, K, seed);
    return realize_translated(table, K, ModelKind::correlated, seed,
                              [&](std::size_t i, std::size_t) { return offsets.offsets[i - 1]; });
}

RealizationSeries realize_with_offsets(const PrimeTable& table, std::size_t K,
                                       std::span<const std::uint64_t> offsets) {
    check_model_range(table, K, "realize_with_offsets");
    if (offsets.size() < K) throw std::invalid_argument("realize_with_offsets: need K offsets");
    return realize_translated(table, K, ModelKind::correlated, 0,
                              [&](std::size_t i, std::size_t) { return offsets[i - 1]; });
}

RealizationSeries realize_uncorrelated(const PrimeTable& table, std::size_t K,
                                       std::uint64_t seed) {
    check_model_range(table, K, "realize_uncorrelated");
    Rng rng(seed);
    std::vector<std::uint64_t> offsets(K);
    std::size_t current = 0;
    return realize_translated(table, K, ModelKind::uncorrelated, seed,
                              [&](std::size_t i, std::size_t j) {
                                  if (current != j) {
                                      for (std::size_t t = 1; t <= j; ++t) {
                                          offsets[t - 1] = rng.below(table[t]);
                                      }
                                      current = j;
                                  }
                                  return offsets[i - 1];
                              });
}

RealizationSeries realize_constrained(const PrimeTable& table, std::size_t K,
                                      std::uint64_t seed) {
    check_model_range(table, K, "realize_constrained");
    Rng rng(seed);
    RealizationSeries out{ModelKind::constrained, K, std::vector<std::uint64_t>(K), seed};
    MarkBuffer buffer;
    for (std::size_t k = 1; k <= K; ++k) {
        const Interval iv = make_interval(table, k);
        buffer.begin(iv.length);
        for (std::size_t i = 1; i <= k; ++i) {
            const std::uint64_t p = table[i];
            std::uint64_t position = 1;
            if (i < k) {
                // x^2 mod p is uniform over the nonzero quadratic residues.
                const std::uint64_t x = p == 2 ? 1 : 1 + rng.below(p - 1);
                position = p - (x * x) % p + 1;
            }
            buffer.mark_progression(position - 1, p, iv.length);
        }
        out.counts[k - 1] = iv.length - buffer.marked();
    }
    return out;
}

RealizationSeries realize(const PrimeTable& table, ModelKind kind, std::size_t K,
                          std::uint64_t seed) {
    switch (kind) {
        case ModelKind::correlated: return realize_correlated(table, K, seed);
        case ModelKind::uncorrelated: return realize_uncorrelated(table, K, seed);
        case ModelKind::constrained: return realize_constrained(table, K, seed);
    }
    throw std::invalid_argument("realize: unknown model kind");
}

std::vector<RealizationSeries> run_ensemble(const PrimeTable& table, ModelKind kind,
                                            std::size_t K, std::size_t realizations,
                                            std::uint64_t master_seed) {
    if (realizations < 1) throw std::invalid_argument("run_ensemble: realizations must be >= 1");
    check_model_range(table, K, "run_ensemble");
    std::vector<RealizationSeries> out(realizations);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t r = 0; r < realizations; ++r) {
        out[r] = realize(table, kind, K, derive_seed(master_seed, r));
    }
    return out;
}

std::vector<long double> mean_corrected(const RealizationSeries& series) {
    const long double factor = std::exp(kEulerGamma) / 2.0L;
    std::vector<long double> out(series.counts.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = factor * static_cast<long double>(series.counts[j]);
    }
    return out;
}

long double LagProfile::remainder(std::size_t d, std::size_t k) const {
    if (d > max_lag) throw std::invalid_argument("LagProfile::remainder: d exceeds max_lag");
    long double r = pair_sum(k);
    for (std::size_t lag = 1; lag <= d; ++lag) r -= kappa_at(lag, k);
    return r;
}

LagProfile lag_profile(std::span<const long double> eps, std::size_t max_lag) {
    const std::size_t K = eps.size();
    LagProfile p{K, max_lag, std::vector<long double>(K * max_lag, 0.0L),
                 std::vector<long double>(K), std::vector<long double>(K)};
    std::vector<CompensatedSum<long double>> lags(max_lag);
    CompensatedSum<long double> sum, squares;
    for (std::size_t k = 1; k <= K; ++k) {
        const long double e = eps[k - 1];
        for (std::size_t lag = 1; lag <= max_lag && lag < k; ++lag) lags[lag - 1] += eps[k - 1 - lag] * e;
        for (std::size_t lag = 1; lag <= max_lag; ++lag) {
            p.kappa[(k - 1) * max_lag + lag - 1] = lags[lag - 1].value();
        }
        sum += e;
        squares += e * e;
        p.square_of_sum[k - 1] = sum.value() * sum.value();
        p.sum_of_squares[k - 1] = squares.value();
    }
    return p;
}

EnsembleStats ensemble_stats(std::span<const RealizationSeries> series,
                             std::span<const long double> tilde_pi, std::size_t max_lag) {
    if (series.empty()) throw std::invalid_argument("ensemble_stats: empty ensemble");
    const std::size_t K = series.front().K;
    for (const auto& s : series) {
        if (s.K != K || s.counts.size() != K || s.model != series.front().model) {
            throw std::invalid_argument("ensemble_stats: series differ in model or K");
        }
    }
    if (tilde_pi.size() < K) throw std::invalid_argument("ensemble_stats: tilde_pi too short");
    const std::size_t n = series.size();
    const auto nd = static_cast<long double>(n);

    EnsembleStats st;
    st.K = K;
    st.realizations = n;
    st.mean.assign(K, 0.0L);
    st.variance.assign(K, 0.0L);
    st.kappa_stderr.assign(max_lag, 0.0L);

    std::vector<CompensatedSum<long double>> kappa(K * max_lag), square_of_sum(K), sum_of_squares(K);
    std::vector<long double> final_lags(n * max_lag);
    std::vector<long double> totals(n);
    std::vector<long double> eps(K);
    for (std::size_t r = 0; r < n; ++r) {
        CompensatedSum<long double> total;
        for (std::size_t j = 0; j < K; ++j) {
            eps[j] = static_cast<long double>(series[r].counts[j]) - tilde_pi[j];
            total += static_cast<long double>(series[r].counts[j]);
        }
        totals[r] = total.value();
        const LagProfile p = lag_profile(eps, max_lag);
        for (std::size_t i = 0; i < K * max_lag; ++i) kappa[i] += p.kappa[i];
        for (std::size_t j = 0; j < K; ++j) {
            square_of_sum[j] += p.square_of_sum[j];
            sum_of_squares[j] += p.sum_of_squares[j];
        }
        for (std::size_t lag = 1; lag <= max_lag; ++lag) {
            final_lags[r * max_lag + lag - 1] = p.kappa_at(lag, K);
        }
    }
    st.profile.K = K;
    st.profile.max_lag = max_lag;
    st.profile.kappa.resize(K * max_lag);
    st.profile.square_of_sum.resize(K);
    st.profile.sum_of_squares.resize(K);
    for (std::size_t i = 0; i < K * max_lag; ++i) st.profile.kappa[i] = kappa[i].value() / nd;
    for (std::size_t j = 0; j < K; ++j) {
        st.profile.square_of_sum[j] = square_of_sum[j].value() / nd;
        st.profile.sum_of_squares[j] = sum_of_squares[j].value() / nd;
    }

    const auto sample_variance = [&](auto&& value_at) {
        CompensatedSum<long double> s;
        for (std::size_t r = 0; r < n; ++r) s += value_at(r);
        const long double m = s.value() / nd;
        CompensatedSum<long double> ss;
        for (std::size_t r = 0; r < n; ++r) {
            const long double d = value_at(r) - m;
            ss += d * d;
        }
        return std::pair{m, n > 1 ? ss.value() / (nd - 1.0L) : 0.0L};
    };
    for (std::size_t j = 0; j < K; ++j) {
        const auto [m, v] =
            sample_variance([&](std::size_t r) { return static_cast<long double>(series[r].counts[j]); });
        st.mean[j] = m;
        st.variance[j] = v;
    }
    for (std::size_t lag = 0; lag < max_lag; ++lag) {
        const auto [m, v] =
            sample_variance([&](std::size_t r) { return final_lags[r * max_lag + lag]; });
        (void)m;
        st.kappa_stderr[lag] = std::sqrt(v / nd);
    }
    st.sum_variance = sample_variance([&](std::size_t r) { return totals[r]; }).second;
    return st;
}

}  // namespace primesq
