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

// Random models for the interval counts: translated residue sequences with
// offsets shared across intervals (correlated) or redrawn per interval
// (uncorrelated), and the constrained first-appearance model.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "primesq/prime_engine.hpp"

namespace primesq {

enum class ModelKind { correlated, uncorrelated, constrained };

std::string to_string(ModelKind kind);
// Throws std::invalid_argument for unknown names.
ModelKind parse_model_kind(const std::string& name);

// SplitMix64 finalizer applied to master + (index + 1) * golden ratio.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// mt19937_64 with explicit bounded-integer (Lemire) and normal
// (Box–Muller) transforms, so draws are identical on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform on [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound);
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct OffsetAssignment {
    std::size_t K = 0;
    std::vector<std::uint64_t> offsets;  // m_j in [0, p_j), j = 1..K
    std::uint64_t seed = 0;
};

OffsetAssignment draw_offsets(const PrimeTable& table, std::size_t K, std::uint64_t seed);

struct RealizationSeries {
    ModelKind model = ModelKind::correlated;
    std::size_t K = 0;
    std::vector<std::uint64_t> counts;  // counts[j-1] for interval j
    std::uint64_t seed = 0;
};

// Correlated model: offsets drawn once from `seed` and shared by all
// intervals; counts[j] = #{n in s_j : (n + m_i) mod p_i != 0 for all i <= j}.
RealizationSeries realize_correlated(const PrimeTable& table, std::size_t K, std::uint64_t seed);
// Correlated model with caller-supplied offsets (any non-negative values,
// reduced modulo p_i). All-zero offsets give the exact prime counts.
RealizationSeries realize_with_offsets(const PrimeTable& table, std::size_t K,
                                       std::span<const std::uint64_t> offsets);
// Offsets redrawn for every interval.
RealizationSeries realize_uncorrelated(const PrimeTable& table, std::size_t K, std::uint64_t seed);
// First multiple of p_i (i < k) inside s_k at a uniformly drawn candidate
// of qr_first_positions(p_i), later multiples every p_i; p_k starts at 1.
RealizationSeries realize_constrained(const PrimeTable& table, std::size_t K, std::uint64_t seed);

RealizationSeries realize(const PrimeTable& table, ModelKind kind, std::size_t K,
                          std::uint64_t seed);

// `realizations` series with seeds derive_seed(master_seed, r), in order of
// r and independent of the thread count.
std::vector<RealizationSeries> run_ensemble(const PrimeTable& table, ModelKind kind,
                                            std::size_t K, std::size_t realizations,
                                            std::uint64_t master_seed);

// counts scaled by e^gamma / 2.
std::vector<long double> mean_corrected(const RealizationSeries& series);

// Lag sums of one error sequence eps_1..eps_K, for every prefix k.
struct LagProfile {
    std::size_t K = 0;
    std::size_t max_lag = 0;
    // kappa(j; k) = sum_{i=1}^{k-j} eps_i eps_{i+j}, at [(k-1) * max_lag + j - 1].
    std::vector<long double> kappa;
    std::vector<long double> square_of_sum;  // (sum_{j<=k} eps_j)^2
    std::vector<long double> sum_of_squares;  // sum_{j<=k} eps_j^2

    long double kappa_at(std::size_t lag, std::size_t k) const {
        return kappa[(k - 1) * max_lag + lag - 1];
    }
    // sum_{i<j<=k} eps_i eps_j, the sum of kappa over every lag.
    long double pair_sum(std::size_t k) const {
        return (square_of_sum[k - 1] - sum_of_squares[k - 1]) / 2.0L;
    }
    // sum_{j>d} kappa(j; k).
    long double remainder(std::size_t d, std::size_t k) const;
};

LagProfile lag_profile(std::span<const long double> eps, std::size_t max_lag);

struct EnsembleStats {
    std::size_t K = 0;
    std::size_t realizations = 0;
    std::vector<long double> mean;      // per interval
    std::vector<long double> variance;  // per interval, unbiased (0 for one realization)
    // Ensemble means of the lag profiles of eps = count - tilde_pi; the
    // remainder is only meaningful for d <= max_lag.
    LagProfile profile;
    // Standard error of kappa(j; K), j = 1..max_lag.
    std::vector<long double> kappa_stderr;
    // Unbiased sample variance of sum_{j<=K} counts.
    long double sum_variance = 0;
};

// Throws std::invalid_argument for an empty or inconsistent collection.
EnsembleStats ensemble_stats(std::span<const RealizationSeries> series,
                             std::span<const long double> tilde_pi, std::size_t max_lag);

}  // namespace primesq
