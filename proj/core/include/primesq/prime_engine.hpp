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

// Prime generation, the intervals s_k = [p_k^2, p_{k+1}^2) and exact prime
// counts over them.
//
// Interval indices are 1-based throughout the public API: p_1 = 2, and
// interval k spans [p_k^2, p_{k+1}^2 - 1]. Sequences indexed by k are
// returned as std::vector with element k-1 holding the value for k.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace primesq {

// Largest value a sieve may reach by default (p_{K+1}^2 for K ~ 10^6).
inline constexpr std::uint64_t kDefaultSieveCapacity = 400'000'000'000'000ULL;

struct SieveOptions {
    // Bytes of wheel-30 flags per segment; each byte covers 30 integers.
    std::size_t segment_bytes = 128 * 1024;
    // Upper bound on any value to be sieved; exceeded -> ResourceLimitError.
    std::uint64_t capacity = kDefaultSieveCapacity;
};

// Immutable, ordered table of all primes up to `limit`.
class PrimeTable {
  public:
    // All primes <= limit. Throws std::invalid_argument for limit < 2.
    static PrimeTable up_to(std::uint64_t limit);
    // Smallest table holding at least `count` primes.
    static PrimeTable with_count(std::size_t count);

    std::uint64_t limit() const { return limit_; }
    std::size_t size() const { return primes_.size(); }

    // p_k, 1-based; std::out_of_range when k is 0 or beyond the table.
    std::uint64_t at(std::size_t k) const;
    std::uint64_t operator[](std::size_t k) const { return primes_[k - 1]; }
    bool has_index(std::size_t k) const { return k >= 1 && k <= primes_.size(); }

    // Zero-based view of the stored primes.
    std::span<const std::uint64_t> primes() const { return primes_; }
    // First `k` primes (p_1..p_k).
    std::span<const std::uint64_t> first(std::size_t k) const;

    // pi(x) for x <= limit().
    std::size_t count_up_to(std::uint64_t x) const;
    bool is_prime(std::uint64_t n) const;

  private:
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
        : limit_(limit), primes_(std::move(primes)) {}

    std::uint64_t limit_;
    std::vector<std::uint64_t> primes_;
};

PrimeTable sieve_primes(std::uint64_t limit);

// One interval s_k between consecutive squared primes.
struct Interval {
    std::size_t k = 0;
    std::uint64_t p_lo = 0;    // p_k
    std::uint64_t p_hi = 0;    // p_{k+1}
    std::uint64_t gap = 0;     // p_{k+1} - p_k
    std::uint64_t length = 0;  // p_{k+1}^2 - p_k^2
    std::optional<std::uint64_t> count;

    std::uint64_t first() const { return p_lo * p_lo; }
    // One past the last element, p_{k+1}^2.
    std::uint64_t end() const { return p_hi * p_hi; }
};

// Throws std::out_of_range when the table lacks p_{k+1}.
Interval make_interval(const PrimeTable& table, std::size_t k);

// Exact pi_k by segmented sieving of [p_k^2, p_{k+1}^2) with primes <= p_k.
std::uint64_t count_interval(const PrimeTable& table, const Interval& interval,
                             const SieveOptions& options = {});

// Number of primes in [lo, hi), sieving with every prime <= sieve_bound.
// The count is exact whenever sieve_bound >= isqrt(hi - 1); the table must
// reach sieve_bound.
std::uint64_t count_primes_in_range(const PrimeTable& table, std::uint64_t lo,
                                    std::uint64_t hi, std::uint64_t sieve_bound,
                                    const SieveOptions& options = {});

// pi_k for k = 1..K, streamed interval by interval; memory is bounded by
// the segment size. Parallel over contiguous blocks of intervals, with
// results independent of the thread count.
std::vector<std::uint64_t> interval_counts(const PrimeTable& table, std::size_t K,
                                           const SieveOptions& options = {});

// pi(p_{k+1}^2) for k = 1..K.
std::vector<std::uint64_t> cumulative_pi(const PrimeTable& table, std::size_t K,
                                         const SieveOptions& options = {});

// Candidate 1-based positions inside s_k of the first multiple of p:
// { p - m + 1 : m a nonzero quadratic residue mod p }, sorted ascending.
std::vector<std::uint64_t> qr_first_positions(std::uint64_t p);

}  // namespace primesq
