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

#include "primesq/prime_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "primesq/errors.hpp"
#include "primesq/numeric.hpp"

namespace primesq {

namespace {

// Wheel-30 layout: byte b holds the eight integers 30b + r, r coprime to 30.
constexpr std::array<std::uint8_t, 8> kResidues{1, 7, 11, 13, 17, 19, 23, 29};

constexpr std::array<std::uint8_t, 30> kBitOf = [] {
    std::array<std::uint8_t, 30> bits{};
    bits.fill(0);
    for (std::size_t i = 0; i < kResidues.size(); ++i) {
        bits[kResidues[i]] = static_cast<std::uint8_t>(1u << i);
    }
    return bits;
}();

// Bits whose residue is < r, for r in [0, 30].
constexpr std::array<std::uint8_t, 31> kMaskBelow = [] {
    std::array<std::uint8_t, 31> masks{};
    for (std::size_t r = 0; r <= 30; ++r) {
        std::uint8_t m = 0;
        for (std::size_t i = 0; i < kResidues.size(); ++i) {
            if (kResidues[i] < r) m = static_cast<std::uint8_t>(m | (1u << i));
        }
        masks[r] = m;
    }
    return masks;
}();

// Distance from m to the next multiplier coprime to 30 (0 if m already is).
constexpr std::array<std::uint8_t, 30> kToCoprime = [] {
    std::array<std::uint8_t, 30> d{};
    for (std::size_t r = 0; r < 30; ++r) {
        std::uint8_t step = 0;
        while (kBitOf[(r + step) % 30] == 0) ++step;
        d[r] = step;
    }
    return d;
}();

// Flags for multiples of 7, 11, 13, 17, 19; period 7*11*13*17*19 bytes.
constexpr std::uint64_t kPresievePeriod = 7ULL * 11 * 13 * 17 * 19;
constexpr std::uint64_t kLargestPresieved = 19;

const std::vector<std::uint8_t>& presieve_pattern() {
    static const std::vector<std::uint8_t> pattern = [] {
        std::vector<std::uint8_t> bytes(kPresievePeriod, 0);
        for (std::uint64_t p : {7ULL, 11ULL, 13ULL, 17ULL, 19ULL}) {
            for (std::uint64_t v = p; v < 30 * kPresievePeriod; v += 2 * p) {
                bytes[v / 30] |= kBitOf[v % 30];
            }
        }
        return bytes;
    }();
    return pattern;
}

void apply_presieve(std::uint8_t* buf, std::uint64_t seg, std::size_t len) {
    const auto& pattern = presieve_pattern();
    std::size_t offset = static_cast<std::size_t>(seg % kPresievePeriod);
    std::size_t done = 0;
    while (done < len) {
        const std::size_t n = std::min(len - done, pattern.size() - offset);
        std::memcpy(buf + done, pattern.data() + offset, n);
        done += n;
        offset = 0;
    }
    if (seg == 0) {
        // 1 is not prime; the presieved primes themselves are.
        buf[0] = static_cast<std::uint8_t>(kBitOf[1]);
    }
}

std::uint64_t count_wheel_primes(std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t n = 0;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
        if (p >= lo && p < hi) ++n;
    }
    return n;
}

// Segmented wheel-30 sieve of one contiguous range, counting primes between
// consecutive boundaries. Each sieving prime p >= 23 contributes eight
// arithmetic progressions of stride p bytes, one per wheel residue.
class RangeSieve {
  public:
    RangeSieve(std::span<const std::uint64_t> sieving_primes, std::size_t segment_bytes)
        : primes_(sieving_primes),
          segment_bytes_(std::max<std::size_t>(segment_bytes, 64)),
          next_(8 * sieving_primes.size()),
          mask_(8 * sieving_primes.size()) {}

    // out[i] = number of primes in [bounds[i], bounds[i+1]).
    void count(std::span<const std::uint64_t> bounds, std::span<std::uint64_t> out) {
        const std::uint64_t lo = bounds.front();
        const std::uint64_t hi = bounds.back();
        std::fill(out.begin(), out.end(), 0);
        if (hi <= lo) return;

        for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
            out[i] = count_wheel_primes(bounds[i], bounds[i + 1]);
        }

        const std::uint64_t byte_lo = lo / 30;
        const std::uint64_t byte_hi = (hi + 29) / 30;
        std::vector<std::uint8_t> buf(segment_bytes_);
        std::size_t active = 0;
        std::size_t piece = 0;
        start_ = lo;

        for (std::uint64_t seg = byte_lo; seg < byte_hi; seg += segment_bytes_) {
            const std::uint64_t seg_end = std::min<std::uint64_t>(seg + segment_bytes_, byte_hi);
            const std::size_t len = static_cast<std::size_t>(seg_end - seg);
            apply_presieve(buf.data(), seg, len);

            const std::uint64_t seg_end_value = seg_end * 30;
            while (active < primes_.size() && primes_[active] * primes_[active] < seg_end_value) {
                activate(active);
                ++active;
            }
            for (std::size_t j = 0; j < active; ++j) {
                cross_off(j, buf.data(), seg, len);
            }

            const std::uint64_t seg_lo_value = seg * 30;
            while (piece + 1 < bounds.size()) {
                const std::uint64_t a = std::max(bounds[piece], seg_lo_value);
                const std::uint64_t b = std::min(bounds[piece + 1], seg_end_value);
                if (a < b) out[piece] += count_unmarked(buf.data(), seg, seg_end, a, b);
                if (bounds[piece + 1] <= seg_end_value) {
                    ++piece;
                } else {
                    break;
                }
            }
        }
    }

  private:
    void activate(std::size_t j) {
        const std::uint64_t p = primes_[j];
        const std::uint64_t start = std::max(p * p, start_);
        std::uint64_t m = (start + p - 1) / p;
        m += kToCoprime[m % 30];
        for (int c = 0; c < 8; ++c) {
            const std::uint64_t value = p * m;
            next_[8 * j + c] = value / 30;
            mask_[8 * j + c] = kBitOf[value % 30];
            ++m;
            m += kToCoprime[m % 30];
        }
    }

    void cross_off(std::size_t j, std::uint8_t* buf, std::uint64_t seg, std::size_t len) {
        const std::size_t p = static_cast<std::size_t>(primes_[j]);
        std::uint64_t* const state = &next_[8 * j];
        const std::uint8_t* const mask = &mask_[8 * j];
        // Segment-relative copies; stores through buf may alias the members.
        std::array<std::size_t, 8> next;
        for (int c = 0; c < 8; ++c) next[c] = static_cast<std::size_t>(state[c] - seg);
        std::array<std::uint8_t, 8> bits;
        std::memcpy(bits.data(), mask, bits.size());
        // All eight progressions step together while the furthest is inside.
        for (std::size_t furthest = *std::max_element(next.begin(), next.end()); furthest < len;
             furthest += p) {
            for (int c = 0; c < 8; ++c) {
                buf[next[c]] |= bits[c];
                next[c] += p;
            }
        }
        for (int c = 0; c < 8; ++c) {
            std::size_t b = next[c];
            for (; b < len; b += p) buf[b] |= bits[c];
            state[c] = seg + b;
        }
    }

    // Unmarked candidates in [a, b), both inside the segment's value range.
    static std::uint64_t count_unmarked(const std::uint8_t* buf, std::uint64_t seg,
                                        std::uint64_t seg_end, std::uint64_t a,
                                        std::uint64_t b) {
        const std::uint64_t ba = a / 30;
        const std::uint64_t bb = b / 30;
        const auto at = [&](std::uint64_t byte) {
            return static_cast<std::uint8_t>(~buf[byte - seg]);
        };
        const auto mask_from = [](std::uint64_t r) {
            return static_cast<std::uint8_t>(~kMaskBelow[r]);
        };
        if (ba == bb) {
            return std::popcount(static_cast<unsigned>(
                at(ba) & mask_from(a % 30) & kMaskBelow[b % 30]));
        }
        std::uint64_t n = std::popcount(static_cast<unsigned>(at(ba) & mask_from(a % 30)));
        std::uint64_t byte = ba + 1;
        std::uint64_t marked = 0;
        for (; byte + 8 <= bb; byte += 8) {
            std::uint64_t word;
            std::memcpy(&word, buf + (byte - seg), sizeof(word));
            marked += std::popcount(word);
        }
        for (; byte < bb; ++byte) marked += std::popcount(static_cast<unsigned>(buf[byte - seg]));
        n += 8 * (bb - ba - 1) - marked;
        if (b % 30 != 0 && bb < seg_end) {
            n += std::popcount(static_cast<unsigned>(at(bb) & kMaskBelow[b % 30]));
        }
        return n;
    }

    std::span<const std::uint64_t> primes_;
    std::size_t segment_bytes_;
    std::vector<std::uint64_t> next_;
    std::vector<std::uint8_t> mask_;
    std::uint64_t start_ = 0;
};

// Sieving primes above the presieved ones that are <= bound. Primes up to 19
// are always applied through the presieve pattern; they only ever mark
// composites, so counts stay exact for any bound >= isqrt(hi - 1).
std::span<const std::uint64_t> wheel_sieving_primes(const PrimeTable& table,
                                                    std::uint64_t bound) {
    const auto all = table.primes();
    const auto first = std::upper_bound(all.begin(), all.end(), kLargestPresieved);
    const auto last = std::upper_bound(first, all.end(), bound);
    return {first, last};
}

std::uint64_t checked_square(const PrimeTable& table, std::size_t k,
                             const SieveOptions& options, std::size_t report_k) {
    if (!table.has_index(k)) {
        throw ResourceLimitError("prime table too small: p_" + std::to_string(k) +
                                     " is beyond limit " + std::to_string(table.limit()),
                                 report_k);
    }
    const std::uint64_t sq = checked_mul(table[k], table[k]);
    if (sq > options.capacity) {
        throw ResourceLimitError("sieve capacity exceeded at k=" + std::to_string(report_k) +
                                     " (p^2 = " + std::to_string(sq) + ")",
                                 report_k);
    }
    return sq;
}

}  // namespace

PrimeTable PrimeTable::up_to(std::uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("sieve_primes: limit must be >= 2");
    if (limit > (1ULL << 36)) {
        throw ResourceLimitError("sieve_primes: table limit too large: " + std::to_string(limit));
    }
    // Odd-only flags; index i stands for 2i + 1.
    const std::size_t n = static_cast<std::size_t>((limit - 1) / 2 + 1);
    std::vector<bool> composite(n, false);
    composite[0] = true;
    for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        for (std::uint64_t j = (p * p) / 2; j < n; j += p) composite[j] = true;
    }
    std::vector<std::uint64_t> primes;
    if (limit >= 20) primes.reserve(static_cast<std::size_t>(1.3 * limit / std::log(limit)));
    primes.push_back(2);
    for (std::size_t i = 1; i < n; ++i) {
        if (!composite[i]) primes.push_back(2 * i + 1);
    }
    return PrimeTable(limit, std::move(primes));
}

PrimeTable PrimeTable::with_count(std::size_t count) {
    if (count <= 6) return up_to(13);
    // Rosser–Schoenfeld: p_n < n (log n + log log n) for n >= 6.
    const double n = static_cast<double>(count);
    const auto limit = static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 1;
    return up_to(limit);
}

std::uint64_t PrimeTable::at(std::size_t k) const {
    if (!has_index(k)) {
        throw std::out_of_range("prime index " + std::to_string(k) + " outside table of " +
                                std::to_string(primes_.size()) + " primes");
    }
    return primes_[k - 1];
}

std::span<const std::uint64_t> PrimeTable::first(std::size_t k) const {
    if (k > primes_.size()) {
        throw std::out_of_range("PrimeTable::first: " + std::to_string(k) + " primes requested");
    }
    return std::span<const std::uint64_t>(primes_).first(k);
}

std::size_t PrimeTable::count_up_to(std::uint64_t x) const {
    if (x > limit_) throw std::out_of_range("count_up_to beyond table limit");
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) -
                                    primes_.begin());
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    if (n > limit_) throw std::out_of_range("is_prime beyond table limit");
    return std::binary_search(primes_.begin(), primes_.end(), n);
}

PrimeTable sieve_primes(std::uint64_t limit) { return PrimeTable::up_to(limit); }

Interval make_interval(const PrimeTable& table, std::size_t k) {
    if (k < 1 || !table.has_index(k + 1)) {
        throw std::out_of_range("interval index " + std::to_string(k) +
                                " needs p_{k+1} in a table of " + std::to_string(table.size()) +
                                " primes");
    }
    Interval iv;
    iv.k = k;
    iv.p_lo = table[k];
    iv.p_hi = table[k + 1];
    iv.gap = iv.p_hi - iv.p_lo;
    iv.length = checked_mul(iv.p_hi, iv.p_hi) - iv.p_lo * iv.p_lo;
    return iv;
}

std::uint64_t count_primes_in_range(const PrimeTable& table, std::uint64_t lo, std::uint64_t hi,
                                    std::uint64_t sieve_bound, const SieveOptions& options) {
    if (hi <= lo) return 0;
    if (hi > options.capacity) {
        throw ResourceLimitError("sieve capacity exceeded: " + std::to_string(hi));
    }
    if (sieve_bound > table.limit()) {
        throw std::out_of_range("sieve bound " + std::to_string(sieve_bound) +
                                " beyond prime table limit");
    }
    RangeSieve sieve(wheel_sieving_primes(table, sieve_bound), options.segment_bytes);
    const std::array<std::uint64_t, 2> bounds{lo, hi};
    std::array<std::uint64_t, 1> out{};
    sieve.count(bounds, out);
    return out[0];
}

std::uint64_t count_interval(const PrimeTable& table, const Interval& interval,
                             const SieveOptions& options) {
    if (interval.k < 1 || interval.p_hi <= interval.p_lo || table.at(interval.k) != interval.p_lo) {
        throw std::invalid_argument("count_interval: interval does not match the prime table");
    }
    return count_primes_in_range(table, interval.first(), interval.end(), interval.p_lo, options);
}

std::vector<std::uint64_t> interval_counts(const PrimeTable& table, std::size_t K,
                                           const SieveOptions& options) {
    if (K < 1) throw std::invalid_argument("interval_counts: K must be >= 1");
    // bounds[i] = p_{i+1}^2, i = 0..K
    std::vector<std::uint64_t> bounds(K + 1);
    for (std::size_t k = 1; k <= K + 1; ++k) {
        bounds[k - 1] = checked_square(table, k, options, k == 1 ? 1 : k - 1);
    }
    const auto sieving = wheel_sieving_primes(table, table.at(K));

    std::vector<std::uint64_t> counts(K, 0);
    // Contiguous blocks of intervals with roughly equal numeric span.
    const int threads = omp_get_max_threads();
    const std::size_t target_blocks = std::min<std::size_t>(K, static_cast<std::size_t>(threads) * 4);
    std::vector<std::size_t> block_start{0};
    const long double span = static_cast<long double>(bounds[K] - bounds[0]);
    for (std::size_t b = 1; b < target_blocks; ++b) {
        const auto goal = bounds[0] + static_cast<std::uint64_t>(span * b / target_blocks);
        const auto it = std::lower_bound(bounds.begin(), bounds.end() - 1, goal);
        const auto idx = static_cast<std::size_t>(it - bounds.begin());
        if (idx > block_start.back() && idx < K) block_start.push_back(idx);
    }
    block_start.push_back(K);
    const auto nblocks = static_cast<std::ptrdiff_t>(block_start.size() - 1);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
        const std::size_t first = block_start[static_cast<std::size_t>(b)];
        const std::size_t last = block_start[static_cast<std::size_t>(b) + 1];
        RangeSieve sieve(sieving, options.segment_bytes);
        sieve.count(std::span<const std::uint64_t>(bounds).subspan(first, last - first + 1),
                    std::span<std::uint64_t>(counts).subspan(first, last - first));
    }
    return counts;
}

std::vector<std::uint64_t> cumulative_pi(const PrimeTable& table, std::size_t K,
                                         const SieveOptions& options) {
    auto counts = interval_counts(table, K, options);
    std::uint64_t running = 2;  // pi(4)
    for (auto& c : counts) {
        running += c;
        c = running;
    }
    return counts;
}

std::vector<std::uint64_t> qr_first_positions(std::uint64_t p) {
    if (p < 2 || p > (1ULL << 32)) throw std::invalid_argument("qr_first_positions: bad p");
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) {
            throw std::invalid_argument("qr_first_positions: " + std::to_string(p) +
                                        " is not prime");
        }
    }
    std::vector<bool> residue(p, false);
    for (std::uint64_t n = 1; n < p; ++n) residue[(n * n) % p] = true;
    std::vector<std::uint64_t> positions;
    for (std::uint64_t m = 1; m < p; ++m) {
        if (residue[m]) positions.push_back(p - m + 1);
    }
    std::sort(positions.begin(), positions.end());
    return positions;
}

}  // namespace primesq
