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

// Small numeric building blocks shared by the modules: compensated
// accumulation, an exact 128-bit rational, and integer helpers.

#include <compare>
#include <cstdint>
#include <string>

namespace primesq {

// Neumaier's variant of Kahan summation.
template <typename T>
class CompensatedSum {
  public:
    CompensatedSum() = default;
    explicit CompensatedSum(T initial) : sum_(initial) {}

    CompensatedSum& operator+=(T value) {
        const T t = sum_ + value;
        if ((sum_ >= 0 ? sum_ : -sum_) >= (value >= 0 ? value : -value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
        return *this;
    }
    CompensatedSum& operator-=(T value) { return *this += -value; }

    T value() const { return sum_ + compensation_; }

  private:
    T sum_{0};
    T compensation_{0};
};

using int128 = __int128;

// Exact rational with 128-bit numerator/denominator, always normalized
// (den > 0, gcd(num, den) = 1). Arithmetic throws ResourceLimitError on
// overflow rather than wrapping.
class Rational {
  public:
    Rational() = default;
    Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(implicit)
    Rational(int128 num, int128 den);

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    long double to_long_double() const;
    double to_double() const { return static_cast<double>(to_long_double()); }
    std::string to_string() const;

  private:
    int128 num_{0};
    int128 den_{1};
};

int128 gcd128(int128 a, int128 b);
std::string int128_to_string(int128 value);

// floor(sqrt(n)) for 64-bit n, exact.
std::uint64_t isqrt(std::uint64_t n);

// a * b, throwing ResourceLimitError when the product does not fit.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

// Non-negative remainder of a modulo m (m > 0).
inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// Formats with 12 significant digits in plain decimal notation (no
// exponent), the convention used by every CSV and stdout writer.
std::string format_real(long double value);

}  // namespace primesq
