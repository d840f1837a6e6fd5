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

#include "primesq/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

#include "primesq/errors.hpp"

namespace primesq {

namespace {

int128 abs128(int128 v) { return v < 0 ? -v : v; }

int128 checked_mul128(int128 a, int128 b) {
    int128 out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw ResourceLimitError("rational arithmetic overflow (128-bit)");
    }
    return out;
}

int128 checked_add128(int128 a, int128 b) {
    int128 out;
    if (__builtin_add_overflow(a, b, &out)) {
        throw ResourceLimitError("rational arithmetic overflow (128-bit)");
    }
    return out;
}

}  // namespace

int128 gcd128(int128 a, int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string int128_to_string(int128 value) {
    if (value == 0) return "0";
    const bool negative = value < 0;
    std::string digits;
    while (value != 0) {
        const int d = static_cast<int>(value % 10);
        digits.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
        value /= 10;
    }
    if (negative) digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

Rational::Rational(int128 num, int128 den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const int128 g = gcd128(num, den);
    num_ = g > 1 ? num / g : num;
    den_ = g > 1 ? den / g : den;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    const int128 g = gcd128(den_, rhs.den_);
    const int128 lhs_scale = rhs.den_ / g;
    const int128 rhs_scale = den_ / g;
    const int128 num = checked_add128(checked_mul128(num_, lhs_scale),
                                      checked_mul128(rhs.num_, rhs_scale));
    *this = Rational(num, checked_mul128(den_, lhs_scale));
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
    const int128 g1 = gcd128(num_, rhs.den_);
    const int128 g2 = gcd128(rhs.num_, den_);
    const int128 a = g1 > 1 ? num_ / g1 : num_;
    const int128 d = g1 > 1 ? rhs.den_ / g1 : rhs.den_;
    const int128 b = g2 > 1 ? rhs.num_ / g2 : rhs.num_;
    const int128 c = g2 > 1 ? den_ / g2 : den_;
    *this = Rational(checked_mul128(a, b), checked_mul128(c, d));
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    Rational inv;
    inv.num_ = rhs.den_;
    inv.den_ = rhs.num_;
    if (inv.den_ < 0) {
        inv.num_ = -inv.num_;
        inv.den_ = -inv.den_;
    }
    return *this *= inv;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const Rational diff = a - b;
    if (diff.num_ < 0) return std::strong_ordering::less;
    if (diff.num_ > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

long double Rational::to_long_double() const {
    // Split to keep precision when both parts are larger than 2^64.
    const int128 q = num_ / den_;
    const int128 r = num_ % den_;
    return static_cast<long double>(q) +
           static_cast<long double>(r) / static_cast<long double>(den_);
}

std::string Rational::to_string() const {
    if (den_ == 1) return int128_to_string(num_);
    return int128_to_string(num_) + "/" + int128_to_string(den_);
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && (r > std::numeric_limits<std::uint32_t>::max() || r * r > n)) --r;
    while (r + 1 <= std::numeric_limits<std::uint32_t>::max() && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw ResourceLimitError("64-bit overflow in " + std::to_string(a) + " * " +
                                 std::to_string(b));
    }
    return out;
}

std::string format_real(long double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12Lg", value);
    if (std::strchr(buf, 'e') == nullptr) return buf;

    // Spell out the exponent form: 12 significant digits, plain decimal.
    std::snprintf(buf, sizeof(buf), "%.11Le", value);
    std::string text(buf);
    const bool negative = text.front() == '-';
    if (negative) text.erase(0, 1);
    const auto e_pos = text.find('e');
    const int exponent = std::stoi(text.substr(e_pos + 1));
    std::string digits = text.substr(0, 1) + text.substr(2, e_pos - 2);
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string out;
    if (exponent >= 0) {
        out = digits;
        const auto int_len = static_cast<std::size_t>(exponent) + 1;
        if (out.size() < int_len) out.append(int_len - out.size(), '0');
    } else {
        out = "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + digits;
    }
    return negative ? "-" + out : out;
}

}  // namespace primesq
