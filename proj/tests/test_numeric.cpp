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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "primesq/errors.hpp"
#include "primesq/numeric.hpp"

namespace primesq {
namespace {

TEST(Rational, NormalizesSignAndGcd) {
    const Rational r(6, -4);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 2);
    EXPECT_EQ(r.to_string(), "-3/2");
    EXPECT_EQ(Rational(0, 7), Rational(0));
    EXPECT_EQ(Rational(8, 4).to_string(), "2");
}

TEST(Rational, Arithmetic) {
    const Rational a(1, 3), b(1, 6);
    EXPECT_EQ(a + b, Rational(1, 2));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 18));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_EQ(-a, Rational(-1, 3));
    EXPECT_LT(b, a);
    EXPECT_GT(Rational(-1, 7), Rational(-1, 6));
    EXPECT_NEAR(Rational(2, 3).to_double(), 2.0 / 3.0, 1e-16);
}

TEST(Rational, Errors) {
    EXPECT_THROW(Rational(1, 0), std::invalid_argument);
    EXPECT_THROW(Rational(1) / Rational(0), std::invalid_argument);
    const Rational huge(static_cast<int128>(1) << 100, 3);
    EXPECT_THROW(huge * huge, ResourceLimitError);
}

TEST(Numeric, Gcd128AndToString) {
    EXPECT_EQ(gcd128(84, -36), 12);
    EXPECT_EQ(gcd128(0, 5), 5);
    EXPECT_EQ(int128_to_string(-(static_cast<int128>(1) << 70)), "-1180591620717411303424");
}

TEST(Numeric, Isqrt) {
    EXPECT_EQ(isqrt(0), 0u);
    EXPECT_EQ(isqrt(24), 4u);
    EXPECT_EQ(isqrt(25), 5u);
    EXPECT_EQ(isqrt(std::numeric_limits<std::uint64_t>::max()), 4294967295u);
    for (std::uint64_t r : {3037000499ULL, 1000000007ULL, 65536ULL}) {
        EXPECT_EQ(isqrt(r * r), r);
        EXPECT_EQ(isqrt(r * r - 1), r - 1);
    }
}

TEST(Numeric, CheckedMul) {
    EXPECT_EQ(checked_mul(1ULL << 31, 1ULL << 32), 1ULL << 63);
    EXPECT_THROW(checked_mul(1ULL << 32, 1ULL << 32), ResourceLimitError);
}

TEST(Numeric, FloorMod) {
    EXPECT_EQ(floor_mod(-1, 6), 5);
    EXPECT_EQ(floor_mod(13, 6), 1);
    EXPECT_EQ(floor_mod(-12, 6), 0);
}

TEST(Numeric, FormatReal) {
    EXPECT_EQ(format_real(1.0L / 3.0L), "0.333333333333");
    EXPECT_EQ(format_real(-0.0444444444444444L), "-0.0444444444444");
    EXPECT_EQ(format_real(std::numeric_limits<long double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_real(0.0L), "0");
    EXPECT_EQ(format_real(50509416049.0L), "50509416049");
    EXPECT_EQ(format_real(12345678901234.0L), "12345678901200");
    EXPECT_EQ(format_real(-4.0e14L), "-400000000000000");
    EXPECT_EQ(format_real(1.5e-7L), "0.00000015");
    EXPECT_EQ(format_real(-1.0L / 30000.0L), "-0.0000333333333333");
}

TEST(CompensatedSum, RecoversSmallTerms) {
    CompensatedSum<double> s;
    s += 1e16;
    for (int i = 0; i < 1000; ++i) s += 1.0;
    s -= 1e16;
    EXPECT_EQ(s.value(), 1000.0);

    double naive = 1e16;
    for (int i = 0; i < 1000; ++i) naive += 1.0;
    EXPECT_NE(naive - 1e16, 1000.0);
}

TEST(CompensatedSum, LongHarmonicSum) {
    CompensatedSum<long double> s;
    for (int n = 1; n <= 100000; ++n) s += 1.0L / n;
    // H_n = log n + gamma + 1/(2n) - 1/(12n^2) + ...
    const long double n = 100000.0L;
    const long double expected = std::log(n) + 0.577215664901532860606512090082402431L +
                                 1.0L / (2.0L * n) - 1.0L / (12.0L * n * n);
    EXPECT_NEAR(static_cast<double>(s.value()), static_cast<double>(expected), 1e-13);
}

}  // namespace
}  // namespace primesq
