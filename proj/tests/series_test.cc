// Copyright 2026 The cavo Authors
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

#include "cavo/series.h"

#include <gtest/gtest.h>

#include <random>

namespace cavo {
namespace {

RationalSeries random_series(std::mt19937 &rng, int order) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    RationalSeries s(order);
    for (int k = 0; k <= order; k++) {
        s[k] = Rational(num(rng), den(rng));
        s[k].canonicalize();
    }
    return s;
}

TEST(Series, RationalRoundTrip) {
    EXPECT_EQ(to_string(Rational(-93, 256)), "-93/256");
    EXPECT_EQ(to_string(Rational(4)), "4/1");
    EXPECT_EQ(parse_rational("-17716040461601/65229815808"), Rational("-17716040461601/65229815808"));
    EXPECT_EQ(parse_rational(" 6/4 "), Rational(3, 2));
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Series, RingAxiomsOnRandomInstances) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; trial++) {
        auto a = random_series(rng, 6), b = random_series(rng, 6), c = random_series(rng, 6);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
    }
}

TEST(Series, TruncationUsesTheSmallerOrder) {
    RationalSeries a({1, 2, 3, 4}), b({1, 1});
    EXPECT_EQ((a * b).order(), 1);
    EXPECT_EQ((a + b).order(), 1);
    EXPECT_EQ((a * b)[1], Rational(3));
    RationalSeries z(5);
    EXPECT_EQ(z.order(), 5);  // trailing zeros kept
}

TEST(Series, InverseDivideAndCompose) {
    RationalSeries geo({1, -2});  // 1 - 2x, extended
    auto inv = geo.extended(8).inverse();
    for (int k = 0; k <= 8; k++) EXPECT_EQ(inv[k], Rational(1 << k));
    std::mt19937 rng(3);
    auto a = random_series(rng, 7);
    a[0] = 3;
    auto one = a * a.inverse();
    EXPECT_EQ(one, RationalSeries::constant(1, 7));
    EXPECT_EQ((a / a), RationalSeries::constant(1, 7));
    // (1 + x)^2 composed with x -> 2x equals 1 + 4x + 4x^2.
    RationalSeries sq({1, 2, 1}), dbl({0, 2, 0});
    EXPECT_EQ(sq.compose(dbl), RationalSeries({1, 4, 4}));
    EXPECT_THROW(sq.compose(RationalSeries({1, 1, 0})), std::domain_error);
    EXPECT_THROW(RationalSeries({0, 1}).inverse(), std::domain_error);
}

TEST(Series, LogExpSqrtAreConsistent) {
    std::mt19937 rng(5);
    auto a = random_series(rng, 8);
    a[0] = 1;
    EXPECT_EQ(a.log().exp(), a);
    auto r = a.sqrt();
    EXPECT_EQ(r * r, a);
    EXPECT_EQ(a.derivative().integral()[3], a[3]);
}

TEST(Series, EvaluateDoubleAndRational) {
    RationalSeries s({1, Rational(-1, 8), Rational(1, 2)});
    EXPECT_EQ(s.evaluate(Rational(2)), Rational(11, 4));
    EXPECT_DOUBLE_EQ(s.evaluate(0.5), 1 - 0.0625 + 0.125);
    EXPECT_DOUBLE_EQ(to_double_series(s)[1], -0.125);
}

}  // namespace
}  // namespace cavo
