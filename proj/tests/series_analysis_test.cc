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

#include "cavo/series_analysis.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cavo/linked_cluster.h"
#include "cavo/fidelity.h"
#include "cavo/local_spectrum.h"
#include "oracle/ed_oracle.h"

namespace cavo {
namespace {

std::filesystem::path scratch_dir() {
    auto d = std::filesystem::temp_directory_path() /
             ("cavo_series_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(d);
    return d;
}

TEST(SeriesAnalysis, GapTaylorCoefficients) {
    RationalSeries t = taylor_of_gap(12);
    for (int k = 0; k <= 3; k++) EXPECT_EQ(t[k], 0);
    EXPECT_EQ(t[4], Rational(5, 8));
    EXPECT_EQ(t[6], Rational(-7, 32));
    EXPECT_EQ(t[8], Rational(-21, 512));
    EXPECT_EQ(t[10], Rational(-33, 2048));
    EXPECT_EQ(t[12], Rational(1703, 16384));
    for (int k = 1; k <= 11; k += 2) EXPECT_EQ(t[k], 0);
    EXPECT_THROW(taylor_of_gap(13), std::invalid_argument);
    EXPECT_EQ(taylor_of_gap(6), t.truncated(6));
}

TEST(SeriesAnalysis, GapTaylorAgreesWithChebyshevFitOfTheClosedForm) {
    auto mono = oracle::chebyshev_taylor(gap_closed_form, 0.25, 24);
    RationalSeries t = taylor_of_gap(8);
    EXPECT_NEAR(mono[4], to_double(t[4]), 1e-8);
    EXPECT_NEAR(mono[6], to_double(t[6]), 1e-6);
    for (double l : {0.05, 0.1}) EXPECT_NEAR(t.evaluate(l), gap_closed_form(l), 2e-10 * std::pow(l / 0.1, 10));
}

TEST(SeriesAnalysis, PadeReproducesTheSeries) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    for (int trial = 0; trial < 10; trial++) {
        RationalSeries s(6);
        s[0] = 1;
        for (int k = 1; k <= 6; k++) {
            s[k] = Rational(num(rng), den(rng));
            s[k].canonicalize();
        }
        PadeApproximant p = pade(s, 3, 3);
        if (p.L != 3) continue;  // degenerate draw; covered separately
        ASSERT_TRUE(p.exact_numerator && p.exact_denominator);
        EXPECT_EQ((*p.exact_denominator)[0], 1);
        RationalSeries num_s(*p.exact_numerator), den_s(*p.exact_denominator);
        RationalSeries back = num_s.extended(6) / den_s.extended(6);
        EXPECT_EQ(back, s);
        Rational x(1, 20);
        double exact = Rational(num_s.evaluate(x) / den_s.evaluate(x)).get_d();
        EXPECT_NEAR(p.evaluate(0.05), exact, 1e-13 * std::abs(exact));
    }
}

TEST(SeriesAnalysis, DegeneratePadeFallsBack) {
    // [2/2] needs det [[a2, a1], [a3, a2]] != 0.
    RationalSeries s(std::vector<Rational>{1, 1, 2, 4, 3});
    PadeApproximant p = pade(s, 2, 2);
    EXPECT_EQ(p.L, 1);
    EXPECT_EQ(p.M, 2);
    RationalSeries back = RationalSeries(*p.exact_numerator).extended(3) / RationalSeries(*p.exact_denominator).extended(3);
    EXPECT_EQ(back, s.truncated(3));
    EXPECT_THROW(pade(s, 3, 3), std::invalid_argument);
}

TEST(SeriesAnalysis, GeometricSeriesPoleIsExact) {
    RationalSeries g(8);
    for (int k = 0; k <= 8; k++) g[k] = Rational(1 << k);
    DlogPade d = dlog_pade(g, 1, 1);
    ASSERT_TRUE(d.pole);
    EXPECT_EQ(*d.pole, 0.5);
    EXPECT_EQ((*d.approximant.exact_denominator)[1], -2);
    EXPECT_DOUBLE_EQ(d.residue, -1.0);
}

TEST(SeriesAnalysis, SyntheticPowerLawPoleAndExponent) {
    const double lc = 0.3285, theta = 0.63;
    Series<double> s(10);
    double c = 1;
    for (int k = 0; k <= 10; k++) {
        s[k] = c;
        c *= (theta - k) / (k + 1) * (-1 / lc);
    }
    for (int L : {0, 1, 3}) {
        DlogPade d = dlog_pade(s, L, 1);
        EXPECT_NEAR(d.critical_point(), lc, 1e-6) << L;
        EXPECT_NEAR(d.residue, theta, 1e-6) << L;
    }
    // A non-singular correction moves nothing but the higher Pade entries.
    Series<double> t = s * Series<double>(std::vector<double>{1, 0.3, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    EXPECT_NEAR(dlog_pade(t, 4, 4).critical_point(), lc, 1e-6);
}

TEST(SeriesAnalysis, PoleScalesWithTheVariable) {
    RationalSeries g = tfim_gap_series(5);
    double pole = dlog_pade(g, 2, 2).critical_point();
    // Frozen from an independent symbolic [2/2] of f'/f for (2, -4, -2, -3, -9/2, -11).
    EXPECT_NEAR(pole, 0.330330360933869, 1e-12);
    for (Rational a : {Rational(2), Rational(1, 3)}) {
        RationalSeries r = g;
        Rational p = 1;
        for (int k = 0; k <= r.order(); k++, p *= a) r[k] *= p;
        EXPECT_NEAR(dlog_pade(r, 2, 2).critical_point(), pole / to_double(a), 1e-12);
    }
    EXPECT_NEAR(dlog_pade(g, 2, 2).residue, 0.660812179288479, 1e-10);
}

TEST(SeriesAnalysis, NoTransitionDetected) {
    // exp(x): f'/f = 1 has no pole at all.
    RationalSeries e(6);
    Rational f = 1;
    for (int k = 0; k <= 6; k++) {
        e[k] = 1 / f;
        f *= k + 1;
    }
    DlogPade d = dlog_pade(e, 2, 2);
    EXPECT_FALSE(d.pole);
    EXPECT_THROW(d.critical_point(), NoTransitionError);
    // 1 / (1 + 2x): pole on the negative axis only.
    RationalSeries n(6);
    for (int k = 0; k <= 6; k++) n[k] = (k % 2 ? -1 : 1) * Rational(1 << k);
    EXPECT_THROW(dlog_pade(n, 1, 1).critical_point(), NoTransitionError);
    RationalSeries bad(std::vector<Rational>{-1, 1, 1});
    EXPECT_THROW(dlog_pade(bad, 0, 1), std::invalid_argument);
}

TEST(SeriesAnalysis, ResummationMatchesTheClosedForm) {
    // f = (1 - 2x)^(-1): f(0) exp(int 2/(1-2t)) = 1/(1-2x).
    RationalSeries g(8);
    for (int k = 0; k <= 8; k++) g[k] = Rational(1 << k);
    DlogPade d = dlog_pade(g, 1, 1);
    for (double x : {0.0, 0.1, 0.3, 0.45}) EXPECT_NEAR(dlog_pade_resummed(d, 1.0, x), 1 / (1 - 2 * x), 1e-9);
    EXPECT_THROW(dlog_pade_resummed(d, 1.0, 0.5), std::domain_error);
    EXPECT_THROW(dlog_pade_resummed(d, 1.0, -0.1), std::invalid_argument);
}

TEST(SeriesAnalysis, ExternalSeriesRoundTrip) {
    auto dir = scratch_dir();
    RationalSeries s = tfim_gap_series(5).extended(13);
    s[13] = Rational(-7, 3);
    s.set_variable("lambda");
    write_external_series((dir / "gap.txt").string(), s);
    RationalSeries r = read_external_series((dir / "gap.txt").string());
    EXPECT_EQ(r, s);
    EXPECT_EQ(r.variable(), "lambda");
    EXPECT_TRUE(external_gap_matches_internal(r));
    r[3] += 1;
    EXPECT_FALSE(external_gap_matches_internal(r));
    EXPECT_FALSE(external_gap_matches_internal(tfim_gap_series(3)));

    std::ofstream(dir / "noheader.txt") << "0 1/1\n";
    std::ofstream(dir / "badline.txt") << "# x 2\n0 1\n5 1/2\n";
    std::ofstream(dir / "badvalue.txt") << "# x 2\n1 one\n";
    for (const char *f : {"noheader.txt", "badline.txt", "missing.txt"}) {
        EXPECT_THROW(read_external_series((dir / f).string()), std::runtime_error) << f;
    }
    EXPECT_ANY_THROW(read_external_series((dir / "badvalue.txt").string()));
    // A short or inconsistent file is refused by the gap model.
    write_external_series((dir / "short.txt").string(), tfim_gap_series(5));
    EXPECT_THROW(tfim_gap_model((dir / "short.txt").string()), std::runtime_error);
    RationalSeries wrong = s;
    wrong[2] = 0;
    write_external_series((dir / "wrong.txt").string(), wrong);
    EXPECT_THROW(tfim_gap_model((dir / "wrong.txt").string()), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST(SeriesAnalysis, InternalGapModel) {
    TfimGapModel m = tfim_gap_model();
    EXPECT_FALSE(m.external);
    EXPECT_EQ(m.series, tfim_gap_series(5));
    EXPECT_NEAR(m.critical_point(), 0.330330360933869, 1e-12);
    EXPECT_DOUBLE_EQ(m.gap(0), 2.0);
    EXPECT_NEAR(m.gap(0.01), m.series.evaluate(Rational(1, 100)).get_d(), 1e-9);
    double prev = 2;
    for (double l = 0.02; l < 0.33; l += 0.02) {
        double g = m.gap(l);
        EXPECT_LT(g, prev);
        EXPECT_GT(g, 0);
        prev = g;
    }
    EXPECT_THROW(m.gap(0.34), std::domain_error);
}

TEST(SeriesAnalysis, DTfimSeries) {
    const RationalSeries &f = tfim_fidelity_coefficients();
    EXPECT_EQ(f, *fidelity_series(12, FidelityTarget::tfim_polarized).exact);
    EXPECT_EQ(d_tfim(0.0), 1.0);
    // Direct Horner evaluation of the literal coefficients.
    const double c[] = {1, -1.0 / 8, -93.0 / 256, -2961.0 / 2048, -243005.0 / 32768, -812949139.0 / 18874368,
                        -17716040461601.0 / 65229815808};
    double x2 = 0.01, v = 0;
    for (int k = 6; k >= 0; k--) v = v * x2 + c[k];
    EXPECT_NEAR(d_tfim(0.1), v, 1e-15);
    double partial = 0, p = 1;
    for (int k = 0; k <= 6; k++, p *= x2) {
        double next = partial + c[k] * p;
        if (k > 0) EXPECT_LT(next, partial);
        partial = next;
    }
    EXPECT_NEAR(partial, d_tfim(0.1), 1e-15);
    EXPECT_NEAR(d_tfim(0.1), 1 - 0.00125 - 93.0 / 256 * 1e-4, 2e-6);
    EXPECT_EQ(d_tfim(-0.2), d_tfim(0.2));
    EXPECT_THROW(d_tfim(0.3, 0.3285), std::domain_error);
    EXPECT_NO_THROW(d_tfim(0.29, 0.3285));
    EXPECT_THROW(d_tfim(0.1, 0.0), std::invalid_argument);
}

TEST(SeriesAnalysis, CorrectedCriticalLineLiesAboveTheLowEnergyEstimate) {
    double low = critical_line(0.5), corrected = corrected_critical_line(0.5);
    EXPECT_GE(corrected, low);
    EXPECT_LT((corrected - low) / low, 0.01);
    EXPECT_THROW(corrected_critical_line(0.0), std::invalid_argument);
    EXPECT_THROW(corrected_critical_line(1.5), std::invalid_argument);
}

}  // namespace
}  // namespace cavo
