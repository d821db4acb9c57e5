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

#ifndef CAVO_SERIES_ANALYSIS_H_
#define CAVO_SERIES_ANALYSIS_H_

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavo/series.h"

namespace cavo {

/// Taylor series of the closed-form site gap in lambda_xz/g (exact).
RationalSeries taylor_of_gap(int order);

struct PadeApproximant {
    int L = 0, M = 0;
    std::vector<double> numerator;    // L + 1 coefficients
    std::vector<double> denominator;  // M + 1 coefficients, denominator[0] = 1
    /// Exact coefficients when the input was rational.
    std::optional<std::vector<Rational>> exact_numerator, exact_denominator;

    double evaluate(double x) const;
    /// Roots of the denominator.
    std::vector<std::complex<double>> poles() const;
};

/// [L/M] Pade approximant of a series with at least L + M + 1 coefficients. A singular
/// system falls back to [L-1/M] with a warning.
PadeApproximant pade(const RationalSeries &s, int L, int M);
PadeApproximant pade(const Series<double> &s, int L, int M);

class NoTransitionError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct DlogPade {
    PadeApproximant approximant;  // of d/dx log f
    std::optional<double> pole;   // smallest positive real pole
    double residue = 0;           // f ~ (x_c - x)^residue near the pole

    double critical_point() const {
        if (!pole) throw NoTransitionError("no transition detected");
        return *pole;
    }
};

/// dlog Pade of f: [L/M] of f'/f (f(0) > 0, L + M <= order - 1).
DlogPade dlog_pade(const RationalSeries &s, int L, int M);
DlogPade dlog_pade(const Series<double> &s, int L, int M);

/// f(x) ~= f(0) exp(int_0^x [L/M](t) dt), by Gauss-Legendre quadrature. Throws when x is at
/// or beyond the physical pole.
double dlog_pade_resummed(const DlogPade &d, double f0, double x);

/// External series: "# <variable> <order>" then "k num/den" per line.
RationalSeries read_external_series(const std::string &path);
void write_external_series(const std::string &path, const RationalSeries &s);

/// Checks the first `count` coefficients against the internal order-5 TFIM gap.
bool external_gap_matches_internal(const RationalSeries &external, int count = 5);

/// TFIM gap (units of Delta E/2, variable lambda) used for the critical point and for
/// Delta E_zz: dlogPade [6,6] of the external series when available, else [2,2] of the
/// internal order-5 series.
struct TfimGapModel {
    RationalSeries series;
    DlogPade dlog;
    bool external = false;

    double critical_point() const { return dlog.critical_point(); }
    /// Gap in units of Delta E / 2; throws beyond the critical point.
    double gap(double lambda) const;
};
TfimGapModel tfim_gap_model(const std::string &external_path = "");

/// Order-12 TFIM ground-state fidelity per site (exact, even powers).
const RationalSeries &tfim_fidelity_coefficients();

/// d_TFIM(lambda), refused beyond 0.9 lambda_c.
double d_tfim(double lambda, double lambda_c);
double d_tfim(double lambda);

/// Critical lambda_zz from dlogPade [2,2] of the order-5 full-model gap at lambda_xz.
double corrected_critical_line(double lambda_xz);

}  // namespace cavo

#endif
