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

#ifndef CAVO_FIDELITY_H_
#define CAVO_FIDELITY_H_

#include <cmath>
#include <optional>
#include <stdexcept>

#include "cavo/series_analysis.h"

namespace cavo {

/// Couplings in units of g, temperature in g/k_B. T = 0 is the ground state.
struct ThermalPoint {
    double lambda_xz = 0;
    double h_z = 0;
    double lambda_zz = 0;
    double temperature = 0;
};

/// d is the product of the components that are present.
struct FidelityResult {
    double d = 1;
    std::optional<double> thermal_factor;
    std::optional<double> overlap_factor;
    std::optional<double> tfim_factor;
};

class BeyondCriticalError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

class UnreachableThresholdError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

constexpr double kDefaultThreshold = 0.986;
/// Square-lattice TFIM critical ratio used by the low-energy critical line.
constexpr double kTfimCriticalCoupling = 0.3285;

FidelityResult d_unperturbed(const ThermalPoint &p);

/// Two-level thermal mixture of the ground and first excited site states. The overlap
/// component is ov0 + e^{-beta dE_z} ov1, so that d = thermal * overlap.
FidelityResult d_zfield(const ThermalPoint &p);

/// Overlap, one-particle thermal factor and d_TFIM at lambda = 2 lambda_zz c^2 / Delta E.
/// Delta E_zz comes from the resummed TFIM gap of `gap` (internal order-5 series by default).
FidelityResult d_zz(const ThermalPoint &p, const TfimGapModel &gap);
FidelityResult d_zz(const ThermalPoint &p);

/// 1 / (1 + (1/2pi) int_0^{2 sqrt(pi)} exp(-beta sqrt(gap^2 + v^2 r^2)) r dr).
/// beta = +inf gives 1.
double thermal_one_particle_factor(double beta, double gap_zz, double velocity);

struct WorkingPoint {
    double lambda_opt = 0;
    double d_max = 0;
};

/// Maximizes d_unperturbed over lambda_xz in [0, 1] at temperature T. With a threshold,
/// throws UnreachableThresholdError when the maximum stays below it.
WorkingPoint optimal_working_point(double temperature, std::optional<double> threshold = std::nullopt);

struct TemperatureBound {
    double t_max = 0;
    double lambda_opt = 0;
};
/// Largest T whose optimal d still reaches the threshold.
TemperatureBound max_temperature(double threshold = kDefaultThreshold);

struct CouplingBound {
    double value = 0;       // h_z^max or lambda_zz^max
    double lambda_opt = 0;  // lambda_xz at which it is reached
};
/// Largest h_z for which some lambda_xz still gives d_zfield >= threshold.
CouplingBound hz_max(double threshold = kDefaultThreshold, double temperature = 0);
/// Largest lambda_zz for which some lambda_xz still gives d_zz >= threshold.
CouplingBound lambda_zz_max(double threshold = kDefaultThreshold, double temperature = 0);

/// lambda_zz at which 2 lambda_zz c^2 / Delta E reaches the TFIM critical ratio.
double critical_line(double lambda_xz, double ratio = kTfimCriticalCoupling);

/// Golden-section maximum of f on [a, b] (f unimodal), to tol in x.
struct Maximum {
    double x = 0, f = 0;
};
template <typename F>
Maximum golden_section_max(F f, double a, double b, double tol = 1e-9) {
    const double r = (std::sqrt(5.0) - 1) / 2;
    const double lo = a, hi = b;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    double x = (a + b) / 2;
    Maximum m{x, f(x)};
    // Endpoints matter when the maximum sits on the boundary.
    for (double e : {a, b, lo, hi}) {
        double fe = f(e);
        if (fe > m.f) m = {e, fe};
    }
    return m;
}

}  // namespace cavo

#endif
