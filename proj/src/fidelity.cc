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

#include "cavo/fidelity.h"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "cavo/local_spectrum.h"
#include "cavo/quadrature.h"

namespace cavo {

namespace {

void check_point(const ThermalPoint &p) {
    if (!std::isfinite(p.lambda_xz) || p.lambda_xz < 0) throw std::invalid_argument("lambda_xz must be >= 0");
    if (!std::isfinite(p.h_z) || !std::isfinite(p.lambda_zz)) throw std::invalid_argument("couplings must be finite");
    if (!(p.temperature >= 0) || !std::isfinite(p.temperature)) {
        throw std::invalid_argument("temperature must be finite and >= 0");
    }
}

// e^{-beta dE}, exactly 0 at T = 0.
double boltzmann(double gap, double temperature) { return temperature == 0 ? 0.0 : std::exp(-gap / temperature); }

FidelityResult finish(FidelityResult r) {
    r.d = 1;
    for (auto f : {r.thermal_factor, r.overlap_factor, r.tfim_factor}) {
        if (f) r.d *= *f;
    }
    return r;
}

}  // namespace

FidelityResult d_unperturbed(const ThermalPoint &p) {
    check_point(p);
    if (p.h_z != 0 || p.lambda_zz != 0) throw std::invalid_argument("d_unperturbed needs h_z = lambda_zz = 0");
    SiteScalars s = site_scalars(p.lambda_xz);
    FidelityResult r;
    r.thermal_factor = 1 / (1 + boltzmann(s.gap, p.temperature));
    r.overlap_factor = s.overlap0;
    return finish(r);
}

FidelityResult d_zfield(const ThermalPoint &p) {
    check_point(p);
    if (p.lambda_zz != 0) throw std::invalid_argument("d_zfield needs lambda_zz = 0");
    SiteScalars s = site_scalars(p.lambda_xz, p.h_z);
    double w = boltzmann(s.gap, p.temperature);
    FidelityResult r;
    r.thermal_factor = 1 / (1 + w);
    r.overlap_factor = s.overlap0 + w * s.overlap1;
    return finish(r);
}

double thermal_one_particle_factor(double beta, double gap_zz, double velocity) {
    if (!(gap_zz > 0)) throw std::invalid_argument("one-particle gap must be positive");
    if (std::isinf(beta)) return 1;
    if (!(beta >= 0)) throw std::invalid_argument("beta must be >= 0");
    auto f = [&](double r) { return std::exp(-beta * std::hypot(gap_zz, velocity * r)) * r; };
    double integral = integrate(f, 0.0, 2 * std::sqrt(std::numbers::pi), 1e-10);
    return 1 / (1 + integral / (2 * std::numbers::pi));
}

FidelityResult d_zz(const ThermalPoint &p, const TfimGapModel &gap) {
    check_point(p);
    if (p.h_z != 0) throw std::invalid_argument("d_zz needs h_z = 0");
    SiteScalars s = site_scalars(p.lambda_xz);
    FidelityResult r;
    r.overlap_factor = s.overlap0;
    if (p.lambda_zz == 0) {
        r.thermal_factor = 1;
        r.tfim_factor = 1;
        if (p.temperature > 0) {
            r.thermal_factor = thermal_one_particle_factor(1 / p.temperature, s.gap, 0.99 * s.gap / 2);
        }
        return finish(r);
    }
    if (!(s.gap > 0)) throw BeyondCriticalError("no site gap at lambda_xz = 0");
    double lambda = 2 * std::abs(p.lambda_zz) * s.c * s.c / s.gap;
    double lc = gap.critical_point();
    if (lambda >= lc) throw BeyondCriticalError("beyond the critical line");
    r.tfim_factor = d_tfim(lambda, lc);
    r.thermal_factor = 1;
    if (p.temperature > 0) {
        double gap_zz = s.gap / 2 * gap.gap(lambda);
        if (!(gap_zz > 0)) throw BeyondCriticalError("beyond the critical line");
        r.thermal_factor = thermal_one_particle_factor(1 / p.temperature, gap_zz, 0.99 * s.gap / 2);
    }
    return finish(r);
}

FidelityResult d_zz(const ThermalPoint &p) {
    static const TfimGapModel model = tfim_gap_model();
    return d_zz(p, model);
}

WorkingPoint optimal_working_point(double temperature, std::optional<double> threshold) {
    if (threshold && !(*threshold > 0 && *threshold <= 1)) throw std::invalid_argument("threshold must lie in (0, 1]");
    auto d = [&](double l) { return d_unperturbed({l, 0, 0, temperature}).d; };
    Maximum m = golden_section_max(d, 0.0, 1.0, 1e-10);
    if (threshold && m.f < *threshold) throw UnreachableThresholdError("threshold unreachable at this temperature");
    return {m.x, m.f};
}

TemperatureBound max_temperature(double threshold) {
    if (!(threshold > 0 && threshold < 1)) throw std::invalid_argument("threshold must lie in (0, 1)");
    auto best = [](double t) { return optimal_working_point(t).d_max; };
    double lo = 0, hi = 1e-4;
    while (best(hi) >= threshold) {
        lo = hi;
        hi *= 2;
        if (hi > 1e3) throw std::runtime_error("no temperature bound found");
    }
    while (hi - lo > 1e-10 * hi) {
        double mid = (lo + hi) / 2;
        (best(mid) >= threshold ? lo : hi) = mid;
    }
    return {lo, optimal_working_point(lo).lambda_opt};
}

namespace {

// Largest x with best(x).f >= threshold, best decreasing in x; best(0) must reach it.
CouplingBound bisect_bound(const std::function<Maximum(double)> &best, double threshold, double start) {
    if (best(0).f < threshold) throw UnreachableThresholdError("threshold unreachable even without the coupling");
    double lo = 0, hi = start;
    while (best(hi).f >= threshold) {
        lo = hi;
        hi *= 2;
        if (hi > 10) throw std::runtime_error("no coupling bound found");
    }
    while (hi - lo > 1e-9 * hi) {
        double mid = (lo + hi) / 2;
        (best(mid).f >= threshold ? lo : hi) = mid;
    }
    return {lo, best(lo).x};
}

}  // namespace

CouplingBound hz_max(double threshold, double temperature) {
    if (!(threshold > 0 && threshold < 1)) throw std::invalid_argument("threshold must lie in (0, 1)");
    auto best = [&](double h) {
        return golden_section_max([&](double l) { return d_zfield({l, h, 0, temperature}).d; }, 0.0, 1.0, 1e-10);
    };
    return bisect_bound(best, threshold, 1e-6);
}

CouplingBound lambda_zz_max(double threshold, double temperature) {
    if (!(threshold > 0 && threshold < 1)) throw std::invalid_argument("threshold must lie in (0, 1)");
    static const TfimGapModel model = tfim_gap_model();
    double lc = model.critical_point();
    auto best = [&](double lzz) {
        if (lzz == 0) {
            return golden_section_max([&](double l) { return d_zz({l, 0, 0, temperature}, model).d; }, 0.0, 1.0,
                                      1e-10);
        }
        // Below this lambda_xz the point sits too close to (or beyond) the critical line.
        auto ratio = [&](double l) {
            SiteScalars s = site_scalars(l);
            return 2 * lzz * s.c * s.c / s.gap;
        };
        double a = 1e-6, b = 1.0;
        if (ratio(b) >= 0.9 * lc) return Maximum{b, 0.0};
        while (b - a > 1e-12) {
            double mid = (a + b) / 2;
            (ratio(mid) >= 0.9 * lc ? a : b) = mid;
        }
        auto f = [&](double l) {
            try {
                return d_zz({l, 0, lzz, temperature}, model).d;
            } catch (const std::domain_error &) {
                return 0.0;
            }
        };
        return golden_section_max(f, b, 1.0, 1e-10);
    };
    return bisect_bound(best, threshold, 1e-6);
}

double critical_line(double lambda_xz, double ratio) {
    if (!(lambda_xz > 0)) throw std::invalid_argument("critical line needs lambda_xz > 0");
    SiteScalars s = site_scalars(lambda_xz);
    return ratio * s.gap / (2 * s.c * s.c);
}

}  // namespace cavo
