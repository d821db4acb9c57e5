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

#ifndef CAVO_LINKED_CLUSTER_H_
#define CAVO_LINKED_CLUSTER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cavo/lattice.h"
#include "cavo/series.h"
#include "cavo/site_model.h"

namespace cavo {

constexpr int kMaxHoppingOrder = 5;

/// One quasi-particle hopping amplitudes t_{x,y} as series in the coupling.
/// Only x >= y >= 0 is stored; the other displacements follow from the square symmetry.
template <typename T>
struct HoppingTable {
    int order = 0;
    double lambda_xz = 0;  // 0 for the effective TFIM
    std::map<std::pair<int, int>, Series<T>> entries;
    /// Vacuum energy of the same processes that make up t_{0,0}; t_{0,0} - E0 is the
    /// unshifted one-particle energy.
    Series<T> ground_energy_E0;
    uint64_t processes = 0;  // ordered bond sequences evaluated

    Series<T> at(int x, int y) const;
    Series<T> onsite() const { return at(0, 0) - ground_energy_E0; }
};

struct HoppingOptions {
    /// Grow every region by this many extra steps (consistency runs).
    int region_margin = 0;
    /// Restrict to these reduced displacements (x >= y >= 0); empty = all with x + y <= order.
    std::vector<std::pair<int, int>> targets;
};

template <typename T>
HoppingTable<T> compute_hopping(const SiteModel<T> &model, int order, const HoppingOptions &opt = {});

/// Effective TFIM: variable lambda = 2 lambda_zz c^2 / Delta E, energies in units of Delta E / 2.
HoppingTable<Rational> tfim_hopping(int order, const HoppingOptions &opt = {});
/// Full 16-level model at lambda_xz: variable lambda_zz / g, energies in g.
HoppingTable<double> hzz_hopping(int order, double lambda_xz, const HoppingOptions &opt = {});

/// omega(k) = t00 - E0 + sum_{r != 0} t_r cos(k.r).
template <typename T>
Series<double> dispersion_series(const HoppingTable<T> &table, double kx, double ky);
/// omega at k = (0, 0) (sign = +1) or k = (pi, pi) (sign = -1), exact in T.
template <typename T>
Series<T> gap_series(const HoppingTable<T> &table, int sign = +1);

/// c_i f_i with f_i = (2 / Delta E) (Delta E / (2 c^2))^i, i = 1..order.
std::vector<double> normalized_gap_coefficients(const Series<double> &gap, double lambda_xz);

/// The TFIM gap in units of Delta E / 2 already is 2 + sum_i (c_i f_i) lambda^i.
RationalSeries tfim_gap_series(int order);

enum class FidelityTarget { tfim_polarized, hzz_cluster_state };

struct FidelitySeries {
    FidelityTarget target = FidelityTarget::tfim_polarized;
    double lambda_xz = 0;
    double overlap0 = 1;
    Series<double> coefficients;
    std::optional<RationalSeries> exact;  // tfim only

    /// c_i / overlap0 * (Delta E / (2 c^2))^i for even i >= 2 (tfim: the raw coefficients).
    std::vector<double> normalized() const;
};

constexpr int kMaxTfimFidelityOrder = 12;
constexpr int kMaxHzzFidelityOrder = 4;
/// Default TFIM depth without the long-running opt-in.
constexpr int kDefaultTfimFidelityOrder = 8;

struct FidelityOptions {
    /// Called after each finished rectangle with (w, h).
    std::function<void(int, int)> progress;
};

/// Ground-state fidelity per site as a series, assembled from open w x h rectangles by
/// inclusion-exclusion (finite-lattice method). tfim: |<0|psi>|^2 per site of the
/// effective TFIM in lambda; hzz: |<psi_CS|psi>|^2 per site of the full model in lambda_zz/g.
FidelitySeries fidelity_series(int order, FidelityTarget target, double lambda_xz = 0,
                               const FidelityOptions &opt = {});

/// Rectangle data behind fidelity_series: per-site log-fidelity q with d = d0 * exp(q).
/// box(w, h) returns ln F of the open w x h box (F in intermediate normalization).
template <typename T>
Series<T> finite_lattice_sum(int order, const std::function<Series<T>(int, int)> &box);

/// ln <psi|psi> (intermediate normalization) on an open w x h box of the effective TFIM.
RationalSeries tfim_box_log_norm(int w, int h, int order);
/// 2 ln(<phi|psi>/<phi|0>) - ln <psi|psi> on an open w x h box of the full model.
Series<double> hzz_box_log_fidelity(int w, int h, int order, double lambda_xz);

}  // namespace cavo

#endif
