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

#ifndef CAVO_CLUSTER_SPACE_H_
#define CAVO_CLUSTER_SPACE_H_

#include <optional>
#include <vector>

#include "cavo/lattice.h"
#include "cavo/series.h"
#include "cavo/site_model.h"

namespace cavo {

enum class Reference { vacuum, one_particle };

/// Dense product basis over all sites of a finite graph, in the unperturbed eigenbasis of
/// every site. State index = sum_s label_s * levels^s. Implements the model interface of
/// the Takahashi evaluator: P projects on the reference manifold (all sites in label 0, or
/// exactly one site in label 1), S^k = ((1-P)/(E_L - H0))^k.
/// A bond whose two ends sit on the same site (periodic direction of length 1) acts as the
/// on-site product of the two leg operators.
template <typename T>
class ClusterSpace {
   public:
    using Vector = std::vector<T>;
    using Scalar = T;

    ClusterSpace(const ClusterGraph &graph, const SiteModel<T> &model, Reference reference);

    size_t dim() const { return dim_; }
    int num_sites() const { return sites_; }
    int num_bonds() const { return static_cast<int>(bonds_.size()); }
    const ClusterGraph &graph() const { return graph_; }

    int label(size_t state, int site) const { return static_cast<int>((state / stride_[site]) % levels_); }
    size_t state_index(const std::vector<int> &labels) const;
    size_t particle_state(int site) const { return stride_[site]; }
    Vector basis_vector(size_t state) const;
    bool in_reference(size_t state) const { return in_l_[state]; }
    const std::vector<T> &energies() const { return energy_; }

    /// Per-bond multipliers of the coupling (default 1), e.g. to switch off one direction.
    void set_bond_weights(std::vector<T> weights);
    /// Restricts the rightmost V of every word to a single bond.
    void fix_first_bond(std::optional<int> bond) { fixed_first_ = bond; }

    // Model interface.
    Vector apply_v(const Vector &v, int depth) const;
    void project(Vector &v) const;
    void resolvent(Vector &v, int k) const;
    T reference_energy() const { return reference_energy_; }
    T from_rational(const Rational &r) const;
    void axpy(Vector &y, const T &a, const Vector &x) const;
    Vector zero_like(const Vector &) const { return Vector(dim_, T(0)); }
    T dot(const Vector &a, const Vector &b) const;

    /// Full V (every bond), independent of fix_first_bond.
    Vector apply_v_all(const Vector &v) const;

   private:
    struct BondOp {
        int a, b;  // sites
        int leg_a, leg_b;
        std::vector<std::vector<std::pair<int, T>>> on_site;  // self bonds: product matrix columns
    };
    void apply_bond(const BondOp &bond, const T &weight, const Vector &v, Vector &out) const;

    ClusterGraph graph_;
    SiteModel<T> model_;
    Reference reference_;
    int sites_, levels_;
    size_t dim_;
    std::vector<size_t> stride_;
    std::vector<BondOp> bonds_;
    std::vector<T> weights_;
    std::vector<T> energy_;
    std::vector<char> in_l_;
    T reference_energy_;
    std::optional<int> fixed_first_;
};

/// Nondegenerate Rayleigh-Schroedinger expansion of the state with all sites in label 0,
/// intermediate normalization: psi[0] = |0>, <0|psi[k]> = 0 for k >= 1.
template <typename T>
struct GroundStateSeries {
    std::vector<T> energy;
    std::vector<std::vector<T>> psi;

    /// <psi|psi> as a series (constant term 1).
    Series<T> norm() const;
    /// <phi|psi> / <phi|0> for a bra with nonzero vacuum amplitude.
    Series<T> overlap(const std::vector<T> &bra) const;
};

template <typename T>
GroundStateSeries<T> rayleigh_schrodinger(const ClusterSpace<T> &space, int order);

/// Product bra prod_s <a| with the same single-site amplitudes a[label] on every site.
template <typename T>
std::vector<T> product_state(const ClusterSpace<T> &space, const std::vector<T> &amplitudes);

}  // namespace cavo

#endif
