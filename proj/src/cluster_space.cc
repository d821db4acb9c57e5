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

#include "cavo/cluster_space.h"

#include <cmath>
#include <stdexcept>

namespace cavo {

namespace {

bool is_zero(double x) { return x == 0; }
bool is_zero(const Rational &x) { return sgn(x) == 0; }

// |x| small enough to count as a vanishing energy denominator.
bool vanishes(double x) { return std::abs(x) < 1e-12; }
bool vanishes(const Rational &x) { return sgn(x) == 0; }

}  // namespace

template <typename T>
ClusterSpace<T>::ClusterSpace(const ClusterGraph &graph, const SiteModel<T> &model, Reference reference)
    : graph_(graph), model_(model), reference_(reference), sites_(graph.num_sites()), levels_(model.levels) {
    if (levels_ < 2) throw std::invalid_argument("site model needs at least two levels");
    double d = std::pow(static_cast<double>(levels_), sites_);
    if (d > (1 << 26)) throw std::invalid_argument("cluster too large for a dense product basis");
    dim_ = static_cast<size_t>(d + 0.5);
    stride_.resize(sites_);
    for (int s = 0; s < sites_; s++) stride_[s] = s == 0 ? 1 : stride_[s - 1] * levels_;

    for (const auto &b : graph.bonds()) {
        BondOp op{b.a.site, b.b.site, b.a.leg, b.b.leg, {}};
        if (op.a == op.b) {
            // on-site product O_leg_a O_leg_b
            op.on_site.resize(levels_);
            for (int col = 0; col < levels_; col++) {
                std::vector<T> column(levels_, T(0));
                for (const auto &[mid, v2] : model.leg_ops[op.leg_b][col]) {
                    for (const auto &[row, v1] : model.leg_ops[op.leg_a][mid]) column[row] += v1 * v2;
                }
                for (int row = 0; row < levels_; row++) {
                    if (!is_zero(column[row])) op.on_site[col].emplace_back(row, column[row]);
                }
            }
        }
        bonds_.push_back(std::move(op));
    }
    weights_.assign(bonds_.size(), T(1));

    energy_.assign(dim_, T(0));
    in_l_.assign(dim_, 0);
    for (size_t s = 0; s < dim_; s++) {
        int ones = 0, others = 0;
        T e(0);
        for (int site = 0; site < sites_; site++) {
            int l = label(s, site);
            e += model.energies[l];
            ones += l == 1;
            others += l > 1;
        }
        energy_[s] = e;
        in_l_[s] = reference == Reference::vacuum ? (s == 0) : (ones == 1 && others == 0);
    }
    reference_energy_ = reference == Reference::vacuum ? T(0) : model.energies[1];
}

template <typename T>
size_t ClusterSpace<T>::state_index(const std::vector<int> &labels) const {
    if (static_cast<int>(labels.size()) != sites_) throw std::invalid_argument("one label per site expected");
    size_t s = 0;
    for (int i = 0; i < sites_; i++) {
        if (labels[i] < 0 || labels[i] >= levels_) throw std::out_of_range("site label out of range");
        s += labels[i] * stride_[i];
    }
    return s;
}

template <typename T>
typename ClusterSpace<T>::Vector ClusterSpace<T>::basis_vector(size_t state) const {
    Vector v(dim_, T(0));
    v.at(state) = T(1);
    return v;
}

template <typename T>
void ClusterSpace<T>::set_bond_weights(std::vector<T> weights) {
    if (weights.size() != bonds_.size()) throw std::invalid_argument("one weight per bond expected");
    weights_ = std::move(weights);
}

template <typename T>
void ClusterSpace<T>::apply_bond(const BondOp &bond, const T &weight, const Vector &v, Vector &out) const {
    if (is_zero(weight)) return;
    const T c = model_.coupling * weight;
    const size_t sa = stride_[bond.a], sb = stride_[bond.b];
    for (size_t s = 0; s < dim_; s++) {
        if (is_zero(v[s])) continue;
        int la = label(s, bond.a);
        if (bond.a == bond.b) {
            for (const auto &[row, val] : bond.on_site[la]) {
                out[s + (static_cast<long>(row) - la) * static_cast<long>(sa)] += c * val * v[s];
            }
            continue;
        }
        int lb = label(s, bond.b);
        size_t base = s - la * sa - lb * sb;
        for (const auto &[ra, va] : model_.leg_ops[bond.leg_a][la]) {
            T cv = c * va * v[s];
            for (const auto &[rb, vb] : model_.leg_ops[bond.leg_b][lb]) {
                out[base + ra * sa + rb * sb] += cv * vb;
            }
        }
    }
}

template <typename T>
typename ClusterSpace<T>::Vector ClusterSpace<T>::apply_v(const Vector &v, int depth) const {
    if (depth == 0 && fixed_first_) {
        Vector out(dim_, T(0));
        apply_bond(bonds_.at(*fixed_first_), weights_[*fixed_first_], v, out);
        return out;
    }
    return apply_v_all(v);
}

template <typename T>
typename ClusterSpace<T>::Vector ClusterSpace<T>::apply_v_all(const Vector &v) const {
    Vector out(dim_, T(0));
    for (size_t i = 0; i < bonds_.size(); i++) apply_bond(bonds_[i], weights_[i], v, out);
    return out;
}

template <typename T>
void ClusterSpace<T>::project(Vector &v) const {
    for (size_t s = 0; s < dim_; s++) {
        if (!in_l_[s]) v[s] = T(0);
    }
}

template <typename T>
void ClusterSpace<T>::resolvent(Vector &v, int k) const {
    for (size_t s = 0; s < dim_; s++) {
        if (is_zero(v[s])) continue;
        if (in_l_[s]) {
            v[s] = T(0);
            continue;
        }
        T d = reference_energy_ - energy_[s];
        if (vanishes(d)) throw std::domain_error("resolvent hit a state degenerate with the reference manifold");
        T f = T(1) / d;
        for (int i = 0; i < k; i++) v[s] *= f;
    }
}

template <typename T>
T ClusterSpace<T>::from_rational(const Rational &r) const {
    if constexpr (std::is_same_v<T, Rational>) {
        return r;
    } else {
        return to_double(r);
    }
}

template <typename T>
void ClusterSpace<T>::axpy(Vector &y, const T &a, const Vector &x) const {
    if (is_zero(a)) return;
    for (size_t s = 0; s < dim_; s++) {
        if (!is_zero(x[s])) y[s] += a * x[s];
    }
}

template <typename T>
T ClusterSpace<T>::dot(const Vector &a, const Vector &b) const {
    T acc(0);
    for (size_t s = 0; s < dim_; s++) {
        if (!is_zero(a[s]) && !is_zero(b[s])) acc += a[s] * b[s];
    }
    return acc;
}

template <typename T>
Series<T> GroundStateSeries<T>::norm() const {
    int n = static_cast<int>(psi.size()) - 1;
    Series<T> s(n);
    for (int k = 0; k <= n; k++) {
        T acc(0);
        for (int a = 0; a <= k; a++) {
            const auto &x = psi[a], &y = psi[k - a];
            for (size_t i = 0; i < x.size(); i++) {
                if (!is_zero(x[i]) && !is_zero(y[i])) acc += x[i] * y[i];
            }
        }
        s[k] = acc;
    }
    return s;
}

template <typename T>
Series<T> GroundStateSeries<T>::overlap(const std::vector<T> &bra) const {
    int n = static_cast<int>(psi.size()) - 1;
    if (is_zero(bra.at(0))) throw std::domain_error("bra has no vacuum amplitude");
    Series<T> s(n);
    for (int k = 0; k <= n; k++) {
        T acc(0);
        for (size_t i = 0; i < bra.size(); i++) {
            if (!is_zero(psi[k][i])) acc += bra[i] * psi[k][i];
        }
        s[k] = acc / bra[0];
    }
    return s;
}

template <typename T>
GroundStateSeries<T> rayleigh_schrodinger(const ClusterSpace<T> &space, int order) {
    GroundStateSeries<T> r;
    r.energy.assign(order + 1, T(0));
    r.psi.push_back(space.basis_vector(0));
    for (int k = 1; k <= order; k++) {
        auto w = space.apply_v_all(r.psi[k - 1]);
        r.energy[k] = w[0];
        // (E0 - H0) psi_k = V psi_{k-1} - sum_{j=1}^{k} E_j psi_{k-j}
        for (int j = 1; j <= k; j++) {
            if (!is_zero(r.energy[j])) space.axpy(w, -r.energy[j], r.psi[k - j]);
        }
        space.resolvent(w, 1);
        r.psi.push_back(std::move(w));
    }
    return r;
}

template <typename T>
std::vector<T> product_state(const ClusterSpace<T> &space, const std::vector<T> &amplitudes) {
    std::vector<T> v(space.dim(), T(1));
    for (size_t s = 0; s < space.dim(); s++) {
        for (int site = 0; site < space.num_sites(); site++) v[s] *= amplitudes.at(space.label(s, site));
    }
    return v;
}

template class ClusterSpace<double>;
template class ClusterSpace<Rational>;
template struct GroundStateSeries<double>;
template struct GroundStateSeries<Rational>;
template GroundStateSeries<double> rayleigh_schrodinger(const ClusterSpace<double> &, int);
template GroundStateSeries<Rational> rayleigh_schrodinger(const ClusterSpace<Rational> &, int);
template std::vector<double> product_state(const ClusterSpace<double> &, const std::vector<double> &);
template std::vector<Rational> product_state(const ClusterSpace<Rational> &, const std::vector<Rational> &);

}  // namespace cavo
