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

#ifndef CAVO_TAKAHASHI_H_
#define CAVO_TAKAHASHI_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavo/series.h"

namespace cavo {

// A word is a list of slot exponents separated by V: slot k = 0 is P, k >= 1 is S^k,
// with S = (1-P)/(E_L - H0). "S^2VPVP" is {2, 0, 0}. A word of order n has n+1 slots.
// Gamma words end in P; H_eff words start and end in P. The order-0 H_eff word {0}
// stands for E_L P.

enum class Flavor { gamma, h_eff, h_eff_pvp_zero };

const char *flavor_name(Flavor f);
Flavor parse_flavor(const std::string &name);
int order_cap(Flavor f);

struct OperatorSequence {
    Rational prefactor;
    std::vector<int> slots;

    int order() const { return static_cast<int>(slots.size()) - 1; }
    std::string symbols() const;
};

std::string slot_symbols(const uint8_t *slots, int count);
/// Inverse of symbols(): "PVS^2VP" -> {0, 2, 0}.
std::vector<int> parse_symbols(const std::string &symbols);

/// Closed-form merged prefactors (exact). Zero for words that do not occur.
Rational gamma_coefficient(const std::vector<int> &slots);
Rational heff_coefficient(const std::vector<int> &slots);

/// Terms grouped by order, stored compactly (one byte per slot, shared prefactor table).
class EffectiveExpansion {
   public:
    EffectiveExpansion(Flavor flavor, int order);

    Flavor flavor() const { return flavor_; }
    int order() const { return order_; }
    size_t num_terms(int n) const { return coeff_index_.at(n).size(); }
    size_t total_terms() const;

    const uint8_t *slots(int n, size_t i) const { return &slots_.at(n)[i * (n + 1)]; }
    const Rational &prefactor(int n, size_t i) const { return table_[coeff_index_.at(n)[i]]; }
    OperatorSequence term(int n, size_t i) const;
    std::vector<OperatorSequence> terms(int n) const;

    /// Appends a term; slots has n+1 entries.
    void add(int n, const uint8_t *slots, const Rational &prefactor);
    void add(const OperatorSequence &s);

   private:
    uint32_t intern(const Rational &r);
    Flavor flavor_;
    int order_;
    std::vector<std::vector<uint8_t>> slots_;
    std::vector<std::vector<uint32_t>> coeff_index_;
    std::vector<Rational> table_;
    std::map<Rational, uint32_t> index_;
};

/// All nonzero terms up to order, from the closed-form prefactors.
EffectiveExpansion generate_gamma(int order);
EffectiveExpansion generate_heff(int order, bool pvp_zero);
EffectiveExpansion generate(Flavor flavor, int order);

/// Builds the expansion by literally multiplying out the projector series and the
/// inverse-square-root series, with like-term merging. Exponential cost; meant for
/// cross-checking the closed forms at low order (cap 9).
EffectiveExpansion generate_literal(Flavor flavor, int order);

/// Number of nonzero merged terms at each order 0..order without storing them.
/// progress (optional) is called after each finished order.
std::vector<uint64_t> count_terms(Flavor flavor, int order,
                                  const std::function<void(int, uint64_t)> &progress = {});
inline uint64_t cumulative(const std::vector<uint64_t> &counts) {
    uint64_t s = 0;
    for (auto c : counts) s += c;
    return s;
}

/// Text cache: "# cavo-takahashi 1 <flavor> <order>" then "num/den<TAB>symbols" per term.
void write_expansion(std::ostream &out, const EffectiveExpansion &e);
EffectiveExpansion read_expansion(std::istream &in);
/// Loads <dir>/<flavor>_<order>.txt when present and valid, else generates and writes it.
EffectiveExpansion cached_expansion(const std::string &dir, Flavor flavor, int order);

// ---------------------------------------------------------------------------------------
// Evaluation against a perturbed model.
//
// A Model provides
//   using Vector = ...; using Scalar = ...;
//   Vector apply_v(const Vector &v, int depth) const;  // depth 0 = rightmost V of the word
//   void project(Vector &v) const;                      // P
//   void resolvent(Vector &v, int k) const;             // S^k
//   Scalar reference_energy() const;                    // E_L
//   Scalar from_rational(const Rational &r) const;
//   void axpy(Vector &y, const Scalar &a, const Vector &x) const;
//   Vector zero_like(const Vector &v) const;
//   Scalar dot(const Vector &bra, const Vector &ket) const;  // no conjugation

template <typename Model>
void apply_slot(const Model &m, typename Model::Vector &v, int k) {
    if (k == 0) {
        m.project(v);
    } else {
        m.resolvent(v, k);
    }
}

/// prefactor * word |in>, symbols applied right to left.
template <typename Model>
typename Model::Vector evaluate_sequence(const OperatorSequence &seq, const Model &m,
                                         const typename Model::Vector &in, bool heff_order0_energy = true) {
    int n = seq.order();
    typename Model::Vector v = in;
    apply_slot(m, v, seq.slots[n]);
    for (int j = n - 1; j >= 0; j--) {
        v = m.apply_v(v, n - 1 - j);
        apply_slot(m, v, seq.slots[j]);
    }
    auto c = m.from_rational(seq.prefactor);
    if (n == 0 && heff_order0_energy) c = c * m.reference_energy();
    typename Model::Vector out = m.zero_like(v);
    m.axpy(out, c, v);
    return out;
}

/// <bra| word |ket> with the word split after `split` slots from the left (1 <= split <= order):
/// the left part acts on the bra (all symbols are real symmetric), the right part on the ket.
template <typename Model>
typename Model::Scalar matrix_element_split(const OperatorSequence &seq, const Model &m,
                                            const typename Model::Vector &bra,
                                            const typename Model::Vector &ket, int split,
                                            bool heff_order0_energy = true) {
    int n = seq.order();
    auto c = m.from_rational(seq.prefactor);
    if (n == 0) {
        typename Model::Vector k = ket;
        m.project(k);
        if (heff_order0_energy) c = c * m.reference_energy();
        return c * m.dot(bra, k);
    }
    if (split < 1 || split > n) throw std::invalid_argument("split position outside the word");
    // Right part: slots split..n with the V's between them, plus the V joining the halves.
    typename Model::Vector r = ket;
    apply_slot(m, r, seq.slots[n]);
    for (int j = n - 1; j >= split; j--) {
        r = m.apply_v(r, n - 1 - j);
        apply_slot(m, r, seq.slots[j]);
    }
    r = m.apply_v(r, n - split);
    // Left part: slots 0..split-1 read from the bra side.
    typename Model::Vector l = bra;
    apply_slot(m, l, seq.slots[0]);
    for (int j = 1; j < split; j++) {
        l = m.apply_v(l, n - j);
        apply_slot(m, l, seq.slots[j]);
    }
    return c * m.dot(l, r);
}

/// Suffix trie over the words of an expansion: shared right-hand parts are applied once.
class SequenceTrie {
   public:
    /// Words of order min_order..max_order (max_order < 0: all).
    explicit SequenceTrie(const EffectiveExpansion &e, int max_order = -1, int min_order = 0);

    int max_order() const { return max_order_; }
    size_t num_nodes() const { return nodes_.size(); }

    /// result[n] = sum over order-n words of prefactor * word |in>.
    template <typename Model>
    std::vector<typename Model::Vector> apply(const Model &m, const typename Model::Vector &in) const {
        std::vector<typename Model::Vector> out(max_order_ + 1, m.zero_like(in));
        typename Model::Vector v = in;
        m.project(v);
        descend(m, 0, v, out);
        return out;
    }

   private:
    struct Node {
        int slot = 0;
        int depth = 0;  // number of V's to the right of this slot
        bool terminal = false;
        Rational coefficient;
        std::vector<int> children;
    };

    template <typename Model>
    void descend(const Model &m, int node, const typename Model::Vector &v,
                 std::vector<typename Model::Vector> &out) const {
        const Node &nd = nodes_[node];
        if (nd.terminal) {
            auto c = m.from_rational(nd.coefficient);
            if (nd.depth == 0 && heff_) c = c * m.reference_energy();
            m.axpy(out[nd.depth], c, v);
        }
        if (nd.children.empty()) return;
        typename Model::Vector w = m.apply_v(v, nd.depth);
        for (int child : nd.children) {
            typename Model::Vector x = w;
            apply_slot(m, x, nodes_[child].slot);
            descend(m, child, x, out);
        }
    }

    std::vector<Node> nodes_;
    int max_order_;
    bool heff_;
};

}  // namespace cavo

#endif
