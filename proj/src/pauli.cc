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

#include "cavo/pauli.h"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace cavo {

namespace {

const std::complex<double> kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

uint64_t bit(int q) {
    if (q < 0 || q >= 64) throw std::out_of_range("qubit index outside 0..63");
    return uint64_t{1} << q;
}

}  // namespace

PauliString PauliString::single(int qubit, char letter) {
    switch (letter) {
        case 'I':
            return {};
        case 'X':
            return {bit(qubit), 0, 0};
        case 'Z':
            return {0, bit(qubit), 0};
        case 'Y':
            return {bit(qubit), bit(qubit), 1};
    }
    throw std::invalid_argument("unknown Pauli letter");
}

char PauliString::letter(int qubit) const {
    bool x = (x_ >> qubit) & 1, z = (z_ >> qubit) & 1;
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

int PauliString::letter_phase() const { return (phase_ - std::popcount(x_ & z_) % 4 + 4) & 3; }

std::complex<double> PauliString::letter_coefficient() const { return kIPowers[letter_phase()]; }

PauliString operator*(const PauliString &a, const PauliString &b) {
    // (X^a1 Z^b1)(X^a2 Z^b2) = (-1)^{b1 a2} X^{a1+a2} Z^{b1+b2} per qubit
    int sign = std::popcount(a.z_ & b.x_) & 1;
    return {a.x_ ^ b.x_, a.z_ ^ b.z_, a.phase_ + b.phase_ + 2 * sign};
}

PauliString multiply(const PauliString &a, const PauliString &b) { return a * b; }

bool commutes(const PauliString &a, const PauliString &b) {
    return ((std::popcount(a.xs() & b.zs()) + std::popcount(a.zs() & b.xs())) & 1) == 0;
}

std::pair<uint64_t, std::complex<double>> PauliString::apply(uint64_t basis) const {
    int sign = std::popcount(z_ & basis) & 1;
    return {basis ^ x_, kIPowers[(phase_ + 2 * sign) & 3]};
}

std::string PauliString::str(bool site_leg_names) const {
    std::ostringstream out;
    const char *signs[4] = {"+", "+i", "-", "-i"};
    out << signs[letter_phase()];
    if (is_identity()) {
        out << "I";
        return out.str();
    }
    bool first = true;
    for (int q = 0; q < 64; q++) {
        char l = letter(q);
        if (l == 'I') continue;
        if (!first) out << " ";
        first = false;
        out << l;
        if (site_leg_names) {
            out << "(" << q / kLegs << "," << q % kLegs + 1 << ")";
        } else {
            out << q;
        }
    }
    return out.str();
}

PauliString cz_conjugate(const PauliString &op, const std::vector<Bond> &bonds) {
    std::vector<int> partner(64, -1);
    for (const auto &b : bonds) {
        int qa = ClusterGraph::qubit_index(b.a), qb = ClusterGraph::qubit_index(b.b);
        partner.at(qa) = qb;
        partner.at(qb) = qa;
    }
    // i^k prod X^x prod Z^z maps to i^k prod (X_q Z_p(q))^{x_q} prod Z^z.
    PauliString result = PauliString::scalar(op.raw_phase());
    for (int q = 0; q < 64; q++) {
        if (!((op.xs() >> q) & 1)) continue;
        PauliString image = PauliString::x(q);
        if (partner[q] >= 0) image *= PauliString::z(partner[q]);
        result *= image;
    }
    for (int q = 0; q < 64; q++) {
        if ((op.zs() >> q) & 1) result *= PauliString::z(q);
    }
    return result;
}

bool DenseOperator::is_hermitian(double tol) const { return (matrix - matrix.adjoint()).norm() < tol; }

bool DenseOperator::is_unitary(double tol) const {
    auto n = matrix.rows();
    return (matrix * matrix.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm() < tol;
}

DenseOperator to_dense(const PauliString &op, const std::vector<int> &qubit_order) {
    uint64_t covered = 0;
    for (int q : qubit_order) covered |= bit(q);
    if ((op.xs() | op.zs()) & ~covered) throw std::invalid_argument("operator acts on a qubit missing from the order");
    int n = static_cast<int>(qubit_order.size());
    if (n > 16) throw std::invalid_argument("dense embedding limited to 16 qubits");
    uint64_t dim = uint64_t{1} << n;
    DenseOperator d{Eigen::MatrixXcd::Zero(dim, dim), Basis::physical};
    for (uint64_t b = 0; b < dim; b++) {
        uint64_t global = 0;
        for (int j = 0; j < n; j++) {
            if ((b >> j) & 1) global |= bit(qubit_order[j]);
        }
        auto [image, amp] = op.apply(global);
        uint64_t local = 0;
        for (int j = 0; j < n; j++) {
            if ((image >> qubit_order[j]) & 1) local |= uint64_t{1} << j;
        }
        d.matrix(local, b) = amp;
    }
    return d;
}

StabilizerSet cluster_stabilizers(const ClusterGraph &lattice) {
    if (lattice.num_qubits() > 64) throw std::invalid_argument("stabilizers limited to 64 qubits");
    StabilizerSet s;
    for (int mu = 0; mu < lattice.num_sites(); mu++) {
        PauliString k = PauliString::identity(), kl = PauliString::identity();
        for (int leg = 0; leg < kLegs; leg++) {
            PhysicalQubit q{mu, leg};
            PauliString f = PauliString::x(ClusterGraph::qubit_index(q));
            kl *= f;
            if (auto p = lattice.xi(q)) f *= PauliString::z(ClusterGraph::qubit_index(*p));
            k *= f;
        }
        s.physical.push_back(k);
        s.local.push_back(kl);
    }
    return s;
}

PauliSum cluster_hamiltonian(const ClusterGraph &lattice, const Couplings &c) {
    if (lattice.num_qubits() > 64) throw std::invalid_argument("Pauli sums limited to 64 qubits");
    PauliSum h;
    for (int mu = 0; mu < lattice.num_sites(); mu++) {
        for (auto [i, j] : kRingEdges) {
            h.push_back({-1.0, PauliString::z(kLegs * mu + i) * PauliString::z(kLegs * mu + j)});
        }
        for (int leg = 0; leg < kLegs; leg++) {
            PhysicalQubit q{mu, leg};
            PauliString t = PauliString::x(ClusterGraph::qubit_index(q));
            if (auto p = lattice.xi(q)) t *= PauliString::z(ClusterGraph::qubit_index(*p));
            if (c.lambda_xz != 0) h.push_back({-c.lambda_xz, t});
            if (c.h_z != 0) h.push_back({-c.h_z, PauliString::z(ClusterGraph::qubit_index(q))});
        }
    }
    if (c.lambda_zz != 0) {
        for (const auto &b : lattice.bonds()) {
            h.push_back({-c.lambda_zz, PauliString::z(ClusterGraph::qubit_index(b.a)) *
                                           PauliString::z(ClusterGraph::qubit_index(b.b))});
        }
    }
    return h;
}

PauliSum cz_conjugate(const PauliSum &h, const std::vector<Bond> &bonds) {
    PauliSum out;
    for (const auto &t : h) out.push_back({t.coefficient, cz_conjugate(t.op, bonds)});
    return out;
}

}  // namespace cavo
