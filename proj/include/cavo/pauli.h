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

#ifndef CAVO_PAULI_H_
#define CAVO_PAULI_H_

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cavo/lattice.h"

namespace cavo {

/// i^phase * prod_q X_q^{x_q} Z_q^{z_q} on up to 64 qubits (qubit index = 4*site + leg).
/// A Y letter is stored as x = z = 1 with one extra power of i, since Y = i X Z.
class PauliString {
   public:
    PauliString() = default;
    static PauliString identity() { return {}; }
    /// i^k times the identity.
    static PauliString scalar(int k) { return {0, 0, k}; }
    static PauliString single(int qubit, char letter);
    static PauliString x(int qubit) { return single(qubit, 'X'); }
    static PauliString z(int qubit) { return single(qubit, 'Z'); }

    uint64_t xs() const { return x_; }
    uint64_t zs() const { return z_; }
    /// Exponent of i in front of the X^x Z^z product form.
    int raw_phase() const { return phase_; }
    char letter(int qubit) const;
    /// Phase in front of the letter form (+X1 Y2 ...), as an exponent of i.
    int letter_phase() const;
    std::complex<double> letter_coefficient() const;
    bool is_identity() const { return x_ == 0 && z_ == 0; }

    friend PauliString operator*(const PauliString &a, const PauliString &b);
    PauliString &operator*=(const PauliString &b) { return *this = *this * b; }
    friend bool operator==(const PauliString &, const PauliString &) = default;

    /// Image of a basis state: op|b> = amplitude |b'>.
    std::pair<uint64_t, std::complex<double>> apply(uint64_t basis) const;

    /// "+X1 Z2" style, qubits named by index (or site:leg when leg-aware naming is requested).
    std::string str(bool site_leg_names = false) const;

   private:
    PauliString(uint64_t x, uint64_t z, int phase) : x_(x), z_(z), phase_(phase & 3) {}
    uint64_t x_ = 0, z_ = 0;
    int phase_ = 0;
};

PauliString multiply(const PauliString &a, const PauliString &b);
bool commutes(const PauliString &a, const PauliString &b);

/// Conjugation by the product of CZ gates on the given bonds: X_u -> X_u Z_xi(u), Z fixed.
PauliString cz_conjugate(const PauliString &op, const std::vector<Bond> &bonds);

enum class Basis { physical, local, diagonal };

struct DenseOperator {
    Eigen::MatrixXcd matrix;
    Basis basis = Basis::physical;
    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-12) const;
};

/// Kronecker embedding; qubit_order[0] is the least significant bit.
DenseOperator to_dense(const PauliString &op, const std::vector<int> &qubit_order);

struct StabilizerSet {
    std::vector<PauliString> physical;  // K_mu = prod_i X_(mu,i) Z_xi(mu,i)
    std::vector<PauliString> local;     // CZ image, X on the four legs
};
StabilizerSet cluster_stabilizers(const ClusterGraph &lattice);

struct PauliTerm {
    double coefficient;
    PauliString op;
};
using PauliSum = std::vector<PauliTerm>;

struct Couplings {
    double lambda_xz = 0;
    double h_z = 0;
    double lambda_zz = 0;
};

/// Physical-frame H = -sum_ring ZZ - lambda_xz sum X_u Z_xi(u) - h_z sum Z - lambda_zz sum_bonds ZZ
/// (energies in units of g). Open legs carry a bare X.
PauliSum cluster_hamiltonian(const ClusterGraph &lattice, const Couplings &c);
PauliSum cz_conjugate(const PauliSum &h, const std::vector<Bond> &bonds);

}  // namespace cavo

#endif
