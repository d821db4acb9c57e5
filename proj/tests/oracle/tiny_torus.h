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

// Shared brute-force pieces for the 1 x 2 and 2 x 2 torus checks.

#ifndef CAVO_TESTS_ORACLE_TINY_TORUS_H_
#define CAVO_TESTS_ORACLE_TINY_TORUS_H_

#include <vector>

#include "cavo/lattice.h"
#include "oracle/ed_oracle.h"

namespace cavo::oracle {

ClusterGraph torus(int lx, int ly);
Vec random_vector(size_t dim, unsigned seed);
/// Lowest eigenvalue of the 16-level site Hamiltonian.
double site_ground_energy(double lambda_xz, double h_z);
/// Ground state of the physical Hamiltonian: dense up to 8 qubits, else Lanczos in the
/// all-K = +1 sector (h_z = 0 only).
Eigenpair ground_state(const ClusterGraph &g, const Couplings &c);

struct PhysicalSeries {
    std::vector<double> vacuum_energy, fidelity, particle_energy;
};

/// Rayleigh-Schroedinger in lambda_zz from the qubit basis: vacuum energy, fidelity with the
/// cluster state, and the zero-momentum one-particle level.
PhysicalSeries physical_series(const ClusterGraph &g, double lambda_xz, int order);
/// The same three series from the library's cluster-space machinery.
PhysicalSeries library_series(const ClusterGraph &g, double lambda_xz, int order);

}  // namespace cavo::oracle

#endif
