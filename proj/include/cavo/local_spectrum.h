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

#ifndef CAVO_LOCAL_SPECTRUM_H_
#define CAVO_LOCAL_SPECTRUM_H_

#include <Eigen/Dense>
#include <array>

namespace cavo {

constexpr int kSiteDim = 16;
using SiteMatrix = Eigen::Matrix<double, kSiteDim, kSiteDim>;
using SiteVector = Eigen::Matrix<double, kSiteDim, 1>;

/// -sum_ring Z Z - lambda_xz sum X - h_z sum Z on the four legs of one site (units of g).
/// Basis index bit i is leg i (leg 1 least significant).
SiteMatrix site_hamiltonian(double lambda_xz, double h_z);
/// X on all four legs.
SiteMatrix site_parity_operator();
/// Z on one leg.
SiteMatrix site_z(int leg);
/// (|0000> + |1111>)/sqrt(2).
SiteVector logical_plus();

struct SiteSpectrum {
    std::array<double, kSiteDim> energies{};
    SiteMatrix transform_R;              // columns are eigenvectors
    std::array<int, kSiteDim> k_sector{};  // +-1 at h_z = 0, 0 otherwise
    double lambda_xz = 0;
    double h_z = 0;

    double gap() const { return energies[1] - energies[0]; }
    /// R^T Z_leg R, the leg operator in the eigenbasis.
    SiteMatrix z_in_eigenbasis(int leg) const;
};

SiteSpectrum diagonalize_site(double lambda_xz, double h_z = 0);

/// Closed-form energies in label order |0> ... |15>.
std::array<double, kSiteDim> closed_form_energies(double lambda_xz);
double gap_closed_form(double lambda_xz);

/// |<0| Z_leg |1>| in the eigenbasis.
double c_coefficient(const SiteSpectrum &s, int leg = 0);
double c_coefficient(double lambda_xz);

struct SiteScalars {
    double gap = 0;
    double c = 0;
    double overlap0 = 0;
    double overlap1 = 0;
};
SiteScalars site_overlaps(const SiteSpectrum &s);
SiteScalars site_scalars(double lambda_xz, double h_z = 0);

}  // namespace cavo

#endif
