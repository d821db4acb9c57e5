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

#ifndef CAVO_SITE_MODEL_H_
#define CAVO_SITE_MODEL_H_

#include <array>
#include <utility>
#include <vector>

#include "cavo/lattice.h"
#include "cavo/series.h"

namespace cavo {

/// Per-site data for perturbing a product of independent sites by a bond coupling
/// V = coupling * sum_bonds O_leg(a) O_leg'(b), written in the unperturbed eigenbasis.
/// Label 0 is the site ground state, label 1 the excitation that carries the quasi-particle.
template <typename T>
struct SiteModel {
    int levels = 0;
    std::vector<T> energies;  // relative to label 0
    // leg_ops[leg][col] lists the (row, value) pairs of column col.
    std::array<std::vector<std::vector<std::pair<int, T>>>, kLegs> leg_ops;
    T coupling = T(-1);

    T element(int leg, int row, int col) const {
        for (const auto &[r, v] : leg_ops[leg][col]) {
            if (r == row) return v;
        }
        return T(0);
    }
};

/// The 16-level site of the full model at lambda_xz: energies E_i - E_0 and z_leg = R^T Z R.
/// The series variable is lambda_zz/g.
SiteModel<double> full_site_model(double lambda_xz);

/// Two-level effective site: energies {0, 2}, X on every leg. The series variable is
/// lambda = 2 lambda_zz c^2 / Delta E and energies come out in units of Delta E / 2.
SiteModel<Rational> tfim_site_model();

SiteModel<double> to_double_model(const SiteModel<Rational> &m);

}  // namespace cavo

#endif
