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

#include "cavo/site_model.h"

#include <cmath>

#include "cavo/local_spectrum.h"

namespace cavo {

SiteModel<double> full_site_model(double lambda_xz) {
    SiteSpectrum s = diagonalize_site(lambda_xz, 0);
    SiteModel<double> m;
    m.levels = kSiteDim;
    for (int i = 0; i < kSiteDim; i++) m.energies.push_back(s.energies[i] - s.energies[0]);
    m.energies[0] = 0;
    for (int leg = 0; leg < kLegs; leg++) {
        SiteMatrix z = s.z_in_eigenbasis(leg);
        m.leg_ops[leg].resize(kSiteDim);
        for (int col = 0; col < kSiteDim; col++) {
            for (int row = 0; row < kSiteDim; row++) {
                if (std::abs(z(row, col)) > 1e-13) m.leg_ops[leg][col].emplace_back(row, z(row, col));
            }
        }
    }
    m.coupling = -1;
    return m;
}

SiteModel<Rational> tfim_site_model() {
    SiteModel<Rational> m;
    m.levels = 2;
    m.energies = {Rational(0), Rational(2)};
    for (int leg = 0; leg < kLegs; leg++) {
        m.leg_ops[leg] = {{{1, Rational(1)}}, {{0, Rational(1)}}};
    }
    m.coupling = -1;
    return m;
}

SiteModel<double> to_double_model(const SiteModel<Rational> &m) {
    SiteModel<double> d;
    d.levels = m.levels;
    for (const auto &e : m.energies) d.energies.push_back(to_double(e));
    for (int leg = 0; leg < kLegs; leg++) {
        d.leg_ops[leg].resize(m.leg_ops[leg].size());
        for (size_t col = 0; col < m.leg_ops[leg].size(); col++) {
            for (const auto &[r, v] : m.leg_ops[leg][col]) d.leg_ops[leg][col].emplace_back(r, to_double(v));
        }
    }
    d.coupling = to_double(m.coupling);
    return d;
}

}  // namespace cavo
