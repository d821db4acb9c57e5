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

#include "cavo/local_spectrum.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cavo/lattice.h"

namespace cavo {

namespace {

int z_sign(int state, int leg) { return ((state >> leg) & 1) ? -1 : 1; }

// Canonical orthonormal basis of span(cols): Gram-Schmidt on the projector's columns
// taken in index order, so the result does not depend on the solver's own basis choice.
Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd &cols) {
    Eigen::MatrixXd proj = cols * cols.transpose();
    Eigen::MatrixXd out(kSiteDim, cols.cols());
    int found = 0;
    for (int j = 0; j < kSiteDim && found < cols.cols(); j++) {
        Eigen::VectorXd v = proj.col(j);
        for (int k = 0; k < found; k++) v -= out.col(k).dot(v) * out.col(k);
        for (int k = 0; k < found; k++) v -= out.col(k).dot(v) * out.col(k);
        double n = v.norm();
        if (n < 1e-8) continue;
        out.col(found++) = v / n;
    }
    if (found != cols.cols()) throw std::logic_error("degenerate block canonicalization lost rank");
    return out;
}

void fix_phase(SiteVector &v) {
    int best = 0;
    for (int i = 1; i < kSiteDim; i++) {
        if (std::abs(v[i]) > std::abs(v[best]) + 1e-10) best = i;
    }
    if (v[best] < 0) v = -v;
}

}  // namespace

SiteMatrix site_hamiltonian(double lambda_xz, double h_z) {
    SiteMatrix h = SiteMatrix::Zero();
    for (int s = 0; s < kSiteDim; s++) {
        for (auto [i, j] : kRingEdges) h(s, s) -= z_sign(s, i) * z_sign(s, j);
        for (int leg = 0; leg < kLegs; leg++) {
            h(s, s) -= h_z * z_sign(s, leg);
            h(s ^ (1 << leg), s) -= lambda_xz;
        }
    }
    return h;
}

SiteMatrix site_parity_operator() {
    SiteMatrix k = SiteMatrix::Zero();
    for (int s = 0; s < kSiteDim; s++) k(s ^ 15, s) = 1;
    return k;
}

SiteMatrix site_z(int leg) {
    SiteMatrix z = SiteMatrix::Zero();
    for (int s = 0; s < kSiteDim; s++) z(s, s) = z_sign(s, leg);
    return z;
}

SiteVector logical_plus() {
    SiteVector p = SiteVector::Zero();
    p[0] = p[15] = 1 / std::sqrt(2.0);
    return p;
}

SiteMatrix SiteSpectrum::z_in_eigenbasis(int leg) const {
    return transform_R.transpose() * site_z(leg) * transform_R;
}

SiteSpectrum diagonalize_site(double lambda_xz, double h_z) {
    if (!std::isfinite(lambda_xz) || !std::isfinite(h_z)) throw std::invalid_argument("couplings must be finite");
    Eigen::SelfAdjointEigenSolver<SiteMatrix> solver(site_hamiltonian(lambda_xz, h_z));
    if (solver.info() != Eigen::Success) throw std::runtime_error("site diagonalization failed");
    const auto &vals = solver.eigenvalues();
    const auto &vecs = solver.eigenvectors();
    const SiteMatrix kloc = site_parity_operator();
    const bool conserved = h_z == 0;
    double tol = 1e-9 * std::max(1.0, vals.cwiseAbs().maxCoeff());

    SiteSpectrum out;
    out.lambda_xz = lambda_xz;
    out.h_z = h_z;
    int label = 0;
    for (int start = 0; start < kSiteDim;) {
        int end = start + 1;
        while (end < kSiteDim && vals[end] - vals[start] < tol) end++;
        int n = end - start;
        double energy = vals.segment(start, n).mean();
        Eigen::MatrixXd block = vecs.middleCols(start, n);
        std::vector<std::pair<int, Eigen::MatrixXd>> sectors;
        if (conserved) {
            // K^loc is an involution commuting with H; split the block into its +1 / -1 parts.
            Eigen::MatrixXd kb = block.transpose() * kloc * block;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ks(kb);
            for (int sign : {+1, -1}) {
                std::vector<int> idx;
                for (int j = 0; j < n; j++) {
                    if (std::abs(ks.eigenvalues()[j] - sign) < 1e-6) idx.push_back(j);
                }
                if (idx.empty()) continue;
                Eigen::MatrixXd sub(kSiteDim, idx.size());
                for (size_t j = 0; j < idx.size(); j++) sub.col(j) = block * ks.eigenvectors().col(idx[j]);
                sectors.emplace_back(sign, canonical_basis(sub));
            }
        } else {
            sectors.emplace_back(0, canonical_basis(block));
        }
        for (auto &[sign, basis] : sectors) {
            for (int j = 0; j < basis.cols(); j++) {
                SiteVector v = basis.col(j);
                fix_phase(v);
                out.energies[label] = energy;
                out.transform_R.col(label) = v;
                out.k_sector[label] = sign;
                label++;
            }
        }
        start = end;
    }
    return out;
}

std::array<double, kSiteDim> closed_form_energies(double l) {
    double s = std::sqrt(l * l * l * l + 1), r = std::sqrt(1 + l * l);
    double e0 = -2 * std::sqrt(2 + 2 * l * l + 2 * s);
    double e1 = -2 - 2 * r;
    double e2 = -2 * std::sqrt(std::max(0.0, 2 + 2 * l * l - 2 * s));
    double e5 = 2 - 2 * r;
    return {e0, e1, e2, -2 * l, -2 * l, e5, 0, 0, 0, 0, -e5, 2 * l, 2 * l, -e2, -e1, -e0};
}

double gap_closed_form(double l) {
    return -2 * (1 + std::sqrt(1 + l * l) - std::sqrt(2 + 2 * l * l + 2 * std::sqrt(l * l * l * l + 1)));
}

double c_coefficient(const SiteSpectrum &s, int leg) { return std::abs(s.z_in_eigenbasis(leg)(0, 1)); }

double c_coefficient(double lambda_xz) { return c_coefficient(diagonalize_site(lambda_xz, 0)); }

SiteScalars site_overlaps(const SiteSpectrum &s) {
    SiteVector plus = logical_plus();
    double a0 = s.transform_R.col(0).dot(plus), a1 = s.transform_R.col(1).dot(plus);
    SiteScalars out;
    out.gap = s.gap();
    out.c = c_coefficient(s);
    out.overlap0 = a0 * a0;
    // The first excited state sits in the K = -1 sector when K is conserved.
    out.overlap1 = s.h_z == 0 ? 0.0 : a1 * a1;
    return out;
}

SiteScalars site_scalars(double lambda_xz, double h_z) { return site_overlaps(diagonalize_site(lambda_xz, h_z)); }

}  // namespace cavo
