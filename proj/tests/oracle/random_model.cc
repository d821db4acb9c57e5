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

#include "oracle/random_model.h"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace cavo::oracle {

using MatR = std::vector<std::vector<Real>>;

DenseTestModel::DenseTestModel(std::vector<Real> h0_diag, int reference_dim, std::vector<std::vector<Real>> v)
    : h0_(std::move(h0_diag)), l_(reference_dim), v_(std::move(v)) {
    int n = dim();
    if (l_ < 1 || l_ >= n) throw std::invalid_argument("reference dimension out of range");
    for (int i = 1; i < l_; i++) {
        if (h0_[i] != h0_[0]) throw std::invalid_argument("reference level must be degenerate");
    }
    for (int i = l_; i < n; i++) {
        if (h0_[i] == h0_[0]) throw std::invalid_argument("reference level must be isolated");
    }
    if (static_cast<int>(v_.size()) != n) throw std::invalid_argument("V has the wrong size");
}

DenseTestModel DenseTestModel::random(unsigned seed, int dim, int reference_dim) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> gap(0.7, 3.0), offset(-1.0, 1.0);
    std::normal_distribution<double> gauss;
    std::vector<Real> h0(dim);
    Real el = offset(rng);
    for (int i = 0; i < dim; i++) h0[i] = i < reference_dim ? el : el + Real(gap(rng));
    std::vector<std::vector<Real>> v(dim, std::vector<Real>(dim));
    for (int i = 0; i < dim; i++) {
        for (int j = 0; j <= i; j++) v[i][j] = v[j][i] = Real(gauss(rng));
    }
    return DenseTestModel(h0, reference_dim, v);
}

DenseTestModel::Vector DenseTestModel::apply_v(const Vector &x, int) const {
    Vector y(x.size(), Real(0));
    for (size_t i = 0; i < x.size(); i++) {
        for (size_t j = 0; j < x.size(); j++) y[i] += v_[i][j] * x[j];
    }
    return y;
}

void DenseTestModel::project(Vector &x) const {
    for (int i = l_; i < dim(); i++) x[i] = 0;
}

void DenseTestModel::resolvent(Vector &x, int k) const {
    for (int i = 0; i < l_; i++) x[i] = 0;
    for (int i = l_; i < dim(); i++) x[i] *= pow(1 / (h0_[0] - h0_[i]), k);
}

Real DenseTestModel::from_rational(const Rational &r) const {
    return Real(r.get_num().get_str()) / Real(r.get_den().get_str());
}

void DenseTestModel::axpy(Vector &y, const Real &a, const Vector &x) const {
    for (size_t i = 0; i < y.size(); i++) y[i] += a * x[i];
}

Real DenseTestModel::dot(const Vector &a, const Vector &b) const {
    Real s = 0;
    for (size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
    return s;
}

DenseTestModel::Vector DenseTestModel::basis(int i) const {
    Vector e(h0_.size(), Real(0));
    e[i] = 1;
    return e;
}

namespace {

// Cyclic Jacobi rotations; a is symmetric.
std::vector<Real> symmetric_eigenvalues(MatR a) {
    int n = static_cast<int>(a.size());
    const Real tiny = Real("1e-48");
    for (int sweep = 0; sweep < 100; sweep++) {
        Real off = 0;
        for (int p = 0; p < n; p++) {
            for (int q = p + 1; q < n; q++) off += a[p][q] * a[p][q];
        }
        if (off < tiny * tiny) break;
        for (int p = 0; p < n; p++) {
            for (int q = p + 1; q < n; q++) {
                if (a[p][q] == 0) continue;
                Real theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                Real t = (theta >= 0 ? 1 : -1) / (abs(theta) + sqrt(theta * theta + 1));
                Real c = 1 / sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; k++) {
                    Real akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; k++) {
                    Real apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<Real> ev(n);
    for (int i = 0; i < n; i++) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace

std::vector<Real> DenseTestModel::exact_spectrum(const Real &eps) const {
    int n = dim();
    MatR h(n, std::vector<Real>(n));
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) h[i][j] = eps * v_[i][j] + (i == j ? h0_[i] : Real(0));
    }
    return symmetric_eigenvalues(h);
}

std::vector<std::vector<std::vector<Real>>> reference_blocks(const DenseTestModel &m, const EffectiveExpansion &e) {
    int l = m.reference_dim();
    std::vector<std::vector<std::vector<Real>>> blocks(e.order() + 1,
                                                       std::vector<std::vector<Real>>(m.dim(), std::vector<Real>(l)));
    SequenceTrie trie(e);
    for (int b = 0; b < l; b++) {
        auto out = trie.apply(m, m.basis(b));
        for (int n = 0; n <= e.order(); n++) {
            for (int a = 0; a < m.dim(); a++) blocks[n][a][b] = out[n][a];
        }
    }
    return blocks;
}

std::vector<Real> effective_spectrum(const DenseTestModel &m, const EffectiveExpansion &heff, const Real &eps,
                                     int order) {
    auto blocks = reference_blocks(m, heff);
    int l = m.reference_dim();
    MatR h(l, std::vector<Real>(l, Real(0)));
    Real p = 1;
    for (int n = 0; n <= order; n++, p *= eps) {
        for (int a = 0; a < l; a++) {
            // Symmetrized against rounding; hermiticity is checked separately.
            for (int b = 0; b < l; b++) h[a][b] += p * (blocks[n][a][b] + blocks[n][b][a]) / 2;
        }
    }
    return symmetric_eigenvalues(h);
}

TakahashiCheck check_takahashi(const DenseTestModel &m, int max_order) {
    TakahashiCheck r;
    EffectiveExpansion heff = generate(Flavor::h_eff, max_order);
    EffectiveExpansion gamma = generate(Flavor::gamma, max_order);
    int l = m.reference_dim();

    auto hb = reference_blocks(m, heff);
    for (int n = 0; n <= max_order; n++) {
        for (int a = 0; a < l; a++) {
            for (int b = 0; b < l; b++) {
                r.hermiticity_defect = std::max(r.hermiticity_defect, abs(hb[n][a][b] - hb[n][b][a]).convert_to<double>());
            }
        }
    }

    auto residual = [&](const Real &eps, int n) {
        auto exact = m.exact_spectrum(eps);
        auto eff = effective_spectrum(m, heff, eps, n);
        Real worst = 0;
        for (int i = 0; i < l; i++) worst = std::max<Real>(worst, abs(exact[i] - eff[i]));
        return worst;
    };
    for (int n = 1; n <= max_order; n++) {
        Real big = residual(Real("1e-2"), n), small = residual(Real("1e-3"), n);
        r.slopes.push_back(log10(big / small).convert_to<double>());
    }

    auto gb = reference_blocks(m, gamma);
    for (int n = 0; n <= max_order; n++) {
        for (int a = 0; a < l; a++) {
            for (int b = 0; b < l; b++) {
                Real s = 0;
                for (int j = 0; j <= n; j++) {
                    for (int i = 0; i < m.dim(); i++) s += gb[j][i][a] * gb[n - j][i][b];
                }
                if (n == 0 && a == b) s -= 1;
                r.gamma_defect = std::max(r.gamma_defect, abs(s).convert_to<double>());
            }
        }
    }
    return r;
}

}  // namespace cavo::oracle
