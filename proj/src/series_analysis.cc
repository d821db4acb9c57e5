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

#include "cavo/series_analysis.h"

#include <spdlog/spdlog.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cavo/linked_cluster.h"
#include "cavo/quadrature.h"

namespace cavo {

RationalSeries taylor_of_gap(int order) {
    if (order < 0 || order > 12) throw std::invalid_argument("gap Taylor order must be 0..12");
    int n = std::max(order, 4);
    RationalSeries x2 = RationalSeries::monomial(Rational(1), 2, n);
    RationalSeries one = RationalSeries::constant(Rational(1), n);
    RationalSeries r = (one + x2).sqrt();                   // sqrt(1 + x^2)
    RationalSeries s = (one + x2 * x2).sqrt();              // sqrt(1 + x^4)
    // sqrt(2 + 2x^2 + 2 s) = 2 sqrt(1 + (x^2 + s - 1) / 2)
    RationalSeries inner = one + (x2 + s - one) * Rational(1, 2);
    RationalSeries big = inner.sqrt() * Rational(2);
    RationalSeries gap = (one + r - big) * Rational(-2);
    return gap.truncated(order);
}

// ---------------------------------------------------------------------------------------
// Pade.

double PadeApproximant::evaluate(double x) const {
    double p = 0, q = 0;
    for (int k = L; k >= 0; k--) p = p * x + numerator[k];
    for (int k = M; k >= 0; k--) q = q * x + denominator[k];
    return p / q;
}

std::vector<std::complex<double>> PadeApproximant::poles() const {
    int deg = M;
    while (deg > 0 && std::abs(denominator[deg]) < 1e-300) deg--;
    if (deg == 0) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; i++) comp(i, i - 1) = 1;
    for (int i = 0; i < deg; i++) comp(i, deg - 1) = -denominator[i] / denominator[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < deg; i++) out.push_back(es.eigenvalues()[i]);
    return out;
}

namespace {

// Solves the M x M Pade system exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    int n = static_cast<int>(b.size());
    std::vector<int> col(n);
    for (int i = 0; i < n; i++) col[i] = i;
    for (int k = 0; k < n; k++) {
        int pr = -1, pc = -1;
        for (int i = k; i < n && pr < 0; i++) {
            for (int j = k; j < n; j++) {
                if (sgn(a[i][col[j]]) != 0) {
                    pr = i;
                    pc = j;
                    break;
                }
            }
        }
        if (pr < 0) return std::nullopt;
        std::swap(a[k], a[pr]);
        std::swap(b[k], b[pr]);
        std::swap(col[k], col[pc]);
        for (int i = k + 1; i < n; i++) {
            if (sgn(a[i][col[k]]) == 0) continue;
            Rational f = a[i][col[k]] / a[k][col[k]];
            for (int j = k; j < n; j++) a[i][col[j]] -= f * a[k][col[j]];
            b[i] -= f * b[k];
        }
    }
    std::vector<Rational> x(n);
    for (int k = n - 1; k >= 0; k--) {
        Rational acc = b[k];
        for (int j = k + 1; j < n; j++) acc -= a[k][col[j]] * x[col[j]];
        x[col[k]] = acc / a[k][col[k]];
    }
    return x;
}

std::optional<std::vector<double>> solve_double(const Eigen::MatrixXd &a, const Eigen::VectorXd &b) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < a.rows()) return std::nullopt;
    Eigen::VectorXd x = lu.solve(b);
    double scale = std::max(1.0, b.norm());
    if ((a * x - b).norm() > 1e-10 * scale) return std::nullopt;
    return std::vector<double>(x.data(), x.data() + x.size());
}

template <typename T>
PadeApproximant pade_impl(const Series<T> &s, int L, int M) {
    if (L < 0 || M < 0) throw std::invalid_argument("Pade degrees must be non-negative");
    if (L + M > s.order()) throw std::invalid_argument("series too short for the requested Pade degrees");
    auto a = [&](int k) { return k < 0 ? T(0) : s[k]; };
    std::vector<T> b(M + 1, T(0));
    b[0] = T(1);
    if (M > 0) {
        bool ok = false;
        if constexpr (std::is_same_v<T, Rational>) {
            std::vector<std::vector<Rational>> A(M, std::vector<Rational>(M));
            std::vector<Rational> rhs(M);
            for (int i = 0; i < M; i++) {
                for (int j = 0; j < M; j++) A[i][j] = a(L + 1 + i - (j + 1));
                rhs[i] = -a(L + 1 + i);
            }
            if (auto x = solve_exact(A, rhs)) {
                for (int j = 0; j < M; j++) b[j + 1] = (*x)[j];
                ok = true;
            }
        } else {
            Eigen::MatrixXd A(M, M);
            Eigen::VectorXd rhs(M);
            for (int i = 0; i < M; i++) {
                for (int j = 0; j < M; j++) A(i, j) = a(L + 1 + i - (j + 1));
                rhs[i] = -a(L + 1 + i);
            }
            if (auto x = solve_double(A, rhs)) {
                for (int j = 0; j < M; j++) b[j + 1] = (*x)[j];
                ok = true;
            }
        }
        if (!ok) {
            if (L == 0) throw std::runtime_error("degenerate Pade table entry");
            spdlog::warn("Pade [{}/{}] is degenerate, falling back to [{}/{}]", L, M, L - 1, M);
            return pade_impl(s, L - 1, M);
        }
    }
    std::vector<T> p(L + 1, T(0));
    for (int k = 0; k <= L; k++) {
        for (int j = 0; j <= std::min(k, M); j++) p[k] += b[j] * a(k - j);
    }
    PadeApproximant out;
    out.L = L;
    out.M = M;
    for (auto &v : p) out.numerator.push_back(to_double(v));
    for (auto &v : b) out.denominator.push_back(to_double(v));
    if constexpr (std::is_same_v<T, Rational>) {
        out.exact_numerator = p;
        out.exact_denominator = b;
    }
    return out;
}

template <typename T>
DlogPade dlog_impl(const Series<T> &s, int L, int M) {
    if (!(to_double(s[0]) > 0)) throw std::invalid_argument("dlog Pade needs a positive constant term");
    if (s.order() < 1) throw std::invalid_argument("series too short for dlog Pade");
    Series<T> d = s.derivative() / s.truncated(s.order() - 1);
    DlogPade out;
    out.approximant = pade_impl(d, L, M);
    const auto &ap = out.approximant;
    for (auto z : ap.poles()) {
        if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z))) continue;
        if (z.real() <= 0) continue;
        if (!out.pole || z.real() < *out.pole) out.pole = z.real();
    }
    if (out.pole) {
        double x = *out.pole, p = 0, dq = 0;
        for (int k = ap.L; k >= 0; k--) p = p * x + ap.numerator[k];
        for (int k = ap.M; k >= 1; k--) dq = dq * x + k * ap.denominator[k];
        out.residue = p / dq;
    }
    return out;
}

}  // namespace

PadeApproximant pade(const RationalSeries &s, int L, int M) { return pade_impl(s, L, M); }
PadeApproximant pade(const Series<double> &s, int L, int M) { return pade_impl(s, L, M); }
DlogPade dlog_pade(const RationalSeries &s, int L, int M) { return dlog_impl(s, L, M); }
DlogPade dlog_pade(const Series<double> &s, int L, int M) { return dlog_impl(s, L, M); }

double dlog_pade_resummed(const DlogPade &d, double f0, double x) {
    if (x < 0) throw std::invalid_argument("resummation is only done for x >= 0");
    if (d.pole && x >= *d.pole) throw std::domain_error("beyond the critical point");
    // Also refuse when a pole of the approximant lies on [0, x] off the physical branch.
    for (auto z : d.approximant.poles()) {
        if (std::abs(z.imag()) < 1e-12 && z.real() >= 0 && z.real() <= x) {
            throw std::domain_error("approximant singular on the integration path");
        }
    }
    if (x == 0) return f0;
    double integral = integrate([&](double t) { return d.approximant.evaluate(t); }, 0.0, x, 1e-12);
    return f0 * std::exp(integral);
}

// ---------------------------------------------------------------------------------------
// External series files.

RationalSeries read_external_series(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file " + path);
    std::string line, variable = "x";
    int order = -1;
    std::vector<std::pair<int, Rational>> entries;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (order < 0) {
                std::istringstream h(line.substr(1));
                if (!(h >> variable >> order) || order < 0) {
                    throw std::runtime_error(path + ": header must be '# <variable> <order>'");
                }
            }
            continue;
        }
        if (order < 0) throw std::runtime_error(path + ": missing header");
        std::istringstream ls(line);
        int k;
        std::string value;
        if (!(ls >> k >> value) || k < 0 || k > order) {
            throw std::runtime_error(path + ": bad line " + std::to_string(lineno));
        }
        entries.emplace_back(k, parse_rational(value));
    }
    if (order < 0) throw std::runtime_error(path + ": empty series file");
    RationalSeries s(order, variable);
    for (auto &[k, v] : entries) s[k] = v;
    return s;
}

void write_external_series(const std::string &path, const RationalSeries &s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# " << s.variable() << " " << s.order() << "\n";
    for (int k = 0; k <= s.order(); k++) out << k << " " << to_string(s[k]) << "\n";
}

bool external_gap_matches_internal(const RationalSeries &external, int count) {
    if (external.order() < count) return false;
    RationalSeries internal = tfim_gap_series(std::min(count, kMaxHoppingOrder));
    for (int k = 0; k <= std::min(count, internal.order()); k++) {
        if (external[k] != internal[k]) return false;
    }
    return true;
}

double TfimGapModel::gap(double lambda) const { return dlog_pade_resummed(dlog, to_double(series[0]), lambda); }

TfimGapModel tfim_gap_model(const std::string &external_path) {
    TfimGapModel m;
    if (!external_path.empty()) {
        m.series = read_external_series(external_path);
        if (m.series.order() < 13) throw std::runtime_error("external gap series needs order 13");
        if (!external_gap_matches_internal(m.series)) {
            throw std::runtime_error("external gap series disagrees with the internal order-5 coefficients");
        }
        m.dlog = dlog_pade(m.series, 6, 6);
        m.external = true;
        return m;
    }
    static const RationalSeries internal = tfim_gap_series(kMaxHoppingOrder);
    m.series = internal;
    m.dlog = dlog_pade(m.series, 2, 2);
    return m;
}

const RationalSeries &tfim_fidelity_coefficients() {
    // Output of fidelity_series(12, tfim_polarized); the unit tests recompute it.
    static const RationalSeries s = [] {
        RationalSeries r(12, "lambda");
        const char *even[] = {"1", "-1/8", "-93/256", "-2961/2048", "-243005/32768", "-812949139/18874368",
                              "-17716040461601/65229815808"};
        for (int k = 0; k <= 6; k++) r[2 * k] = parse_rational(even[k]);
        return r;
    }();
    return s;
}

double d_tfim(double lambda, double lambda_c) {
    if (!(lambda_c > 0)) throw std::invalid_argument("critical coupling must be positive");
    if (std::abs(lambda) > 0.9 * lambda_c) throw std::domain_error("d_TFIM series untrusted beyond 0.9 lambda_c");
    return tfim_fidelity_coefficients().evaluate(lambda);
}

double d_tfim(double lambda) {
    static const double lc = tfim_gap_model().critical_point();
    return d_tfim(lambda, lc);
}

double corrected_critical_line(double lambda_xz) {
    if (!(lambda_xz > 0) || lambda_xz > 1) throw std::invalid_argument("lambda_xz must be in (0, 1]");
    Series<double> g = gap_series(hzz_hopping(kMaxHoppingOrder, lambda_xz));
    return dlog_pade(g, 2, 2).critical_point();
}

}  // namespace cavo
