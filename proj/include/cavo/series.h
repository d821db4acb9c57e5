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

#ifndef CAVO_SERIES_H_
#define CAVO_SERIES_H_

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cavo {

using Rational = mpq_class;

std::string to_string(const Rational &r);
std::string to_string(double x);
Rational parse_rational(std::string_view text);

inline double to_double(const Rational &r) { return r.get_d(); }
inline double to_double(double x) { return x; }

/// Truncated power series sum_{k<=order} c_k x^k. Binary operations truncate at the smaller order.
template <typename T>
class Series {
   public:
    Series() : coeffs_(1, T(0)) {}
    explicit Series(int order, std::string variable = "x")
        : coeffs_(check_order(order) + 1, T(0)), variable_(std::move(variable)) {}
    Series(std::vector<T> coeffs, std::string variable = "x")
        : coeffs_(std::move(coeffs)), variable_(std::move(variable)) {
        if (coeffs_.empty()) throw std::invalid_argument("series needs at least one coefficient");
    }

    static Series constant(const T &c, int order, std::string variable = "x") {
        Series s(order, std::move(variable));
        s[0] = c;
        return s;
    }
    static Series monomial(const T &c, int power, int order, std::string variable = "x") {
        Series s(order, std::move(variable));
        if (power <= order) s[power] = c;
        return s;
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::string &variable() const { return variable_; }
    void set_variable(std::string v) { variable_ = std::move(v); }

    T &operator[](int k) { return coeffs_.at(k); }
    const T &operator[](int k) const { return coeffs_.at(k); }
    /// Coefficient or zero beyond the stored order.
    T coeff(int k) const { return k >= 0 && k <= order() ? coeffs_[k] : T(0); }
    const std::vector<T> &coeffs() const { return coeffs_; }

    Series truncated(int order) const {
        Series r(std::min(order, this->order()), variable_);
        for (int k = 0; k <= r.order(); k++) r[k] = coeffs_[k];
        return r;
    }
    Series extended(int order) const {
        Series r(order, variable_);
        for (int k = 0; k <= std::min(order, this->order()); k++) r[k] = coeffs_[k];
        return r;
    }

    Series &operator+=(const Series &o) {
        int n = std::min(order(), o.order());
        coeffs_.resize(n + 1);
        for (int k = 0; k <= n; k++) coeffs_[k] += o.coeffs_[k];
        return *this;
    }
    Series &operator-=(const Series &o) {
        int n = std::min(order(), o.order());
        coeffs_.resize(n + 1);
        for (int k = 0; k <= n; k++) coeffs_[k] -= o.coeffs_[k];
        return *this;
    }
    Series &operator*=(const T &s) {
        for (auto &c : coeffs_) c *= s;
        return *this;
    }
    friend Series operator+(Series a, const Series &b) { return a += b; }
    friend Series operator-(Series a, const Series &b) { return a -= b; }
    friend Series operator*(Series a, const T &s) { return a *= s; }
    friend Series operator*(const T &s, Series a) { return a *= s; }
    Series operator-() const {
        Series r = *this;
        for (auto &c : r.coeffs_) c = -c;
        return r;
    }
    friend Series operator*(const Series &a, const Series &b) {
        Series r(std::min(a.order(), b.order()), a.variable_);
        for (int i = 0; i <= r.order(); i++) {
            if (a.coeffs_[i] == T(0)) continue;
            for (int j = 0; i + j <= r.order(); j++) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return r;
    }
    friend Series operator/(const Series &a, const Series &b) { return a * b.inverse(); }
    friend bool operator==(const Series &a, const Series &b) {
        return a.order() == b.order() && a.coeffs_ == b.coeffs_;
    }

    Series inverse() const {
        if (coeffs_[0] == T(0)) throw std::domain_error("series inverse needs a nonzero constant term");
        Series r(order(), variable_);
        T inv0 = T(1) / coeffs_[0];
        r[0] = inv0;
        for (int n = 1; n <= order(); n++) {
            T acc(0);
            for (int k = 1; k <= n; k++) acc += coeffs_[k] * r[n - k];
            r[n] = -acc * inv0;
        }
        return r;
    }

    Series derivative() const {
        if (order() == 0) return Series(0, variable_);
        Series r(order() - 1, variable_);
        for (int k = 1; k <= order(); k++) r[k - 1] = coeffs_[k] * T(k);
        return r;
    }
    /// Antiderivative with zero constant; gains one order.
    Series integral() const {
        Series r(order() + 1, variable_);
        for (int k = 0; k <= order(); k++) r[k + 1] = coeffs_[k] / T(k + 1);
        return r;
    }

    /// log of a series with constant term exactly 1.
    Series log() const {
        if (coeffs_[0] != T(1)) throw std::domain_error("series log needs constant term 1");
        Series r(order(), variable_);
        // n r_n = n a_n - sum_k k r_k a_{n-k}
        for (int n = 1; n <= order(); n++) {
            T acc = coeffs_[n] * T(n);
            for (int k = 1; k < n; k++) acc -= r[k] * T(k) * coeffs_[n - k];
            r[n] = acc / T(n);
        }
        return r;
    }
    /// exp of a series with zero constant term.
    Series exp() const {
        if (coeffs_[0] != T(0)) throw std::domain_error("series exp needs zero constant term");
        Series r(order(), variable_);
        r[0] = T(1);
        for (int n = 1; n <= order(); n++) {
            T acc(0);
            for (int k = 1; k <= n; k++) acc += T(k) * coeffs_[k] * r[n - k];
            r[n] = acc / T(n);
        }
        return r;
    }
    /// sqrt of a series with constant term exactly 1.
    Series sqrt() const {
        if (coeffs_[0] != T(1)) throw std::domain_error("series sqrt needs constant term 1");
        Series r(order(), variable_);
        r[0] = T(1);
        for (int n = 1; n <= order(); n++) {
            T acc = coeffs_[n];
            for (int k = 1; k < n; k++) acc -= r[k] * r[n - k];
            r[n] = acc / T(2);
        }
        return r;
    }
    /// f(inner(x)); inner must have zero constant term.
    Series compose(const Series &inner) const {
        if (inner[0] != T(0)) throw std::domain_error("compose needs inner constant term 0");
        int n = std::min(order(), inner.order());
        Series r = Series::constant(coeffs_[order()], n, inner.variable_);
        for (int k = order() - 1; k >= 0; k--) {
            r = r * inner.truncated(n);
            r[0] += coeffs_[k];
        }
        return r;
    }

    template <typename X>
    X evaluate(const X &x) const {
        X acc(0);
        for (int k = order(); k >= 0; k--) acc = acc * x + X(to_double_like<X>(coeffs_[k]));
        return acc;
    }

   private:
    template <typename X>
    static X to_double_like(const T &c) {
        if constexpr (std::is_same_v<X, T>) {
            return c;
        } else {
            return X(to_double(c));
        }
    }
    static int check_order(int order) {
        if (order < 0) throw std::invalid_argument("negative series order");
        return order;
    }
    std::vector<T> coeffs_;
    std::string variable_ = "x";
};

using RationalSeries = Series<Rational>;

inline Series<double> to_double_series(const RationalSeries &s) {
    Series<double> r(s.order(), s.variable());
    for (int k = 0; k <= s.order(); k++) r[k] = to_double(s[k]);
    return r;
}
inline Series<double> to_double_series(const Series<double> &s) { return s; }

}  // namespace cavo

#endif
