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

#include "cavo/takahashi.h"

#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace cavo {

const char *flavor_name(Flavor f) {
    switch (f) {
        case Flavor::gamma:
            return "gamma";
        case Flavor::h_eff:
            return "heff";
        case Flavor::h_eff_pvp_zero:
            return "heff_pvp0";
    }
    return "?";
}

Flavor parse_flavor(const std::string &name) {
    for (Flavor f : {Flavor::gamma, Flavor::h_eff, Flavor::h_eff_pvp_zero}) {
        if (name == flavor_name(f)) return f;
    }
    throw std::invalid_argument("unknown flavor '" + name + "' (gamma, heff, heff_pvp0)");
}

int order_cap(Flavor f) {
    switch (f) {
        case Flavor::gamma:
            return 13;
        case Flavor::h_eff:
            return 14;
        case Flavor::h_eff_pvp_zero:
            return 17;
    }
    return 0;
}

namespace {

void check_order(Flavor f, int order) {
    if (order < 0 || order > order_cap(f)) {
        throw std::invalid_argument(std::string("order outside 0..") + std::to_string(order_cap(f)) + " for " +
                                    flavor_name(f));
    }
}

std::string slot_name(int k) {
    if (k == 0) return "P";
    if (k == 1) return "S";
    return "S^" + std::to_string(k);
}

using i128 = __int128;

// gamma_r = binom(2r, r) / 4^r, scaled by 4^(n+1) so it is an integer for r <= n + 1.
std::vector<i128> scaled_gammas(int n) {
    std::vector<i128> g(n + 2);
    i128 b = 1;
    for (int r = 0; r <= n + 1; r++) {
        if (r > 0) b = b * (2 * (2 * r - 1)) / r;
        i128 p = 1;
        for (int j = r; j < n + 1; j++) p *= 4;
        g[r] = b * p;
    }
    return g;
}

Rational from_i128(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<uint64_t>(u >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<uint64_t>(u)));
    mpz_class z = (hi << 64) + lo;
    if (neg) z = -z;
    return Rational(z);
}

Rational pow4(int e) {
    mpz_class z = 1;
    z <<= 2 * e;
    return Rational(z);
}

// Enumerates the words of one order with their scaled merged prefactor; the prefactor
// equals value / 4^(2(n+1)) for h_eff and sign * gamma_m for gamma.
class WordWalker {
   public:
    WordWalker(Flavor flavor, int n) : flavor_(flavor), n_(n), k_(n + 1, 0), g_(scaled_gammas(n)) {}

    // f(const uint8_t *slots, i128 scaled_value) for every word with a nonzero prefactor.
    template <typename F>
    void run(F &&f) {
        if (n_ == 0) {
            k_[0] = 0;
            f(k_.data(), flavor_ == Flavor::gamma ? i128(1) : g_[0] * g_[0]);
            return;
        }
        if (flavor_ == Flavor::gamma) {
            gamma_rec(0, n_, 0, 0, 0, f);
        } else {
            k_[0] = 0;
            // slot 0 is a P at zero excess: the first C0 entry
            zeros_.clear();
            zeros_.push_back({0, true});
            heff_rec(1, n_ - 1, -1, 1, f);
        }
    }

    // Gamma prefactor from (sign, m).
    static Rational gamma_value(int sign, int m) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), 2 * m, m);
        Rational r(b);
        r /= pow4(m);
        return sign < 0 ? Rational(-r) : r;
    }

   private:
    struct Zero {
        int pos;
        bool c0;  // true: C0 (zero excess before it), false: C1 (excess -1)
    };

    template <typename F>
    void gamma_rec(int p, int rem, int excess, int zeros, int m, F &f) {
        if (p == n_) {
            if (rem != 0) return;
            k_[n_] = 0;
            // encode sign and m in one integer: (+-)(m+1)
            f(k_.data(), (zeros & 1) ? -i128(m + 1) : i128(m + 1));
            return;
        }
        for (int v = 0; v <= rem; v++) {
            k_[p] = static_cast<uint8_t>(v);
            gamma_rec(p + 1, rem - v, excess + v - 1, zeros + (v == 0), m + (v == 0 && excess == 0), f);
        }
    }

    template <typename F>
    void heff_rec(int p, int rem, int excess, int zero_count, F &f) {
        if (p == n_) {
            if (rem != 0) return;
            if (flavor_ == Flavor::h_eff_pvp_zero && (n_ == 1 || k_[n_ - 1] == 0)) return;
            k_[n_] = 0;
            // sum_i L_i gamma_{r_i}, r_i = number of C1 zeros after the i-th C0 zero.
            i128 total = 0;
            int c1_after = 0, c0_seen = 0;
            for (const auto &z : zeros_) c1_after += !z.c0;
            for (const auto &z : zeros_) {
                if (z.c0) {
                    i128 L = c0_seen == 0 ? g_[0] : g_[c0_seen] - g_[c0_seen - 1];
                    total += L * g_[c1_after];
                    c0_seen++;
                } else {
                    c1_after--;
                }
            }
            if (total == 0) return;
            f(k_.data(), ((zero_count - 1) & 1) ? -total : total);
            return;
        }
        for (int v = 0; v <= rem; v++) {
            if (v == 0 && flavor_ == Flavor::h_eff_pvp_zero && k_[p - 1] == 0) continue;
            k_[p] = static_cast<uint8_t>(v);
            bool pushed = false;
            if (v == 0 && (excess == 0 || excess == -1)) {
                zeros_.push_back({p, excess == 0});
                pushed = true;
            }
            heff_rec(p + 1, rem - v, excess + v - 1, zero_count + (v == 0), f);
            if (pushed) zeros_.pop_back();
        }
    }

    Flavor flavor_;
    int n_;
    std::vector<uint8_t> k_;
    std::vector<i128> g_;
    std::vector<Zero> zeros_;
};

// Prefactor cache keyed by the scaled integer of one order.
class PrefactorCache {
   public:
    PrefactorCache(Flavor f, int n) : flavor_(f), n_(n) {}
    const Rational &get(i128 v) {
        auto key = std::make_pair(static_cast<int64_t>(v >> 64), static_cast<uint64_t>(v));
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Rational r;
        if (flavor_ == Flavor::gamma) {
            int sign = v < 0 ? -1 : 1;
            int m = static_cast<int>(v < 0 ? -v : v) - 1;
            r = WordWalker::gamma_value(sign, m);
        } else {
            r = from_i128(v) / pow4(2 * (n_ + 1));
        }
        return cache_.emplace(key, r).first->second;
    }

   private:
    Flavor flavor_;
    int n_;
    std::map<std::pair<int64_t, uint64_t>, Rational> cache_;
};

}  // namespace

std::string slot_symbols(const uint8_t *slots, int count) {
    std::string s;
    for (int i = 0; i < count; i++) {
        if (i > 0) s += "V";
        s += slot_name(slots[i]);
    }
    return s;
}

std::string OperatorSequence::symbols() const {
    std::vector<uint8_t> b(slots.begin(), slots.end());
    return slot_symbols(b.data(), static_cast<int>(b.size()));
}

std::vector<int> parse_symbols(const std::string &symbols) {
    std::vector<int> out;
    std::stringstream in(symbols);
    std::string tok;
    while (std::getline(in, tok, 'V')) {
        if (tok == "P") {
            out.push_back(0);
        } else if (tok == "S") {
            out.push_back(1);
        } else if (tok.size() > 2 && tok.compare(0, 2, "S^") == 0) {
            int k = std::stoi(tok.substr(2));
            if (k < 1) throw std::invalid_argument("bad resolvent power in '" + symbols + "'");
            out.push_back(k);
        } else {
            throw std::invalid_argument("bad symbol string '" + symbols + "'");
        }
    }
    if (out.empty() || symbols.back() == 'V') throw std::invalid_argument("bad symbol string '" + symbols + "'");
    return out;
}

Rational gamma_coefficient(const std::vector<int> &slots) {
    int n = static_cast<int>(slots.size()) - 1;
    if (n < 0 || slots[n] != 0) return 0;
    int sum = 0, excess = 0, zeros = 0, m = 0;
    for (int p = 0; p < n; p++) {
        if (slots[p] < 0) return 0;
        sum += slots[p];
        if (slots[p] == 0) {
            zeros++;
            if (excess == 0) m++;
        }
        excess += slots[p] - 1;
    }
    if (sum != n) return 0;
    return WordWalker::gamma_value((zeros & 1) ? -1 : 1, m);
}

Rational heff_coefficient(const std::vector<int> &slots) {
    int n = static_cast<int>(slots.size()) - 1;
    if (n < 0 || slots[0] != 0 || slots[n] != 0) return 0;
    if (n == 0) return 1;
    int sum = 0, excess = 0, zeros = 0;
    std::vector<std::pair<int, bool>> marks;  // (position, is C0)
    for (int p = 0; p < n; p++) {
        if (slots[p] < 0) return 0;
        sum += slots[p];
        if (slots[p] == 0) {
            zeros++;
            if (excess == 0 || excess == -1) marks.push_back({p, excess == 0});
        }
        excess += slots[p] - 1;
    }
    if (sum != n - 1) return 0;
    auto gam = [](int r) { return WordWalker::gamma_value(1, r); };
    Rational total = 0;
    int c1_after = 0, c0_seen = 0;
    for (auto &mk : marks) c1_after += !mk.second;
    for (auto &mk : marks) {
        if (mk.second) {
            Rational L = c0_seen == 0 ? Rational(1) : Rational(gam(c0_seen) - gam(c0_seen - 1));
            total += L * gam(c1_after);
            c0_seen++;
        } else {
            c1_after--;
        }
    }
    return (zeros - 1) % 2 == 0 ? total : Rational(-total);
}

EffectiveExpansion::EffectiveExpansion(Flavor flavor, int order)
    : flavor_(flavor), order_(order), slots_(order + 1), coeff_index_(order + 1) {
    if (order < 0) throw std::invalid_argument("negative expansion order");
}

size_t EffectiveExpansion::total_terms() const {
    size_t s = 0;
    for (const auto &c : coeff_index_) s += c.size();
    return s;
}

uint32_t EffectiveExpansion::intern(const Rational &r) {
    auto [it, inserted] = index_.emplace(r, static_cast<uint32_t>(table_.size()));
    if (inserted) table_.push_back(r);
    return it->second;
}

void EffectiveExpansion::add(int n, const uint8_t *slots, const Rational &prefactor) {
    if (n < 0 || n > order_) throw std::out_of_range("term order outside the expansion");
    slots_[n].insert(slots_[n].end(), slots, slots + n + 1);
    coeff_index_[n].push_back(intern(prefactor));
}

void EffectiveExpansion::add(const OperatorSequence &s) {
    std::vector<uint8_t> b(s.slots.begin(), s.slots.end());
    add(s.order(), b.data(), s.prefactor);
}

OperatorSequence EffectiveExpansion::term(int n, size_t i) const {
    OperatorSequence s;
    s.prefactor = prefactor(n, i);
    const uint8_t *p = slots(n, i);
    s.slots.assign(p, p + n + 1);
    return s;
}

std::vector<OperatorSequence> EffectiveExpansion::terms(int n) const {
    std::vector<OperatorSequence> out;
    for (size_t i = 0; i < num_terms(n); i++) out.push_back(term(n, i));
    return out;
}

EffectiveExpansion generate(Flavor flavor, int order) {
    check_order(flavor, order);
    EffectiveExpansion e(flavor, order);
    for (int n = 0; n <= order; n++) {
        PrefactorCache cache(flavor, n);
        WordWalker w(flavor, n);
        w.run([&](const uint8_t *slots, i128 v) { e.add(n, slots, cache.get(v)); });
    }
    return e;
}

EffectiveExpansion generate_gamma(int order) { return generate(Flavor::gamma, order); }

EffectiveExpansion generate_heff(int order, bool pvp_zero) {
    return generate(pvp_zero ? Flavor::h_eff_pvp_zero : Flavor::h_eff, order);
}

std::vector<uint64_t> count_terms(Flavor flavor, int order, const std::function<void(int, uint64_t)> &progress) {
    check_order(flavor, order);
    std::vector<uint64_t> counts;
    for (int n = 0; n <= order; n++) {
        uint64_t c = 0;
        WordWalker w(flavor, n);
        w.run([&](const uint8_t *, i128) { c++; });
        counts.push_back(c);
        if (progress) progress(n, c);
    }
    return counts;
}

// ---------------------------------------------------------------------------------------
// Literal construction.

namespace {

using Word = std::vector<uint8_t>;
// Plain lexicographic order; the defaulted <=> trips a GCC 11 false -Wstringop-overread.
struct WordLess {
    bool operator()(const Word &a, const Word &b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](uint8_t x, uint8_t y) { return x < y; });
    }
};
using Terms = std::map<Word, Rational, WordLess>;  // one order
using Expansion = std::vector<Terms>;    // indexed by order

// A * B with the touching slots merged: P P = P, P S^k = S^k P = 0, S^j S^k = S^(j+k).
bool merge(const Word &a, const Word &b, Word &out) {
    uint8_t x = a.back(), y = b.front();
    if ((x == 0) != (y == 0)) return false;
    out.assign(a.begin(), a.end() - 1);
    out.push_back(static_cast<uint8_t>(x + y));
    out.insert(out.end(), b.begin() + 1, b.end());
    return true;
}

void add_to(Terms &t, const Word &w, const Rational &c) {
    auto [it, inserted] = t.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) t.erase(it);
    }
}

Expansion multiply(const Expansion &a, const Expansion &b, int order) {
    Expansion r(order + 1);
    Word w;
    for (int i = 0; i < static_cast<int>(a.size()) && i <= order; i++) {
        for (int j = 0; j < static_cast<int>(b.size()) && i + j <= order; j++) {
            for (const auto &[wa, ca] : a[i]) {
                for (const auto &[wb, cb] : b[j]) {
                    if (merge(wa, wb, w)) add_to(r[i + j], w, ca * cb);
                }
            }
        }
    }
    return r;
}

void add_scaled(Expansion &a, const Expansion &b, const Rational &s) {
    for (size_t n = 0; n < a.size() && n < b.size(); n++) {
        for (const auto &[w, c] : b[n]) add_to(a[n], w, c * s);
    }
}

Expansion projector(int order) {
    Expansion p(order + 1);
    p[0][Word{0}] = 1;
    return p;
}

// Pbar^(n) = -sum over k_1 + ... + k_(n+1) = n of S^k1 V ... V S^k(n+1), with S^0 = -P.
Expansion projector_series(int order) {
    Expansion pb = projector(order);
    for (int n = 1; n <= order; n++) {
        Word w(n + 1, 0);
        std::function<void(int, int)> rec = [&](int p, int rem) {
            if (p == n) {
                w[n] = static_cast<uint8_t>(rem);
                int zeros = 0;
                for (auto k : w) zeros += (k == 0);
                add_to(pb[n], w, (zeros & 1) ? Rational(1) : Rational(-1));
                return;
            }
            for (int v = 0; v <= rem; v++) {
                w[p] = static_cast<uint8_t>(v);
                rec(p + 1, rem - v);
            }
        };
        rec(0, n);
    }
    return pb;
}

}  // namespace

EffectiveExpansion generate_literal(Flavor flavor, int order) {
    if (order < 0 || order > 9) throw std::invalid_argument("literal generation limited to order 9");
    Expansion P = projector(order);
    Expansion pbar = projector_series(order);
    // X = P (Pbar - P) P; B = (P + X)^(-1/2) = P + sum_m c_m (-X)^m.
    Expansion X = multiply(multiply(P, pbar, order), P, order);
    X[0].clear();
    Expansion D = X;
    for (auto &t : D) {
        for (auto &[w, c] : t) c = -c;
    }
    Expansion B = P, Dm = P;
    Rational cm = 1;
    for (int m = 1; m <= order; m++) {
        Dm = multiply(Dm, D, order);
        cm *= Rational(2 * m - 1, 2 * m);
        add_scaled(B, Dm, cm);
    }
    Expansion result;
    if (flavor == Flavor::gamma) {
        result = multiply(multiply(pbar, P, order), B, order);
    } else {
        // P V Pbar P: prepend a P slot joined by one V.
        Expansion pvp(order + 1);
        Expansion pbarP = multiply(pbar, P, order);
        for (int n = 0; n < order; n++) {
            for (const auto &[w, c] : pbarP[n]) {
                Word x{0};
                x.insert(x.end(), w.begin(), w.end());
                add_to(pvp[n + 1], x, c);
            }
        }
        result = multiply(multiply(B, pvp, order), B, order);
        result[0][Word{0}] = 1;  // E_L P
    }
    EffectiveExpansion e(flavor, order);
    for (int n = 0; n <= order; n++) {
        for (const auto &[w, c] : result[n]) {
            if (flavor == Flavor::h_eff_pvp_zero && n >= 1) {
                bool has_pvp = false;
                for (size_t i = 0; i + 1 < w.size(); i++) has_pvp |= (w[i] == 0 && w[i + 1] == 0);
                if (has_pvp) continue;
            }
            e.add(n, w.data(), c);
        }
    }
    return e;
}

// ---------------------------------------------------------------------------------------
// Cache files.

void write_expansion(std::ostream &out, const EffectiveExpansion &e) {
    out << "# cavo-takahashi 1 " << flavor_name(e.flavor()) << " " << e.order() << "\n";
    for (int n = 0; n <= e.order(); n++) {
        for (size_t i = 0; i < e.num_terms(n); i++) {
            out << to_string(e.prefactor(n, i)) << "\t" << slot_symbols(e.slots(n, i), n + 1) << "\n";
        }
    }
}

EffectiveExpansion read_expansion(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty expansion file");
    std::istringstream h(line);
    std::string hash, tag, flavor;
    int version = 0, order = -1;
    h >> hash >> tag >> version >> flavor >> order;
    if (hash != "#" || tag != "cavo-takahashi" || version != 1 || order < 0) {
        throw std::runtime_error("bad expansion header: " + line);
    }
    EffectiveExpansion e(parse_flavor(flavor), order);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error("bad expansion line: " + line);
        OperatorSequence s;
        s.prefactor = parse_rational(line.substr(0, tab));
        s.slots = parse_symbols(line.substr(tab + 1));
        if (s.order() > order) throw std::runtime_error("term beyond declared order: " + line);
        e.add(s);
    }
    return e;
}

EffectiveExpansion cached_expansion(const std::string &dir, Flavor flavor, int order) {
    namespace fs = std::filesystem;
    fs::path path = fs::path(dir) / (std::string(flavor_name(flavor)) + "_" + std::to_string(order) + ".txt");
    if (fs::exists(path)) {
        try {
            std::ifstream in(path);
            EffectiveExpansion e = read_expansion(in);
            if (e.flavor() == flavor && e.order() == order) return e;
            spdlog::warn("cache {} does not match the request; regenerating", path.string());
        } catch (const std::exception &ex) {
            spdlog::warn("cache {} unreadable ({}); regenerating", path.string(), ex.what());
        }
    }
    EffectiveExpansion e = generate(flavor, order);
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_expansion(out, e);
    return e;
}

// ---------------------------------------------------------------------------------------

SequenceTrie::SequenceTrie(const EffectiveExpansion &e, int max_order, int min_order)
    : max_order_(max_order < 0 ? e.order() : std::min(max_order, e.order())), heff_(e.flavor() != Flavor::gamma) {
    nodes_.push_back(Node{});
    for (int n = std::max(0, min_order); n <= max_order_; n++) {
        for (size_t i = 0; i < e.num_terms(n); i++) {
            const uint8_t *s = e.slots(n, i);
            if (s[n] != 0) throw std::logic_error("word does not end in P");
            int node = 0;
            for (int j = n - 1; j >= 0; j--) {
                int depth = n - j;
                int found = -1;
                for (int c : nodes_[node].children) {
                    if (nodes_[c].slot == s[j]) found = c;
                }
                if (found < 0) {
                    found = static_cast<int>(nodes_.size());
                    Node nd;
                    nd.slot = s[j];
                    nd.depth = depth;
                    nodes_.push_back(nd);
                    nodes_[node].children.push_back(found);
                }
                node = found;
            }
            nodes_[node].terminal = true;
            nodes_[node].coefficient += e.prefactor(n, i);
        }
    }
}

}  // namespace cavo
