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

#include "cavo/linked_cluster.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cavo/cluster_space.h"
#include "cavo/local_spectrum.h"
#include "cavo/parallel.h"
#include "cavo/takahashi.h"

namespace cavo {

namespace {

bool is_zero(double x) { return x == 0; }
bool is_zero(const Rational &x) { return sgn(x) == 0; }

template <typename T>
T convert(const Rational &r) {
    if constexpr (std::is_same_v<T, Rational>) {
        return r;
    } else {
        return to_double(r);
    }
}

// States of the sites touched by one ordered bond sequence, 4 bits per site; every other
// site of the lattice stays in label 0 throughout.
template <typename T>
class ProcessModel {
   public:
    using Entry = std::pair<uint32_t, T>;
    using Vector = std::vector<Entry>;
    using Scalar = T;

    struct Step {
        int a, b, leg_a, leg_b;
    };

    ProcessModel(const SiteModel<T> &model, std::vector<Step> steps, int num_sites, bool one_particle,
                 std::vector<int> final_labels)
        : model_(model), steps_(std::move(steps)), sites_(num_sites), one_particle_(one_particle),
          final_(std::move(final_labels)) {
        e_l_ = one_particle ? model.energies[1] : T(0);
        std::vector<int> last(sites_, -1);
        for (size_t d = 0; d < steps_.size(); d++) last[steps_[d].a] = last[steps_[d].b] = static_cast<int>(d);
        settle_.resize(steps_.size());
        for (int s = 0; s < sites_; s++) {
            if (last[s] >= 0) settle_[last[s]].push_back(s);
        }
    }

    static int label(uint32_t key, int site) { return (key >> (4 * site)) & 15; }
    static uint32_t with(uint32_t key, int site, int l) {
        return (key & ~(15u << (4 * site))) | (static_cast<uint32_t>(l) << (4 * site));
    }

    Vector apply_v(const Vector &v, int depth) const {
        Vector out;
        if (depth >= static_cast<int>(steps_.size())) return out;
        const Step &st = steps_[depth];
        const auto &settled = settle_[depth];
        for (const auto &[key, amp] : v) {
            int la = label(key, st.a), lb = label(key, st.b);
            for (const auto &[ra, va] : model_.leg_ops[st.leg_a][la]) {
                uint32_t ka = with(key, st.a, ra);
                T cv = model_.coupling * va * amp;
                for (const auto &[rb, vb] : model_.leg_ops[st.leg_b][lb]) {
                    uint32_t k = with(ka, st.b, rb);
                    bool keep = true;
                    for (int s : settled) keep = keep && label(k, s) == final_[s];
                    if (keep) out.emplace_back(k, cv * vb);
                }
            }
        }
        normalize(out);
        return out;
    }

    bool in_l(uint32_t key) const {
        if (!one_particle_) return key == 0;
        int ones = 0;
        for (int s = 0; s < sites_; s++) {
            int l = label(key, s);
            if (l > 1) return false;
            ones += l;
        }
        return ones == 1;
    }

    void project(Vector &v) const {
        v.erase(std::remove_if(v.begin(), v.end(), [&](const Entry &e) { return !in_l(e.first); }), v.end());
    }

    void resolvent(Vector &v, int k) const {
        Vector out;
        out.reserve(v.size());
        for (auto &[key, amp] : v) {
            if (in_l(key)) continue;
            T e(0);
            for (int s = 0; s < sites_; s++) e += model_.energies[label(key, s)];
            T d = e_l_ - e;
            if (is_zero(d) || (std::is_same_v<T, double> && std::abs(to_double(d)) < 1e-12)) {
                throw std::domain_error("resolvent hit a state degenerate with the reference manifold");
            }
            T f = T(1) / d, a = amp;
            for (int i = 0; i < k; i++) a *= f;
            out.emplace_back(key, std::move(a));
        }
        v = std::move(out);
    }

    T reference_energy() const { return e_l_; }
    T from_rational(const Rational &r) const { return convert<T>(r); }

    void axpy(Vector &y, const T &a, const Vector &x) const {
        if (is_zero(a) || x.empty()) return;
        for (const auto &[key, amp] : x) y.emplace_back(key, a * amp);
        normalize(y);
    }
    Vector zero_like(const Vector &) const { return {}; }
    T dot(const Vector &a, const Vector &b) const {
        T acc(0);
        size_t j = 0;
        for (const auto &[key, amp] : a) {
            while (j < b.size() && b[j].first < key) j++;
            if (j < b.size() && b[j].first == key) acc += amp * b[j].second;
        }
        return acc;
    }

    static T amplitude(const Vector &v, uint32_t key) {
        auto it = std::lower_bound(v.begin(), v.end(), key, [](const Entry &e, uint32_t k) { return e.first < k; });
        return it != v.end() && it->first == key ? it->second : T(0);
    }

   private:
    static void normalize(Vector &v) {
        std::sort(v.begin(), v.end(), [](const Entry &x, const Entry &y) { return x.first < y.first; });
        size_t w = 0;
        for (size_t i = 0; i < v.size();) {
            uint32_t key = v[i].first;
            T acc = v[i].second;
            size_t j = i + 1;
            for (; j < v.size() && v[j].first == key; j++) acc += v[j].second;
            if (!is_zero(acc)) v[w++] = Entry(key, std::move(acc));
            i = j;
        }
        v.resize(w);
    }

    const SiteModel<T> &model_;
    std::vector<Step> steps_;
    int sites_;
    bool one_particle_;
    std::vector<int> final_;
    std::vector<std::vector<int>> settle_;
    T e_l_;
};

struct Multiset {
    std::vector<int> bonds;  // sorted, with repetition
};

// Connected bond multisets of at most `order` uses whose odd-degree sites are exactly
// {o, r} (none when r == o) and which touch o.
std::vector<Multiset> linked_multisets(const ClusterGraph &g, int o, int r, int order) {
    const auto &bonds = g.bonds();
    int nb = static_cast<int>(bonds.size()), ns = g.num_sites();
    std::vector<Multiset> out;
    std::vector<int> count(nb, 0), degree(ns, 0);
    std::function<void(int, int)> rec = [&](int idx, int left) {
        if (idx == nb) {
            if (left == order) return;
            for (int s = 0; s < ns; s++) {
                bool odd = degree[s] & 1;
                bool want = r != o && (s == o || s == r);
                if (odd != want) return;
            }
            if (degree[o] == 0) return;
            std::vector<int> parent(ns);
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
            for (int b = 0; b < nb; b++) {
                if (count[b]) parent[find(bonds[b].a.site)] = find(bonds[b].b.site);
            }
            int root = find(o);
            for (int s = 0; s < ns; s++) {
                if (degree[s] && find(s) != root) return;
            }
            Multiset m;
            for (int b = 0; b < nb; b++) m.bonds.insert(m.bonds.end(), count[b], b);
            out.push_back(std::move(m));
            return;
        }
        for (int c = 0; c <= left; c++) {
            count[idx] = c;
            degree[bonds[idx].a.site] += c;
            degree[bonds[idx].b.site] += c;
            rec(idx + 1, left - c);
            degree[bonds[idx].a.site] -= c;
            degree[bonds[idx].b.site] -= c;
        }
        count[idx] = 0;
    };
    rec(0, order);
    return out;
}

template <typename T>
struct TargetResult {
    Series<T> one_particle, vacuum;
    uint64_t processes = 0;
};

template <typename T>
TargetResult<T> hopping_target(const SiteModel<T> &model, int order, int x, int y, int margin,
                               const std::vector<SequenceTrie> &tries) {
    ClusterRequest req;
    req.order = std::min(order + margin, kMaxSeriesOrder);
    req.observable = Observable::hopping;
    req.displacement = {x, y};
    ClusterGraph g = enumerate_clusters_for_order(req);
    int o = g.site_at({0, 0}), r = g.site_at({x, y});
    if (o < 0 || r < 0) throw std::logic_error("hopping region misses an endpoint");

    TargetResult<T> res{Series<T>(order), Series<T>(order), 0};
    for (const Multiset &m : linked_multisets(g, o, r, order)) {
        int n = static_cast<int>(m.bonds.size());
        // Local numbering of the touched sites.
        std::vector<int> local(g.num_sites(), -1);
        int ns = 0;
        for (int b : m.bonds) {
            for (int s : {g.bonds()[b].a.site, g.bonds()[b].b.site}) {
                if (local[s] < 0) local[s] = ns++;
            }
        }
        if (ns > 8) throw std::logic_error("process touches too many sites");
        std::vector<int> final1(ns, 0), final0(ns, 0);
        final1[local[r]] = 1;
        uint32_t start1 = 1u << (4 * local[o]), end1 = 1u << (4 * local[r]);

        std::vector<int> seq = m.bonds;
        do {
            std::vector<typename ProcessModel<T>::Step> steps;
            for (int b : seq) {
                const Bond &bd = g.bonds()[b];
                steps.push_back({local[bd.a.site], local[bd.b.site], bd.a.leg, bd.b.leg});
            }
            ProcessModel<T> pm(model, steps, ns, true, final1);
            auto out = tries[n].apply(pm, typename ProcessModel<T>::Vector{{start1, T(1)}});
            res.one_particle[n] += ProcessModel<T>::amplitude(out[n], end1);
            if (r == o) {
                ProcessModel<T> vm(model, steps, ns, false, final0);
                auto vo = tries[n].apply(vm, typename ProcessModel<T>::Vector{{0u, T(1)}});
                res.vacuum[n] += ProcessModel<T>::amplitude(vo[n], 0u);
            }
            res.processes++;
        } while (std::next_permutation(seq.begin(), seq.end()));
    }
    return res;
}

}  // namespace

template <typename T>
Series<T> HoppingTable<T>::at(int x, int y) const {
    int a = std::abs(x), b = std::abs(y);
    if (a < b) std::swap(a, b);
    auto it = entries.find({a, b});
    return it == entries.end() ? Series<T>(order) : it->second;
}

template <typename T>
HoppingTable<T> compute_hopping(const SiteModel<T> &model, int order, const HoppingOptions &opt) {
    if (order < 1 || order > kMaxHoppingOrder) throw std::invalid_argument("hopping order must be 1..5");
    if (model.levels < 2 || model.levels > 16) throw std::invalid_argument("site model needs 2..16 levels");
    std::vector<std::pair<int, int>> targets = opt.targets;
    if (targets.empty()) {
        for (int x = 0; x <= order; x++) {
            for (int y = 0; y <= x && x + y <= order; y++) targets.emplace_back(x, y);
        }
    }
    for (auto [x, y] : targets) {
        if (y < 0 || x < y) throw std::invalid_argument("hopping targets must satisfy x >= y >= 0");
    }
    EffectiveExpansion e = generate_heff(order, false);
    std::vector<SequenceTrie> tries;
    for (int n = 0; n <= order; n++) tries.emplace_back(e, n, n);

    std::vector<TargetResult<T>> results(targets.size());
    parallel_for(targets.size(), [&](size_t i) {
        auto [x, y] = targets[i];
        if (x + y > order) {
            results[i] = {Series<T>(order), Series<T>(order), 0};
            return;
        }
        results[i] = hopping_target(model, order, x, y, opt.region_margin, tries);
    });

    HoppingTable<T> table;
    table.order = order;
    table.ground_energy_E0 = Series<T>(order);
    for (size_t i = 0; i < targets.size(); i++) {
        Series<T> t = results[i].one_particle;
        if (targets[i] == std::pair<int, int>{0, 0}) {
            t[0] = model.energies[1];
            table.ground_energy_E0 = results[i].vacuum;
        }
        table.entries[targets[i]] = t;
        table.processes += results[i].processes;
    }
    return table;
}

HoppingTable<Rational> tfim_hopping(int order, const HoppingOptions &opt) {
    return compute_hopping(tfim_site_model(), order, opt);
}

HoppingTable<double> hzz_hopping(int order, double lambda_xz, const HoppingOptions &opt) {
    if (!(lambda_xz > 0)) throw std::invalid_argument("lambda_xz must be positive for the full model");
    auto t = compute_hopping(full_site_model(lambda_xz), order, opt);
    t.lambda_xz = lambda_xz;
    return t;
}

namespace {

int multiplicity(int x, int y) {
    if (x == 0 && y == 0) return 1;
    if (y == 0 || x == y) return 4;
    return 8;
}

}  // namespace

template <typename T>
Series<double> dispersion_series(const HoppingTable<T> &table, double kx, double ky) {
    Series<double> w = to_double_series(table.onsite());
    for (const auto &[xy, t] : table.entries) {
        auto [x, y] = xy;
        if (x == 0 && y == 0) continue;
        // all images of (x, y) under the square symmetry group
        std::vector<std::pair<int, int>> images;
        for (int sx : {1, -1}) {
            for (int sy : {1, -1}) {
                images.emplace_back(sx * x, sy * y);
                images.emplace_back(sy * y, sx * x);
            }
        }
        std::sort(images.begin(), images.end());
        images.erase(std::unique(images.begin(), images.end()), images.end());
        double f = 0;
        for (auto [a, b] : images) f += std::cos(kx * a + ky * b);
        w += to_double_series(t) * f;
    }
    return w;
}

template <typename T>
Series<T> gap_series(const HoppingTable<T> &table, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    Series<T> w = table.onsite();
    for (const auto &[xy, t] : table.entries) {
        auto [x, y] = xy;
        if (x == 0 && y == 0) continue;
        int f = multiplicity(x, y) * (sign < 0 && (x + y) % 2 ? -1 : 1);
        w += t * T(f);
    }
    return w;
}

std::vector<double> normalized_gap_coefficients(const Series<double> &gap, double lambda_xz) {
    SiteScalars s = site_scalars(lambda_xz);
    std::vector<double> out;
    for (int i = 1; i <= gap.order(); i++) {
        out.push_back(gap[i] * (2 / s.gap) * std::pow(s.gap / (2 * s.c * s.c), i));
    }
    return out;
}

RationalSeries tfim_gap_series(int order) { return gap_series(tfim_hopping(order)); }

// ---------------------------------------------------------------------------------------
// Ground-state fidelity.

template <typename T>
Series<T> finite_lattice_sum(int order, const std::function<Series<T>(int, int)> &box) {
    if (order < 0) throw std::invalid_argument("negative order");
    // A process spanning a w x h rectangle needs w + h - 2 distinct bonds, each used twice.
    int span = order / 2 + 2;
    std::map<std::pair<int, int>, Series<T>> memo;
    auto q = [&](int w, int h) -> Series<T> {
        if (w <= 0 || h <= 0) return Series<T>(order);
        std::pair<int, int> key = {std::min(w, h), std::max(w, h)};
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, box(key.first, key.second).extended(order)).first;
        return it->second;
    };
    const int b[3] = {1, -2, 1};
    Series<T> total(order);
    for (int w = 1; w < span; w++) {
        for (int h = 1; w + h <= span; h++) {
            for (int i = 0; i < 3; i++) {
                for (int j = 0; j < 3; j++) total += q(w - i, h - j) * T(b[i] * b[j]);
            }
        }
    }
    return total;
}

RationalSeries tfim_box_log_norm(int w, int h, int order) {
    ClusterSpace<Rational> space(open_box(w, h), tfim_site_model(), Reference::vacuum);
    return rayleigh_schrodinger(space, order).norm().log();
}

Series<double> hzz_box_log_fidelity(int w, int h, int order, double lambda_xz) {
    SiteSpectrum spec = diagonalize_site(lambda_xz, 0);
    SiteVector plus = logical_plus();
    std::vector<double> amp(kSiteDim);
    for (int l = 0; l < kSiteDim; l++) amp[l] = spec.transform_R.col(l).dot(plus);
    ClusterSpace<double> space(open_box(w, h), full_site_model(lambda_xz), Reference::vacuum);
    auto rs = rayleigh_schrodinger(space, order);
    return rs.overlap(product_state(space, amp)).log() * 2.0 - rs.norm().log();
}

std::vector<double> FidelitySeries::normalized() const {
    std::vector<double> out;
    double scale = 1;
    if (target == FidelityTarget::hzz_cluster_state) {
        SiteScalars s = site_scalars(lambda_xz);
        scale = s.gap / (2 * s.c * s.c);
    }
    for (int i = 2; i <= coefficients.order(); i += 2) {
        out.push_back(coefficients[i] / overlap0 * std::pow(scale, i));
    }
    return out;
}

FidelitySeries fidelity_series(int order, FidelityTarget target, double lambda_xz, const FidelityOptions &opt) {
    if (order < 0 || order % 2) throw std::invalid_argument("fidelity series needs an even order");
    FidelitySeries f;
    f.target = target;
    if (target == FidelityTarget::tfim_polarized) {
        if (order > kMaxTfimFidelityOrder) throw std::invalid_argument("tfim fidelity supports order <= 12");
        RationalSeries q = finite_lattice_sum<Rational>(order, [&](int w, int h) {
            auto r = tfim_box_log_norm(w, h, order);
            if (opt.progress) opt.progress(w, h);
            return r;
        });
        f.exact = (-q).exp();
        f.coefficients = to_double_series(*f.exact);
        f.overlap0 = 1;
        return f;
    }
    if (order > kMaxHzzFidelityOrder) throw std::invalid_argument("hzz fidelity supports order <= 4");
    if (!(lambda_xz > 0)) throw std::invalid_argument("lambda_xz must be positive for the full model");
    f.lambda_xz = lambda_xz;
    f.overlap0 = site_scalars(lambda_xz).overlap0;
    Series<double> q = finite_lattice_sum<double>(order, [&](int w, int h) {
        auto r = hzz_box_log_fidelity(w, h, order, lambda_xz);
        if (opt.progress) opt.progress(w, h);
        return r;
    });
    f.coefficients = q.exp() * f.overlap0;
    return f;
}

template struct HoppingTable<double>;
template struct HoppingTable<Rational>;
template HoppingTable<double> compute_hopping(const SiteModel<double> &, int, const HoppingOptions &);
template HoppingTable<Rational> compute_hopping(const SiteModel<Rational> &, int, const HoppingOptions &);
template Series<double> dispersion_series(const HoppingTable<double> &, double, double);
template Series<double> dispersion_series(const HoppingTable<Rational> &, double, double);
template Series<double> gap_series(const HoppingTable<double> &, int);
template Series<Rational> gap_series(const HoppingTable<Rational> &, int);
template Series<double> finite_lattice_sum(int, const std::function<Series<double>(int, int)> &);
template Series<Rational> finite_lattice_sum(int, const std::function<Series<Rational>(int, int)> &);

}  // namespace cavo
