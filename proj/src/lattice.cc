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

#include "cavo/lattice.h"

#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cavo {

ClusterGraph::ClusterGraph(int lx, int ly, Boundary boundary, std::vector<SiteCoord> sites,
                           std::vector<Bond> bonds)
    : lx_(lx), ly_(ly), boundary_(boundary), sites_(std::move(sites)), bonds_(std::move(bonds)) {
    partner_.assign(num_qubits(), -1);
    for (const auto &b : bonds_) {
        int qa = qubit_index(b.a), qb = qubit_index(b.b);
        if (qa == qb || partner_[qa] != -1 || partner_[qb] != -1) {
            throw std::logic_error("qubit placed on more than one bond");
        }
        partner_[qa] = qb;
        partner_[qb] = qa;
    }
}

std::optional<PhysicalQubit> ClusterGraph::xi(const PhysicalQubit &q) const {
    int p = partner_.at(qubit_index(q));
    if (p < 0) return std::nullopt;
    return qubit_at(p);
}

int ClusterGraph::site_at(SiteCoord c) const {
    for (int i = 0; i < num_sites(); i++) {
        if (sites_[i] == c) return i;
    }
    return -1;
}

std::string ClusterGraph::to_text() const {
    std::ostringstream out;
    const char *names[] = {"open", "torus", "brick_wall"};
    out << "# lattice " << lx_ << " " << ly_ << " " << names[static_cast<int>(boundary_)] << " sites "
        << num_sites() << " bonds " << bonds_.size() << "\n";
    for (int s = 0; s < num_sites(); s++) {
        out << "site " << s << " " << sites_[s].x << " " << sites_[s].y << "\n";
    }
    for (int s = 0; s < num_sites(); s++) {
        for (auto [i, j] : kRingEdges) out << "edge " << s << ":" << i + 1 << " " << s << ":" << j + 1 << "\n";
    }
    for (const auto &b : bonds_) {
        out << "bond " << b.a.site << ":" << b.a.leg + 1 << " " << b.b.site << ":" << b.b.leg + 1 << "\n";
    }
    return out.str();
}

int brick_wall_shift(int ly) { return ly / 2; }

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

ClusterGraph build_lattice(int lx, int ly, Boundary boundary) {
    if (lx < 1 || ly < 1) throw std::invalid_argument("lattice dimensions must be positive");
    if (boundary == Boundary::brick_wall && (lx < 2 || ly < 2)) {
        throw std::invalid_argument("brick_wall boundary needs at least 2 sites in each direction");
    }
    std::vector<SiteCoord> sites;
    for (int y = 0; y < ly; y++) {
        for (int x = 0; x < lx; x++) sites.push_back({x, y});
    }
    auto index = [&](int x, int y) { return x + lx * y; };
    // Neighbour of (x, y) in direction leg, or -1 when open.
    auto neighbour = [&](int x, int y, int leg) -> int {
        int nx = x + kLegDirection[leg].first, ny = y + kLegDirection[leg].second;
        if (boundary == Boundary::open) {
            if (nx < 0 || nx >= lx || ny < 0 || ny >= ly) return -1;
            return index(nx, ny);
        }
        if (boundary == Boundary::brick_wall) {
            int s = brick_wall_shift(ly);
            if (nx >= lx) {
                nx -= lx;
                ny += s;
            } else if (nx < 0) {
                nx += lx;
                ny -= s;
            }
        }
        return index(mod(nx, lx), mod(ny, ly));
    };
    std::vector<Bond> bonds;
    for (int y = 0; y < ly; y++) {
        for (int x = 0; x < lx; x++) {
            for (int leg : {0, 1}) {
                int n = neighbour(x, y, leg);
                if (n < 0) continue;
                bonds.push_back({{index(x, y), leg}, {n, opposite_leg(leg)}});
            }
        }
    }
    if (boundary == Boundary::brick_wall) {
        std::set<std::pair<int, int>> pairs;
        for (const auto &b : bonds) {
            auto key = std::minmax(b.a.site, b.b.site);
            if (b.a.site == b.b.site || !pairs.insert(key).second) {
                throw std::invalid_argument("brick_wall identification degenerate for these dimensions");
            }
        }
    }
    return ClusterGraph(lx, ly, boundary, std::move(sites), std::move(bonds));
}

ClusterGraph open_cluster(const std::vector<SiteCoord> &sites) {
    std::map<SiteCoord, int> index;
    int minx = 0, maxx = 0, miny = 0, maxy = 0;
    for (int i = 0; i < static_cast<int>(sites.size()); i++) {
        if (!index.emplace(sites[i], i).second) throw std::invalid_argument("duplicate site");
        if (i == 0 || sites[i].x < minx) minx = sites[i].x;
        if (i == 0 || sites[i].x > maxx) maxx = sites[i].x;
        if (i == 0 || sites[i].y < miny) miny = sites[i].y;
        if (i == 0 || sites[i].y > maxy) maxy = sites[i].y;
    }
    std::vector<Bond> bonds;
    for (int i = 0; i < static_cast<int>(sites.size()); i++) {
        for (int leg : {0, 1}) {
            SiteCoord n{sites[i].x + kLegDirection[leg].first, sites[i].y + kLegDirection[leg].second};
            auto it = index.find(n);
            if (it != index.end()) bonds.push_back({{i, leg}, {it->second, opposite_leg(leg)}});
        }
    }
    int lx = sites.empty() ? 0 : maxx - minx + 1, ly = sites.empty() ? 0 : maxy - miny + 1;
    return ClusterGraph(lx, ly, Boundary::open, sites, std::move(bonds));
}

ClusterGraph open_box(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("box dimensions must be positive");
    std::vector<SiteCoord> sites;
    for (int y = 0; y < h; y++) {
        for (int x = 0; x < w; x++) sites.push_back({x, y});
    }
    return open_cluster(sites);
}

ClusterGraph enumerate_clusters_for_order(const ClusterRequest &request) {
    int n = request.order;
    if (n < 1 || n > kMaxSeriesOrder) throw std::invalid_argument("order outside 1..13");
    if (request.observable == Observable::hopping) {
        SiteCoord r = request.displacement;
        if (std::abs(r.x) + std::abs(r.y) > n) {
            throw std::invalid_argument("hopping amplitude vanishes: |x|+|y| exceeds the order");
        }
        std::vector<SiteCoord> sites = {{0, 0}};
        if (!(r == SiteCoord{0, 0})) sites.push_back(r);
        for (int y = -n; y <= n; y++) {
            for (int x = -n; x <= n; x++) {
                SiteCoord s{x, y};
                if (s == SiteCoord{0, 0} || s == r) continue;
                int d = std::abs(x) + std::abs(y) + std::abs(x - r.x) + std::abs(y - r.y);
                if (d <= n) sites.push_back(s);
            }
        }
        return open_cluster(sites);
    }
    if (request.split) {
        auto [a, b] = *request.split;
        if (a < 0 || b < 0 || a + b != n) throw std::invalid_argument("split must add up to the order");
        return build_lattice(b + 1, a + 1, Boundary::torus);
    }
    if (n <= 4) return build_lattice(3, 5, Boundary::brick_wall);
    return build_lattice(n + 1, n + 1, Boundary::torus);
}

}  // namespace cavo
