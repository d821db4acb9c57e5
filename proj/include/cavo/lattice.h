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

#ifndef CAVO_LATTICE_H_
#define CAVO_LATTICE_H_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cavo {

// Legs are stored 0..3 (printed 1..4): 0 = +x, 1 = +y, 2 = -x, 3 = -y.
// Going around the site plaquette visits the legs in that order.
constexpr int kLegs = 4;
constexpr int opposite_leg(int leg) { return (leg + 2) % 4; }
constexpr std::array<std::pair<int, int>, 4> kRingEdges = {{{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
constexpr std::array<std::pair<int, int>, 4> kLegDirection = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

enum class Boundary { open, torus, brick_wall };

struct SiteCoord {
    int x = 0;
    int y = 0;
    friend bool operator==(const SiteCoord &, const SiteCoord &) = default;
    friend auto operator<=>(const SiteCoord &, const SiteCoord &) = default;
};

struct PhysicalQubit {
    int site = 0;
    int leg = 0;
    friend bool operator==(const PhysicalQubit &, const PhysicalQubit &) = default;
};

struct Bond {
    PhysicalQubit a;
    PhysicalQubit b;
};

class ClusterGraph {
   public:
    ClusterGraph(int lx, int ly, Boundary boundary, std::vector<SiteCoord> sites, std::vector<Bond> bonds);

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    Boundary boundary() const { return boundary_; }
    int num_sites() const { return static_cast<int>(sites_.size()); }
    int num_qubits() const { return kLegs * num_sites(); }
    const std::vector<SiteCoord> &sites() const { return sites_; }
    const std::vector<Bond> &bonds() const { return bonds_; }

    static int qubit_index(const PhysicalQubit &q) { return kLegs * q.site + q.leg; }
    static PhysicalQubit qubit_at(int index) { return {index / kLegs, index % kLegs}; }
    /// Partner of q across its bond, if q lies on one.
    std::optional<PhysicalQubit> xi(const PhysicalQubit &q) const;
    /// Site index at a coordinate, or -1.
    int site_at(SiteCoord c) const;

    /// One line per intra-site edge ("edge") and per bond ("bond"), legs printed 1..4.
    std::string to_text() const;

   private:
    int lx_, ly_;
    Boundary boundary_;
    std::vector<SiteCoord> sites_;
    std::vector<Bond> bonds_;
    std::vector<int> partner_;
};

/// Lx x Ly sites. torus wraps both directions; brick_wall glues the x boundary with a
/// vertical shift of floor(Ly/2) rows and wraps y plainly. Periodic directions of length 1
/// or 2 produce self bonds or doubled neighbour pairs on the torus; brick_wall rejects them.
ClusterGraph build_lattice(int lx, int ly, Boundary boundary);

/// Induced open subgraph of the infinite lattice on the given sites.
ClusterGraph open_cluster(const std::vector<SiteCoord> &sites);
/// Open w x h rectangle with lower-left corner at the origin.
ClusterGraph open_box(int w, int h);

int brick_wall_shift(int ly);

constexpr int kMaxSeriesOrder = 13;

enum class Observable { ground_energy_or_fidelity, hopping };

struct ClusterRequest {
    int order = 0;
    Observable observable = Observable::ground_energy_or_fidelity;
    SiteCoord displacement{};  // hopping only
    /// Optional fixed split (vertical bond count, horizontal bond count) of the order.
    std::optional<std::pair<int, int>> split;
};

/// Finite lattice large enough for every linked process at the requested order.
/// Hopping: all sites s with |s| + |s - r| <= order (each process is an Euler trail from the
/// origin to r). Ground state: 3x5 brick wall up to order 4, else an (order+1)^2 torus, or an
/// (a+1) x (b+1) torus for a split (a, b).
ClusterGraph enumerate_clusters_for_order(const ClusterRequest &request);

}  // namespace cavo

#endif
