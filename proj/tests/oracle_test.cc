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

// Brute-force cross-checks on tiny tori and on random dense models.

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "cavo/cluster_space.h"
#include "cavo/fidelity.h"
#include "cavo/local_spectrum.h"
#include "cavo/site_model.h"
#include "cavo/takahashi.h"
#include "oracle/ed_oracle.h"
#include "oracle/random_model.h"
#include "oracle/tiny_torus.h"

namespace cavo {
namespace {

using oracle::Vec;
using oracle::ground_state;
using oracle::random_vector;
using oracle::site_ground_energy;
using oracle::torus;

double tol_for(double x) { return 1e-8 * std::max(1.0, std::abs(x)); }

// ---------------------------------------------------------------------------------------
// (i) factorization of the unperturbed ground state

class TinyTorus : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(TinyTorus, GroundStateFidelityFactorizes) {
    auto [lx, ly] = GetParam();
    ClusterGraph g = torus(lx, ly);
    int n = g.num_sites();
    Vec cs = oracle::cluster_state(g);
    EXPECT_NEAR(cs.norm(), 1.0, 1e-14);
    for (double l : {0.5, 1.0}) {
        auto gs = ground_state(g, {l, 0, 0});
        EXPECT_NEAR(gs.value, n * site_ground_energy(l, 0), 1e-9);
        double f = std::pow(cs.dot(gs.vector), 2);
        EXPECT_NEAR(f, std::pow(site_scalars(l).overlap0, n), 1e-8) << l;
    }
}

TEST(TinyTorus, ZFieldGroundStateStillFactorizes) {
    // Z commutes with CZ, so the field stays on-site in the local frame.
    ClusterGraph g = torus(1, 2);
    int n = g.num_sites();
    for (double hz : {0.02, -0.05}) {
        auto gs = ground_state(g, {0.7, hz, 0});
        EXPECT_NEAR(gs.value, n * site_ground_energy(0.7, hz), 1e-9);
        double f = std::pow(oracle::cluster_state(g).dot(gs.vector), 2);
        EXPECT_NEAR(f, std::pow(site_scalars(0.7, hz).overlap0, n), 1e-8);
    }
}

// ---------------------------------------------------------------------------------------
// (ii) stabilizer conservation

TEST_P(TinyTorus, StabilizersCommuteOnlyWithTheUnperturbedModel) {
    auto [lx, ly] = GetParam();
    ClusterGraph g = torus(lx, ly);
    Vec v = random_vector(size_t(1) << g.num_qubits(), 3);
    auto commutator = [&](const oracle::Couplings &c, int site) {
        auto h = oracle::physical_hamiltonian(g, c);
        auto k = oracle::stabilizer(g, site);
        return (h.apply(k.apply(v)) - k.apply(h.apply(v))).norm();
    };
    for (int s = 0; s < g.num_sites(); s++) {
        EXPECT_LT(commutator({0.6, 0, 0}, s), 1e-12);
        EXPECT_GT(commutator({0.6, 0.1, 0}, s), 1e-2);
        EXPECT_GT(commutator({0.6, 0, 0.1}, s), 1e-2);
        // K_mu^2 = 1 and the cluster state is a +1 eigenstate.
        auto k = oracle::stabilizer(g, s);
        EXPECT_LT((k.apply(k.apply(v)) - v).norm(), 1e-12);
        Vec cs = oracle::cluster_state(g);
        EXPECT_LT((k.apply(cs) - cs).norm(), 1e-12);
    }
    // The bond coupling flips an even number of stabilizers: prod K is conserved.
    auto all = [&](Vec x) {
        for (int s = 0; s < g.num_sites(); s++) x = oracle::stabilizer(g, s).apply(x);
        return x;
    };
    auto hzz = oracle::physical_hamiltonian(g, {0.6, 0, 0.1});
    EXPECT_LT((hzz.apply(all(v)) - all(hzz.apply(v))).norm(), 1e-12);
}

TEST(TinyTorus, ThermalFidelityOfTwoSitesMatchesTheProductFormula) {
    ClusterGraph g = torus(1, 2);
    double l = 0.5;
    auto h = oracle::physical_hamiltonian(g, {l, 0, 0});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
    Vec cs = oracle::cluster_state(g);
    auto spectrum = diagonalize_site(l);
    for (double t : {0.005, 0.02, 0.05}) {
        double z = 0, num = 0;
        for (int i = 0; i < es.eigenvalues().size(); i++) {
            double w = std::exp(-(es.eigenvalues()[i] - es.eigenvalues()[0]) / t);
            z += w;
            num += w * std::pow(cs.dot(es.eigenvectors().col(i)), 2);
        }
        double exact = num / z, approx = std::pow(d_unperturbed({l, 0, 0, t}).d, 2);
        // Only the ground and first excited site levels are kept per site.
        double dropped = 0;
        for (int i = 2; i < kSiteDim; i++) dropped += std::exp(-(spectrum.energies[i] - spectrum.energies[0]) / t);
        EXPECT_LE(std::abs(exact - approx), 4 * dropped + 1e-12) << t;
    }
}

INSTANTIATE_TEST_SUITE_P(Oracle, TinyTorus, ::testing::Values(std::pair{1, 2}, std::pair{2, 2}),
                         [](const auto &info) {
                             return std::to_string(info.param.first) + "x" + std::to_string(info.param.second);
                         });

// ---------------------------------------------------------------------------------------
// (iii) series coefficients against Rayleigh-Schroedinger in the physical frame

class SeriesOracle : public ::testing::TestWithParam<std::tuple<int, int, double>> {};

TEST_P(SeriesOracle, CoefficientsThroughOrderThree) {
    auto [lx, ly, l] = GetParam();
    ClusterGraph g = torus(lx, ly);
    const int order = 3;
    auto ed = oracle::physical_series(g, l, order);
    auto lib = oracle::library_series(g, l, order);
    // The library measures energies from the unperturbed vacuum.
    double e0 = ed.vacuum_energy[0];
    EXPECT_NEAR(lib.vacuum_energy[0], 0.0, 1e-12);
    EXPECT_NEAR(ed.particle_energy[0] - e0, lib.particle_energy[0], 1e-9);
    EXPECT_NEAR(lib.particle_energy[0], gap_closed_form(l), 1e-9);
    for (int k = 1; k <= order; k++) {
        EXPECT_NEAR(lib.vacuum_energy[k], ed.vacuum_energy[k], tol_for(ed.vacuum_energy[k])) << "E" << k;
        EXPECT_NEAR(lib.particle_energy[k], ed.particle_energy[k], tol_for(ed.particle_energy[k])) << "omega" << k;
        double gap_ed = ed.particle_energy[k] - ed.vacuum_energy[k];
        double gap_lib = lib.particle_energy[k] - lib.vacuum_energy[k];
        EXPECT_NEAR(gap_lib, gap_ed, tol_for(gap_ed)) << "gap" << k;
    }
    for (int k = 0; k <= order; k++) {
        EXPECT_NEAR(lib.fidelity[k], ed.fidelity[k], tol_for(ed.fidelity[k])) << "fidelity" << k;
    }
    EXPECT_NE(ed.vacuum_energy[2], 0.0);
    EXPECT_NE(ed.fidelity[2], 0.0);
}

INSTANTIATE_TEST_SUITE_P(Oracle, SeriesOracle,
                         ::testing::Values(std::tuple{1, 2, 0.5}, std::tuple{1, 2, 1.0}, std::tuple{2, 2, 1.0}),
                         [](const auto &info) {
                             const auto &p = info.param;
                             return std::to_string(std::get<0>(p)) + "x" + std::to_string(std::get<1>(p)) +
                                    "_lambda" + std::to_string(static_cast<int>(std::round(10 * std::get<2>(p))));
                         });

TEST(Oracle, RayleighSchroedingerAgreesWithChebyshevFitOfExactEnergies) {
    // Guards the oracle itself: dense ground energies of H_zz on the 2-site torus.
    ClusterGraph g = torus(1, 2);
    double l = 1.0;
    auto a = oracle::physical_hamiltonian(g, {l, 0, 0});
    auto b = oracle::bond_zz(g);
    Eigen::MatrixXd ad = a.dense(), bd = b.dense();
    auto energy = [&](double x) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ad - x * bd, Eigen::EigenvaluesOnly);
        return es.eigenvalues()[0];
    };
    auto mono = oracle::chebyshev_taylor(energy, 2e-3, 9);
    auto gs = ground_state(g, {l, 0, 0});
    auto pert = oracle::perturb([&](const Vec &v) { return a.apply(v); },
                                [&](const Vec &v) { return Vec(-b.apply(v)); }, gs, 3);
    EXPECT_NEAR(mono[0], pert.energy[0], 1e-10);
    EXPECT_NEAR(mono[1], pert.energy[1], 1e-7);
    EXPECT_NEAR(mono[2], pert.energy[2], 1e-4 * std::abs(pert.energy[2]));
}

// ---------------------------------------------------------------------------------------
// Takahashi correctness on random dense models

class RandomModel : public ::testing::TestWithParam<std::pair<unsigned, int>> {};

TEST_P(RandomModel, EffectiveSpectrumConvergesAndGammaIsAnIsometry) {
    auto [seed, l] = GetParam();
    auto m = oracle::DenseTestModel::random(seed, 8, l);
    auto r = oracle::check_takahashi(m, 5);
    ASSERT_EQ(r.slopes.size(), 5u);
    for (int n = 1; n <= 5; n++) {
        // Residual after order n is O(eps^(n+1)): a decade in eps buys more than n decades.
        EXPECT_GT(r.slopes[n - 1], n + 0.5) << "n = " << n;
    }
    EXPECT_LT(r.gamma_defect, 1e-10);
    EXPECT_LT(r.hermiticity_defect, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Oracle, RandomModel,
                         ::testing::Values(std::pair{1u, 2}, std::pair{2u, 2}, std::pair{3u, 2}, std::pair{4u, 1},
                                           std::pair{5u, 3}),
                         [](const auto &info) {
                             return "seed" + std::to_string(info.param.first) + "_l" +
                                    std::to_string(info.param.second);
                         });

TEST(Oracle, WrongCoefficientIsDetected) {
    // Flip the sign of one third-order H_eff word; the order-3 residual must stop improving.
    auto m = oracle::DenseTestModel::random(9, 8, 2);
    EffectiveExpansion good = generate(Flavor::h_eff, 3);
    EffectiveExpansion bad(Flavor::h_eff, 3);
    for (int n = 0; n <= 3; n++) {
        for (size_t i = 0; i < good.num_terms(n); i++) {
            OperatorSequence t = good.term(n, i);
            if (n == 3 && i == 0) t.prefactor = -t.prefactor;
            bad.add(t);
        }
    }
    auto residual = [&](const EffectiveExpansion &e, const oracle::Real &eps) {
        auto exact = m.exact_spectrum(eps);
        auto eff = oracle::effective_spectrum(m, e, eps, 3);
        return abs(exact[0] - eff[0]) + abs(exact[1] - eff[1]);
    };
    oracle::Real hi("1e-2"), lo("1e-3");
    double good_slope = log10(residual(good, hi) / residual(good, lo)).convert_to<double>();
    double bad_slope = log10(residual(bad, hi) / residual(bad, lo)).convert_to<double>();
    EXPECT_GT(good_slope, 3.5);
    EXPECT_LT(bad_slope, 3.5);
}

}  // namespace
}  // namespace cavo
