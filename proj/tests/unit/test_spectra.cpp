#include "doctest.h"
#include "helpers.hpp"
#include "rmt/correlation.hpp"
#include "rmt/estimators.hpp"
#include "rmt/spectra.hpp"
#include "rmt/synth.hpp"
#include "rmt/transforms.hpp"

#include <cmath>
#include <numbers>

using namespace rmt;
using doctest::Approx;

namespace {
double mass_with_truncation(const SpectralDensity& d) { return d.total_mass() + d.truncated_mass; }
}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("MP density: band, value at 1 and atom") {
    const auto d = mp_density(0.25);
    CHECK(d.support_min() == Approx(0.25).epsilon(1e-12));
    CHECK(d.support_max() == Approx(2.25).epsilon(1e-12));
    // Direct evaluation of √(4λq − (λ+q−1)²)/(2πλq) at λ = 1.
    const double q = 0.25;
    const double direct = std::sqrt(4.0 * q - q * q) / (2.0 * std::numbers::pi * q);
    CHECK(d.value_at(1.0) == Approx(direct).epsilon(1e-6));
    CHECK(d.value_at(1.0) == Approx(0.6164).epsilon(1e-4));
    const auto d2 = mp_density(2.0);
    REQUIRE(d2.atoms.size() == 1);
    CHECK(d2.atoms[0].location == 0.0);
    CHECK(d2.atoms[0].mass == Approx(0.5).epsilon(1e-12));
    CHECK(d2.total_mass() == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("MP density concentrates at 1 as q -> 0") {
    const auto d = mp_density(1e-6);
    CHECK(d.mass_between(0.99, 1.01) > 0.999999);
}

TEST_CASE("MP edges agree with the stationary points of its Blue function") {
    for (double q : {0.1, 0.25, 0.5, 2.0}) {
        const auto e = spectrum_edges([q](double w) { return mp_blue(q, w).real(); });
        REQUIRE(e.bounded());
        const auto [lo, hi] = mp_edges(q);
        CHECK(std::abs(*e.lower - lo) < 1e-6);
        CHECK(std::abs(*e.upper - hi) < 1e-6);
    }
}

TEST_CASE("EWMA spectrum: edges, mass and q -> 0") {
    const auto d = ewma_density(0.5);
    CHECK(mass_with_truncation(d) == Approx(1.0).epsilon(1e-6));
    CHECK(d.mean() == Approx(1.0).epsilon(2e-3));
    const auto [lo, hi] = ewma_edges(0.5);
    CHECK(std::abs(lo - std::log(lo) - 1.5) < 1e-10);
    CHECK(std::abs(hi - std::log(hi) - 1.5) < 1e-10);
    // Density threshold crossings sit at the analytic edges.
    CHECK(d.mass_between(-1.0, lo - 0.01) < 1e-4);
    CHECK(d.mass_between(hi + 0.02, 10.0) < 1e-4);
    const auto small = ewma_density(1e-3);
    CHECK(small.mass_between(0.9, 1.1) > 0.999);
}

TEST_CASE("EWMA lower edge falls like exp(-q)") {
    const double l2 = ewma_edges(2.0).first, l4 = ewma_edges(4.0).first;
    // λ− e^{q+1} = e^{λ−} → 1.
    CHECK(l2 * std::exp(3.0) == Approx(std::exp(l2)).epsilon(1e-9));
    CHECK(l4 * std::exp(5.0) == Approx(std::exp(l4)).epsilon(1e-9));
    CHECK(std::log(l4 / l2) == Approx(-2.0).epsilon(0.05));
}

TEST_CASE("dressed spectrum of the identity is MP") {
    for (double q : {0.25, 0.5}) {
        const auto d = dressed_spectrum(atom_density(1.0), q);
        CHECK(l1_distance(d, mp_density(q)) < 1e-3);
    }
}

TEST_CASE("dressed resolvent at 0 gives Tr C^-1/(1-q)") {
    const auto rho_c = atoms_density({{0.5, 0.5}, {1.5, 0.5}});
    const double trace_inv = 0.5 / 0.5 + 0.5 / 1.5;
    const cplx g0 = dressed_resolvent(rho_c, 0.5, cplx(-1e-9, 0.0));
    CHECK(-g0.real() == Approx(trace_inv / (1.0 - 0.5)).epsilon(1e-6));
}

TEST_CASE("dressed spectrum at q -> 0 returns the input") {
    const auto rho_c = mp_density(0.3);
    const auto d = dressed_spectrum(rho_c, 1e-4);
    CHECK(l1_distance(d, rho_c) < 1e-2);
}

TEST_CASE("power-law prior: parameters, mass and mean") {
    const PowerLawPrior p{0.35, 2.0};
    CHECK(p.A() == Approx(0.65 * 0.65).epsilon(1e-15));
    CHECK(p.lambda0() == Approx(2 * 0.35 - 1).epsilon(1e-15));
    const auto d = powerlaw_prior_density(p);
    CHECK(mass_with_truncation(d) == Approx(1.0).epsilon(1e-6));
    CHECK(d.support_min() == Approx(0.35).epsilon(1e-12));
    // Mean of the grid part plus the analytic mean of the truncated tail.
    const double L = d.support_max(), x = L - p.lambda0();
    const double tail_mean = p.lambda0() * p.tail_mass(L) + p.mu * p.A() / (p.mu - 1.0) * std::pow(x, 1.0 - p.mu);
    CHECK(d.mean() + tail_mean == Approx(1.0).epsilon(1e-4));
    const auto half = powerlaw_prior_density({0.5, 2.0});
    CHECK(mass_with_truncation(half) == Approx(1.0).epsilon(1e-6));
    const auto one = powerlaw_prior_density({1.0, 2.0});
    REQUIRE(one.atoms.size() == 1);
    CHECK(one.atoms[0].location == 1.0);
    CHECK_THROWS_AS(powerlaw_prior_density({0.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(powerlaw_prior_density({1.2, 2.0}), std::invalid_argument);
}

TEST_CASE("elliptic Student density approaches MP for large mu") {
    const auto d = elliptic_student_density({0.5, 100.0});
    CHECK(mass_with_truncation(d) == Approx(1.0).epsilon(1e-6));
    CHECK(l1_distance(d, mp_density(0.5)) < 0.02);
}

TEST_CASE("elliptic Student density against sampled Student panels") {
    const auto d = elliptic_student_density({0.5, 4.0});
    const Eigen::Index N = 500, T = 1000;
    const CorrelationMatrix I(Eigen::MatrixXd::Identity(N, N));
    std::vector<double> samples;
    for (std::uint64_t s = 0; s < 3; ++s) {
        const auto e = pearson(student_panel(I, 4.0, T, 900 + s)).eigenvalues();
        for (Eigen::Index i = 0; i < N; ++i) samples.push_back(e(i));
    }
    // Bulk comparison on [0, 4]; the outside term covers the remainder.
    CHECK(binned_l1(samples, d, 40, 0.0, 4.0) < 0.05);
}

TEST_CASE("random SVD benchmark") {
    const auto [gm, gp] = rsvd_gamma(0.25, 0.25);
    CHECK(gm == Approx(0.0).epsilon(1e-15));
    CHECK(gp == Approx(0.75).epsilon(1e-15));
    const auto d = rsvd_benchmark(0.25, 0.25);
    CHECK(d.support_max() == Approx(std::sqrt(0.75)).epsilon(1e-12));
    CHECK(d.total_mass() == Approx(1.0).epsilon(1e-9));
    const auto big = rsvd_benchmark(0.6, 0.6);
    double at_one = 0.0;
    for (const auto& a : big.atoms)
        if (a.location == 1.0) at_one = a.mass;
    CHECK(at_one == Approx(0.2).epsilon(1e-12));
    for (const auto& x : {d, big}) {
        CHECK(x.support_min() >= 0.0);
        CHECK(x.support_max() <= 1.0);
    }
    const double n = 1e-4, m = 4e-4;
    const auto [sm, sp] = rsvd_gamma(n, m);
    CHECK(std::sqrt(sm) == Approx(std::abs(m - n) / (std::sqrt(m) + std::sqrt(n))).epsilon(1e-3));
    CHECK(std::sqrt(sp) == Approx((m - n) / (std::sqrt(m) - std::sqrt(n))).epsilon(1e-3));
    CHECK_THROWS_AS(rsvd_benchmark(1.2, 0.3), std::invalid_argument);
}

TEST_CASE("returned densities carry unit mass") {
    for (const auto& d : {mp_density(0.3), mp_density(3.0), wigner_density(2.0), rsvd_benchmark(0.3, 0.5),
                          rsvd_benchmark(0.7, 0.6)})
        CHECK(mass_with_truncation(d) == Approx(1.0).epsilon(1e-6));
}

}  // TEST_SUITE
