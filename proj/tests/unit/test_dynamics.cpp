#include "doctest.h"
#include "helpers.hpp"
#include "rmt/dynamics.hpp"
#include "rmt/estimators.hpp"
#include "rmt/spectral_density.hpp"
#include "rmt/stats.hpp"
#include "rmt/synth.hpp"

#include <cmath>
#include <numbers>

using namespace rmt;
using doctest::Approx;

namespace {

// Rows with covariance diag(Λ1, Λb, …, Λb).
ReturnPanel diagonal_panel(double l1, double lb, Eigen::Index N, Eigen::Index T, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd x = gaussian_matrix(rng, T, N);
    x.col(0) *= std::sqrt(l1);
    x.rightCols(N - 1) *= std::sqrt(lb);
    return ReturnPanel(std::move(x));
}

Eigen::VectorXd e1(Eigen::Index N) { return Eigen::VectorXd::Unit(N, 0); }

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("track: unit vectors, sign alignment and agreement with the batch EWMA") {
    const auto p = diagonal_panel(10.0, 1.0, 6, 3000, 1);
    const auto tr = track_top(p, 0.02, e1(6));
    REQUIRE(tr.size() == 3000);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(std::abs(tr.v1[i].norm() - 1.0) < 1e-10);
        if (i > 0) CHECK(tr.v1[i].dot(tr.v1[i - 1]) >= 0.0);
        CHECK(tr.theta[i] >= 0.0);
        CHECK(tr.theta[i] <= std::numbers::pi);
    }
    const auto E = ewma_estimator(p, 0.02);
    CHECK(std::abs(tr.lambda1.back() - E.eigenvalues()(0)) < 1e-8);
    const double ov = std::abs(tr.v1.back().dot(E.eigenvectors().col(0)));
    CHECK(ov == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("track options: burn-in and thinning") {
    const auto p = diagonal_panel(10.0, 1.0, 3, 1000, 2);
    TrackOptions opt;
    opt.burn_in = 100;
    opt.record_every = 10;
    const auto tr = track_top(p, 0.05, e1(3), opt);
    CHECK(tr.size() == 90);
    CHECK(tr.times.front() == 100);
    CHECK(tr.times[1] == 110);
    CHECK_THROWS_AS(track_top(p, 0.0, e1(3)), std::invalid_argument);
    CHECK_THROWS_AS(track_top(p, 0.1, e1(4)), std::invalid_argument);
}

TEST_CASE("top eigenvalue statistics of a static model") {
    const double l1 = 10.0, lb = 1.0, eps = 0.02;
    // N = 2: level repulsion from the bulk adds ≈ (N−1)εΛ1Λb/(2(Λ1−Λb)), absent from the leading-order mean.
    const auto p = diagonal_panel(l1, lb, 2, 400000, 3);
    TrackOptions opt;
    opt.burn_in = 500;
    const auto tr = track_top(p, eps, e1(2), opt);
    // ⟨λ1⟩ ≈ Λ1 − εΛb/2 and Var λ1 ≈ Λ1²ε.
    CHECK(mean(tr.lambda1) == Approx(l1 - eps * lb / 2.0).epsilon(0.01));
    CHECK(variance(tr.lambda1) == Approx(l1 * l1 * eps).epsilon(0.2));
}

TEST_CASE("angle density: symmetry, normalization and small-angle limit") {
    const AngleDensity d(10.0, 1.0, 0.02);
    for (double t : {0.01, 0.1, 0.4, 1.0, 1.5})
        CHECK(d.pdf(t) == Approx(d.pdf(std::numbers::pi - t)).epsilon(1e-9));
    const auto grid = linear_grid(0.0, std::numbers::pi, 20001);
    const auto v = stationary_angle_density(10.0, 1.0, 0.02, grid);
    double mass = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) mass += 0.5 * (grid[i] - grid[i - 1]) * (v[i] + v[i - 1]);
    CHECK(mass == Approx(1.0).epsilon(1e-6));
    double asym = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) asym = std::max(asym, std::abs(v[i] - v[grid.size() - 1 - i]));
    CHECK(asym < 1e-9);
    CHECK(d.cdf(std::numbers::pi / 2) == Approx(0.5).epsilon(1e-9));

    // Λ1 ≫ Λb: ⟨cos²θ⟩ ≈ 1 − εΛb/(2Λ1).
    const AngleDensity far(1000.0, 1.0, 0.02);
    CHECK(1.0 - far.mean_cos2() == Approx(0.02 / 2000.0).epsilon(0.02));

    // Very small ε concentrates the mass near 0 and π.
    const AngleDensity sharp(10.0, 1.0, 1e-4);
    CHECK(sharp.cdf(0.05) + 1.0 - sharp.cdf(std::numbers::pi - 0.05) > 0.999);

    CHECK_THROWS_AS(AngleDensity(10.0, 1.0, 0.02, 1.0), std::invalid_argument);  // Λ1/Λ0 = 10
    CHECK_THROWS_AS(AngleDensity(1.0, 2.0, 0.02), std::invalid_argument);
    CHECK(default_lambda0(10.0, 1.0) == Approx(167.0).epsilon(0.01));
}

TEST_CASE("theoretical variograms") {
    const auto v = theoretical_variograms(10.0, 1.0, 0.04, {0.0, 1e6});
    CHECK(v.value[0] == 0.0);
    CHECK(v.vector[0] == 0.0);
    CHECK(v.value[1] == Approx(2.0 * 100.0 * 0.04).epsilon(1e-12));
    CHECK(v.vector[1] == Approx(0.008).epsilon(1e-12));
}

TEST_CASE("empirical variogram: constant track, bounds and length check") {
    EigenTrack c;
    c.epsilon = 0.1;
    for (int i = 0; i < 200; ++i) {
        c.times.push_back(i);
        c.lambda1.push_back(3.0);
        c.v1.push_back(e1(3));
        c.theta.push_back(0.0);
    }
    const auto z = empirical_variogram(c, {0, 5, 50});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(z.value[i] == 0.0);
        CHECK(z.vector[i] == 0.0);
    }
    EigenTrack shortt = c;
    shortt.epsilon = 0.01;
    CHECK_THROWS_WITH_AS(empirical_variogram(shortt, {5}), doctest::Contains("10/epsilon"), std::invalid_argument);

    const auto p = diagonal_panel(3.0, 1.0, 4, 5000, 4);
    const auto tr = track_top(p, 0.05, e1(4));
    const auto v = empirical_variogram(tr, {0, 1, 10, 100, 1000});
    CHECK(v.value[0] == 0.0);
    for (std::size_t i = 0; i < v.tau.size(); ++i) {
        CHECK(v.value[i] >= 0.0);
        CHECK(v.vector[i] <= 2.0);
    }
    const auto no = empirical_variogram(tr, {100}, true);
    CHECK(no.value[0] >= 0.0);
}

TEST_CASE("value variogram of a stationary track matches its asymptote") {
    const double l1 = 10.0, lb = 1.0, eps = 0.02;
    const auto p = diagonal_panel(l1, lb, 2, 200000, 5);
    TrackOptions opt;
    opt.burn_in = 500;
    const auto tr = track_top(p, eps, e1(2), opt);
    const std::vector<long long> lags{50, 100, 150, 250};
    const auto emp = empirical_variogram(tr, lags);
    const auto th = theoretical_variograms(l1, lb, eps, {50.0, 100.0, 150.0, 250.0});
    for (std::size_t i = 0; i < lags.size(); ++i) CHECK(emp.value[i] == Approx(th.value[i]).epsilon(0.15));
}

TEST_CASE("non-stationarity detector") {
    const double eps = 0.02;
    const auto calm = track_top(diagonal_panel(10.0, 1.0, 3, 40000, 6), eps, e1(3));
    const auto r0 = detect_nonstationarity(calm);
    CHECK_FALSE(r0.fired);
    CHECK(r0.ratio == Approx(1.0).epsilon(0.3));

    ReturnPanel jump = diagonal_panel(10.0, 1.0, 3, 40000, 7);
    jump.values.bottomRows(20000).col(0) *= std::sqrt(3.0);  // Λ1: 10 → 30
    const auto r1 = detect_nonstationarity(track_top(jump, eps, e1(3)));
    CHECK(r1.fired);
    CHECK(r1.observed > 1.5 * r1.predicted);
}

}  // TEST_SUITE
