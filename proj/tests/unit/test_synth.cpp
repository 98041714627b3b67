#include "doctest.h"
#include "helpers.hpp"
#include "rmt/estimators.hpp"
#include "rmt/spectra.hpp"
#include "rmt/spikes.hpp"
#include "rmt/stats.hpp"
#include "rmt/synth.hpp"

#include <cmath>
#include <limits>

using namespace rmt;
using doctest::Approx;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

CorrelationMatrix identity(Eigen::Index N) { return CorrelationMatrix(Eigen::MatrixXd::Identity(N, N)); }

std::vector<double> column(const ReturnPanel& p, Eigen::Index j) {
    return {p.values.col(j).data(), p.values.col(j).data() + p.T()};
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("Haar rotation: orthogonality, N = 1 and determinism") {
    const auto o = haar_rotation(50, std::uint64_t{1});
    CHECK(max_abs(o.transpose() * o - Eigen::MatrixXd::Identity(50, 50)) < 1e-12);
    for (Eigen::Index j = 0; j < 50; ++j) CHECK(std::abs(o.col(j).norm() - 1.0) < 1e-12);
    for (std::uint64_t s = 0; s < 5; ++s) CHECK(std::abs(haar_rotation(1, s)(0, 0)) == 1.0);
    CHECK(haar_rotation(30, std::uint64_t{7}) == haar_rotation(30, std::uint64_t{7}));
    CHECK(haar_rotation(30, std::uint64_t{7}) != haar_rotation(30, std::uint64_t{8}));
}

TEST_CASE("Haar rotation: first-column kurtosis matches the sphere") {
    const Eigen::Index N = 500;
    std::vector<double> k;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Eigen::VectorXd v = haar_rotation(N, s).col(0);
        k.push_back(static_cast<double>(N) * v.array().pow(4).sum() - 3.0);
    }
    // Mean 3N/(N+2) − 3; per-vector spread ≈ √(24/N).
    const double expected = 3.0 * N / (N + 2.0) - 3.0;
    CHECK(std::abs(mean(k) - expected) < 3.0 * std::sqrt(24.0 / N / 200.0));
}

TEST_CASE("true correlation builders") {
    const auto I = build_true_correlation({TrueCorrelationKind::Identity, 10});
    CHECK(I.values() == Eigen::MatrixXd::Identity(10, 10));

    const auto S = build_true_correlation({TrueCorrelationKind::SingleSpike, 100, 0.3});
    CHECK(S.eigenvalues()(0) == Approx(30.7).epsilon(1e-12));
    CHECK((S.eigenvalues().tail(99).array() - 0.7).abs().maxCoeff() < 1e-12);
    CHECK((S.values().diagonal().array() - 1.0).abs().maxCoeff() == 0.0);
    CHECK(S.trace() == Approx(100.0).epsilon(1e-14));

    TrueCorrelationSpec ms{TrueCorrelationKind::MultiSpike, 20};
    ms.spikes = {5.0, 3.0};
    const auto M = build_true_correlation(ms);
    CHECK(M.values()(0, 0) == 5.0);
    CHECK(M.values()(1, 1) == 3.0);
    CHECK(M.trace() == Approx(20.0 + 4.0 + 2.0).epsilon(1e-14));

    TrueCorrelationSpec one{TrueCorrelationKind::PowerLaw, 50};
    one.alpha = 1.0;
    CHECK(max_abs(build_true_correlation(one, 3).values() - Eigen::MatrixXd::Identity(50, 50)) < 1e-12);

    // Summed ladder at α = 0.35, N = 500 (no rescaling).
    const auto P = build_true_correlation({TrueCorrelationKind::PowerLaw, 500}, 4);
    CHECK(P.trace() / 500.0 == Approx(0.9582).epsilon(1e-3));
    CHECK(P.min_eigenvalue() > 0.0);
    CHECK(max_abs(P.values() - P.values().transpose()) < 1e-12);
    CHECK(P.eigenvalues()(499) == Approx(0.35).epsilon(1e-10));

    CHECK_THROWS_AS(build_true_correlation({TrueCorrelationKind::SingleSpike, 10, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_true_correlation({TrueCorrelationKind::SingleSpike, 10, -0.1}), std::invalid_argument);
    TrueCorrelationSpec bad{TrueCorrelationKind::PowerLaw, 10};
    bad.alpha = 0.0;
    CHECK_THROWS_AS(build_true_correlation(bad), std::invalid_argument);
    bad.alpha = 1.1;
    CHECK_THROWS_AS(build_true_correlation(bad), std::invalid_argument);
}

TEST_CASE("powerlaw ladder values") {
    const auto l = powerlaw_ladder(100, 0.35);
    CHECK(l(3) == Approx(2.95).epsilon(1e-12));
    CHECK(l(0) == Approx(-0.3 + 0.65 * 10.0).epsilon(1e-12));
}

TEST_CASE("gaussian panel: determinism, MP spectrum and convergence rate") {
    const auto C = identity(500);
    CHECK(gaussian_panel(C, 50, std::uint64_t{3}).values == gaussian_panel(C, 50, std::uint64_t{3}).values);
    const auto E = pearson(gaussian_panel(C, 1000, std::uint64_t{4}));
    const auto mp = mp_density(0.5);
    CHECK(binned_l1(test::to_vector(E.eigenvalues()), mp, 25, mp.support_min(), mp.support_max()) < 0.05);

    const auto B = identity(5);
    const auto big = pearson(gaussian_panel(B, 1000000, std::uint64_t{5}));
    CHECK(max_abs(big.values() - Eigen::MatrixXd::Identity(5, 5)) < 1e-2);

    // Entrywise error shrinks as T^{-1/2}: RMS over 8 replicas at T = 500 and 8000.
    const auto P = build_true_correlation({TrueCorrelationKind::PowerLaw, 20}, 6);
    auto rms = [&](Eigen::Index T) {
        double s = 0.0;
        for (std::uint64_t r = 0; r < 8; ++r)
            s += (pearson(gaussian_panel(P, T, 100 + r)).values() - P.values()).squaredNorm();
        return std::sqrt(s / 8.0);
    };
    CHECK(rms(500) / rms(8000) == Approx(4.0).epsilon(0.2));
}

TEST_CASE("spiked gaussian panel follows the BBP map") {
    TrueCorrelationSpec ms{TrueCorrelationKind::MultiSpike, 200};
    ms.spikes = {4.0};
    const auto C = build_true_correlation(ms);
    std::vector<double> top;
    for (std::uint64_t s = 0; s < 20; ++s) top.push_back(pearson(gaussian_panel(C, 400, s)).eigenvalues()(0));
    CHECK(std::abs(mean(top) - bbp_map_mp(4.0, 0.5)) < 0.15);
}

TEST_CASE("student panel: standardization, determinism and Gaussian limit") {
    const auto C = identity(4);
    const auto p = student_panel(C, 5.0, 1000, std::uint64_t{6});
    for (Eigen::Index j = 0; j < 4; ++j) {
        CHECK(std::abs(p.values.col(j).mean()) < 1e-10);
        CHECK(std::abs(p.values.col(j).squaredNorm() / 1000.0 - 1.0) < 1e-10);
    }
    CHECK(p.values == student_panel(C, 5.0, 1000, std::uint64_t{6}).values);
    CHECK_THROWS_AS(student_panel(C, 2.0, 10, std::uint64_t{1}), std::invalid_argument);

    const auto s = student_panel(identity(1), 1e6, 20000, std::uint64_t{7}, false);
    const auto g = gaussian_panel(identity(1), 20000, std::uint64_t{8});
    CHECK(ks_two_sample(column(s, 0), column(g, 0)).p_value > 0.01);
}

TEST_CASE("student panel: marginal kurtosis and unconditional covariance") {
    const auto p = student_panel(identity(3), 5.0, 100000, std::uint64_t{9}, false);
    for (Eigen::Index j = 0; j < 3; ++j) {
        // Excess kurtosis 6/(μ−4) = 6, i.e. raw kurtosis 3(μ−2)/(μ−4) = 9.
        CHECK(excess_kurtosis(column(p, j)) + 3.0 == Approx(9.0).epsilon(1.0 / 9.0));
        CHECK(p.values.col(j).squaredNorm() / 1e5 == Approx(5.0 / 3.0).epsilon(0.05));
    }
}

TEST_CASE("student panel: marginal kurtosis with a finite eighth moment") {
    // μ = 12: 3(μ−2)/(μ−4) = 3.75; Monte Carlo spread of the estimate ≈ 0.05 at T = 10⁵.
    const auto p = student_panel(identity(1), 12.0, 100000, std::uint64_t{14}, false);
    CHECK(excess_kurtosis(column(p, 0)) + 3.0 == Approx(3.75).epsilon(0.04));
}

TEST_CASE("Wick relation for Student returns") {
    const auto six = student_panel(identity(2), 6.0, 100000, std::uint64_t{10}, false);
    const auto& v = six.values;
    const double c0 = v.col(0).squaredNorm() / 1e5, c1 = v.col(1).squaredNorm() / 1e5;
    const double m22 = (v.col(0).array().square() * v.col(1).array().square()).mean();
    CHECK(m22 / (c0 * c1) - 1.0 == Approx(1.0).epsilon(0.1));

    const auto g = wick_check(gaussian_panel(identity(8), 100000, std::uint64_t{11}),
                              std::numeric_limits<double>::infinity());
    CHECK(g.expected_prefactor == 1.0);
    // Largest of 400 z-scores: exceeds 4.5 with probability ~3e-3 under the null.
    CHECK(g.max_z < 4.5);
    CHECK(g.prefactor == Approx(1.0).epsilon(0.02));

    const auto eight = wick_check(student_panel(identity(8), 8.0, 100000, std::uint64_t{12}, false), 8.0);
    CHECK(eight.expected_prefactor == Approx(1.5).epsilon(1e-15));
    CHECK(std::abs(eight.prefactor - 1.5) < 0.1);
    CHECK(eight.quadruples == 400);

    // i = j = k = l: fourth moment 3(μ−2)/(μ−4) in units of C_ii².
    const auto p = student_panel(identity(1), 8.0, 100000, std::uint64_t{13}, false);
    const double c = p.values.col(0).squaredNorm() / 1e5;
    CHECK(p.values.col(0).array().pow(4).mean() / (c * c) == Approx(3.0 * 6.0 / 4.0).epsilon(0.1));

    CHECK_THROWS_AS(wick_check(p, 4.0), std::invalid_argument);
}

}  // TEST_SUITE
