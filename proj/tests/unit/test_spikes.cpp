#include "doctest.h"
#include "helpers.hpp"
#include "rmt/estimators.hpp"
#include "rmt/spikes.hpp"
#include "rmt/stats.hpp"
#include "rmt/synth.hpp"

#include <cmath>

using namespace rmt;
using doctest::Approx;

namespace {

Eigen::VectorXd spiked_eigs(double Lambda, Eigen::Index N, Eigen::Index T, Rng& rng) {
    Eigen::MatrixXd x = gaussian_matrix(rng, T, N);
    x.col(0) *= std::sqrt(Lambda);
    return symmetric_eigenvalues(x.transpose() * x / static_cast<double>(T));
}

}  // namespace

TEST_SUITE("spikes") {

TEST_CASE("BBP map for Marchenko-Pastur") {
    CHECK(bbp_map_mp(3.0, 0.25) == Approx(3.375).epsilon(1e-15));
    CHECK(bbp_map_mp(1.2, 0.25) == Approx(2.25).epsilon(1e-15));
    CHECK(bbp_map_mp(1e6, 0.25) - 1e6 == Approx(0.25).epsilon(1e-5));
    // Continuous, non-decreasing, flat below threshold.
    const double q = 0.5, th = 1.0 + std::sqrt(q);
    double prev = 0.0;
    for (double L = 0.01; L < 10.0; L += 0.01) {
        const double v = bbp_map_mp(L, q);
        CHECK(v >= prev - 1e-12);
        if (L <= th) CHECK(v == (1.0 + std::sqrt(q)) * (1.0 + std::sqrt(q)));
        prev = v;
    }
    CHECK(std::abs(bbp_map_mp(th + 1e-9, q) - th * th) < 1e-6);
}

TEST_CASE("BBP map for Wigner") {
    auto [l, o] = bbp_map_wigner(2.0);
    CHECK(l == Approx(2.5).epsilon(1e-15));
    CHECK(o == Approx(0.75).epsilon(1e-15));
    for (double L : {1.0, 0.5}) {
        auto [l2, o2] = bbp_map_wigner(L);
        CHECK(l2 == 2.0);
        CHECK(o2 == 0.0);
    }
}

TEST_CASE("invert_spike_mp round trip and limits") {
    CHECK(invert_spike_mp(3.375, 0.25) == Approx(3.0).epsilon(1e-12));
    for (double q : {0.1, 0.5, 0.9})
        for (double L = 1.0 + std::sqrt(q) + 0.01; L < 30.0; L *= 1.3)
            CHECK(std::abs(invert_spike_mp(bbp_map_mp(L, q), q) - L) < 1e-10 * L);
    CHECK(invert_spike_mp(2.25 + 1e-9, 0.25) == Approx(1.5).epsilon(1e-3));
    CHECK(invert_spike_mp(1000.0, 0.25) == Approx(1000.0 - 0.25).epsilon(1e-6));
    CHECK_THROWS_AS(invert_spike_mp(2.0, 0.25), std::invalid_argument);
}

TEST_CASE("edge scaling constants") {
    const auto e = edge_scaling_mp(0.25, 1);
    CHECK(e.lambda_plus == Approx(2.25).epsilon(1e-15));
    CHECK(e.gamma == Approx(0.5 * std::pow(2.25, 2.0 / 3.0)).epsilon(1e-15));
    CHECK(e.gamma == Approx(0.858).epsilon(1e-3));
    CHECK(e.width_exponent == Approx(1.0 / (1.0 + e.theta)).epsilon(1e-15));
    CHECK(e.width_exponent == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(edge_scaling_mp(0.5, 500).scale() == Approx(0.02).epsilon(0.1));
    const auto w = edge_scaling_wigner(100);
    CHECK(w.lambda_plus == 2.0);
    CHECK(w.gamma == 1.0);
}

TEST_CASE("heavy-tail regimes") {
    CHECK(heavy_tail_regime(5.0).regime == TailRegime::TracyWidom);
    const auto f = heavy_tail_regime(3.0);
    CHECK(f.regime == TailRegime::Frechet);
    REQUIRE(f.exponent.has_value());
    CHECK(*f.exponent == Approx(1.0 / 6.0).epsilon(1e-15));
    const auto m = heavy_tail_regime(4.0);
    CHECK(m.regime == TailRegime::Marginal);
    CHECK(m.description.find("2") != std::string::npos);
    CHECK_THROWS_AS(heavy_tail_regime(2.0), std::invalid_argument);
}

TEST_CASE("null Wishart: false positives and edge location") {
    Rng rng(1);
    const Eigen::Index N = 200, T = 400;
    int spikes = 0;
    std::vector<double> u;
    for (int k = 0; k < 30; ++k) {
        const auto e = test::wishart_eigs(N, T, rng);
        const Eigen::VectorXd sorted = Eigen::Map<const Eigen::VectorXd>(e.data(), N);
        const auto rep = detect_spikes(sorted, 0.5);
        spikes += static_cast<int>(rep.outliers.size());
        u.push_back(rep.edge.rescaled(sorted(0)));
    }
    CHECK(spikes <= 3);
    const double med = median(u);
    CHECK(med > -1.5);
    CHECK(med < 0.5);
}

TEST_CASE("spiked Wishart: detection and implied Lambda") {
    Rng rng(2);
    const Eigen::Index N = 200, T = 400;
    std::vector<double> implied;
    for (int k = 0; k < 20; ++k) {
        const auto rep = detect_spikes(spiked_eigs(5.0, N, T, rng), 0.5);
        REQUIRE(rep.outliers.size() >= 1);
        CHECK(rep.outliers[0].index == 0);
        implied.push_back(rep.outliers[0].implied_Lambda);
        for (const auto& o : rep.outliers) {
            CHECK(o.lambda > rep.threshold);
            CHECK(o.implied_Lambda > 1.0 + std::sqrt(0.5));
            CHECK(o.overlap == Approx(1.0 - 1.0 / (o.implied_Lambda * o.implied_Lambda)).epsilon(1e-12));
        }
    }
    CHECK(mean(implied) == Approx(5.0).epsilon(0.3 / 5.0));
    int sub = 0;
    for (int k = 0; k < 20; ++k) sub += static_cast<int>(detect_spikes(spiked_eigs(1.3, N, T, rng), 0.5).outliers.size());
    CHECK(sub <= 2);
    CHECK(std::string(SpikeReport::kOverlapNote).find("heuristic") != std::string::npos);
}

TEST_CASE("detect_spikes accepts a correlation matrix") {
    Eigen::VectorXd lam = Eigen::VectorXd::Ones(50);
    lam(0) = 10.0;
    const auto C = CorrelationMatrix::from_spectrum(lam, haar_rotation(50, std::uint64_t{3}));
    const auto rep = detect_spikes(C, 0.5);
    REQUIRE(rep.outliers.size() == 1);
    CHECK(rep.outliers[0].lambda == Approx(10.0).epsilon(1e-12));
    CHECK(rep.outliers[0].implied_Lambda == Approx(invert_spike_mp(10.0, 0.5)).epsilon(1e-12));
}

}  // TEST_SUITE
