#include "doctest.h"
#include "helpers.hpp"
#include "rmt/estimators.hpp"
#include "rmt/portfolio.hpp"
#include "rmt/stats.hpp"
#include "rmt/synth.hpp"

#include <cmath>

using namespace rmt;
using doctest::Approx;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("portfolio") {

TEST_CASE("markowitz weights: 2x2 example, naive limit, gain and scaling") {
    Eigen::Matrix2d c;
    c << 1, 0.5, 0.5, 1;
    const auto w = markowitz_weights(CorrelationMatrix(c), Eigen::Vector2d(1, 0), 1.0);
    // C⁻¹g = (4/3, −2/3), gᵀC⁻¹g = 4/3.
    CHECK(w.w(0) == Approx(1.0).epsilon(1e-12));
    CHECK(w.w(1) == Approx(-0.5).epsilon(1e-12));

    Rng rng(1);
    const Eigen::VectorXd g = random_unit_vector(rng, 8);
    const auto naive = markowitz_weights(CorrelationMatrix(Eigen::MatrixXd::Identity(8, 8)), g, 2.0);
    CHECK(max_abs(naive.w - 2.0 * g / g.squaredNorm()) < 1e-12);

    const auto C = build_true_correlation({TrueCorrelationKind::PowerLaw, 30}, 5);
    const Eigen::VectorXd g30 = random_unit_vector(rng, 30);
    const auto a = markowitz_weights(C, g30, 1.5);
    CHECK(std::abs(a.w.dot(g30) - 1.5) < 1e-10);
    const auto b = markowitz_weights(C, g30, 3.0);
    CHECK(max_abs(b.w - 2.0 * a.w) == 0.0);
}

TEST_CASE("markowitz weights shrink along large-eigenvalue directions") {
    Eigen::VectorXd lam(3);
    lam << 4.0, 1.0, 0.5;
    const Eigen::MatrixXd V = haar_rotation(3, std::uint64_t{2});
    const auto C = CorrelationMatrix::from_spectrum(lam, V);
    const Eigen::VectorXd g = C.eigenvectors().rowwise().sum();
    const auto w = markowitz_weights(C, g, 1.0);
    const Eigen::VectorXd proj = C.eigenvectors().transpose() * w.w;
    CHECK(std::abs(proj(0)) < std::abs(proj(1)));
    CHECK(std::abs(proj(1)) < std::abs(proj(2)));
}

TEST_CASE("markowitz weights reject singular matrices") {
    CHECK_THROWS_WITH_AS(markowitz_weights(CorrelationMatrix(Eigen::MatrixXd::Ones(2, 2)), Eigen::Vector2d(1, 0), 1.0),
                         doctest::Contains("clean it first"), std::invalid_argument);
    CHECK_THROWS_AS(markowitz_weights(CorrelationMatrix(Eigen::MatrixXd::Identity(2, 2)), Eigen::Vector2d(0, 0), 1.0),
                    std::invalid_argument);
}

TEST_CASE("risk triple with E = C gives three equal risks") {
    const auto C = build_true_correlation({TrueCorrelationKind::PowerLaw, 40}, 3);
    Rng rng(4);
    const auto r = risk_triple(C, &C, random_unit_vector(rng, 40), 1.0);
    REQUIRE(r.true_risk.has_value());
    CHECK(r.in_sample == Approx(*r.true_risk).epsilon(1e-10));
    CHECK(r.out_of_sample == Approx(*r.true_risk).epsilon(1e-10));
    const auto only = risk_triple(C, nullptr, random_unit_vector(rng, 40), 1.0);
    CHECK_FALSE(only.true_risk.has_value());
}

TEST_CASE("theoretical risk ratios") {
    auto [a, b] = theoretical_risk_ratios(0.0);
    CHECK(a == 1.0);
    CHECK(b == 1.0);
    auto [c, d] = theoretical_risk_ratios(0.5);
    CHECK(c == Approx(0.7071).epsilon(1e-4));
    CHECK(d == Approx(1.4142).epsilon(1e-4));
    CHECK(d / c == Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(theoretical_risk_ratios(1.0), std::invalid_argument);
}

TEST_CASE("Jensen ordering of the three risks over replicas") {
    const Eigen::Index N = 100, T = 200;
    const auto C = build_true_correlation({TrueCorrelationKind::PowerLaw, N}, 6);
    Rng rng(7);
    double in = 0.0, tr = 0.0, out = 0.0;
    const int reps = 100;
    for (int k = 0; k < reps; ++k) {
        const auto E = pearson(gaussian_panel(C, T, rng));
        const auto r = risk_triple(E, &C, random_unit_vector(rng, N), 1.0);
        in += std::sqrt(r.in_sample);
        tr += std::sqrt(*r.true_risk);
        out += std::sqrt(r.out_of_sample);
    }
    CHECK(in < tr);
    CHECK(tr < out);
}

TEST_CASE("risk ratios approach one as q -> 0") {
    const Eigen::Index N = 20, T = 20000;
    const CorrelationMatrix I(Eigen::MatrixXd::Identity(N, N));
    Rng rng(8);
    const auto E = pearson(gaussian_panel(I, T, rng));
    const auto r = risk_triple(E, &I, random_unit_vector(rng, N), 1.0);
    CHECK(std::sqrt(r.in_sample / *r.true_risk) == Approx(1.0).epsilon(0.02));
    CHECK(std::sqrt(r.out_of_sample / *r.true_risk) == Approx(1.0).epsilon(0.02));
}

TEST_CASE("backtest: dates, determinism and thread independence") {
    const Eigen::Index N = 40;
    const auto C = build_true_correlation({TrueCorrelationKind::PowerLaw, N}, 9);
    const auto panel = gaussian_panel(C, 500, std::uint64_t{10});
    BacktestOptions opt;
    opt.window = 80;
    opt.horizon = 19;
    opt.step = 20;
    opt.threads = 1;
    const std::vector<double> alphas{0.0, 0.5, 1.0};
    const auto a = backtest(panel, CleaningKind::Clipping, alphas, opt);
    REQUIRE(a.size() == 3);
    // t = 80, 100, …, 480 with t + 19 < 500.
    CHECK(a[0].dates == 21);
    opt.threads = 3;
    const auto b = backtest(panel, CleaningKind::Clipping, alphas, opt);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].risk.in_sample == b[i].risk.in_sample);
        CHECK(a[i].risk.out_of_sample == b[i].risk.out_of_sample);
    }
    const auto single = backtest(panel, CleaningScheme{CleaningKind::Clipping, 0.5}, opt);
    CHECK(single.in_sample == a[1].risk.in_sample);
    // Raw E underestimates risk; α = 1 uses the identity, in-sample risk 1.
    CHECK(a[0].risk.in_sample < a[0].risk.out_of_sample);
    CHECK(a[2].risk.in_sample == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("backtest: unhedged market mode at alpha = 1") {
    const Eigen::Index N = 50;
    const auto C = build_true_correlation({TrueCorrelationKind::SingleSpike, N, 0.5});
    const auto panel = gaussian_panel(C, 400, std::uint64_t{11});
    BacktestOptions opt;
    opt.window = 200;
    opt.horizon = 49;
    opt.step = 50;
    const auto rows = backtest(panel, CleaningKind::Clipping, {0.0, 1.0}, opt);
    CHECK(rows[1].risk.out_of_sample > 5.0);
    CHECK(rows[1].risk.out_of_sample > 3.0 * rows[0].risk.out_of_sample);
}

TEST_CASE("backtest: random predictor needs no market information and is seeded") {
    const auto panel = gaussian_panel(CorrelationMatrix(Eigen::MatrixXd::Identity(20, 20)), 300, std::uint64_t{12});
    BacktestOptions opt;
    opt.window = 100;
    opt.horizon = 19;
    opt.step = 40;
    opt.predictor = Predictor::Random;
    opt.seed = 5;
    const auto a = backtest(panel, CleaningScheme{CleaningKind::LinearShrinkage, 0.2}, opt);
    const auto b = backtest(panel, CleaningScheme{CleaningKind::LinearShrinkage, 0.2}, opt);
    CHECK(a.out_of_sample == b.out_of_sample);
    opt.seed = 6;
    const auto c = backtest(panel, CleaningScheme{CleaningKind::LinearShrinkage, 0.2}, opt);
    CHECK(a.out_of_sample != c.out_of_sample);
}

TEST_CASE("backtest rejects short panels") {
    const auto panel = gaussian_panel(CorrelationMatrix(Eigen::MatrixXd::Identity(5, 5)), 100, std::uint64_t{13});
    BacktestOptions opt;
    opt.window = 90;
    opt.horizon = 10;
    CHECK_THROWS_WITH_AS(backtest(panel, CleaningScheme{CleaningKind::Clipping, 0.1}, opt),
                         doctest::Contains("insufficient history"), std::invalid_argument);
}

TEST_CASE("residual test: identity truth and duplicated stocks") {
    const Eigen::Index N = 20;
    const CorrelationMatrix I(Eigen::MatrixXd::Identity(N, N));
    const auto panel = gaussian_panel(I, 2000, std::uint64_t{14});
    BacktestOptions opt;
    opt.window = 1000;
    opt.horizon = 99;
    opt.step = 100;
    const auto r = residual_test(panel, CleaningScheme{CleaningKind::Clipping, 1.0}, opt);
    CHECK(r.in_res == Approx(1.0).epsilon(1e-12));
    CHECK(r.out_res == Approx(1.0).epsilon(0.05));

    Eigen::MatrixXd v = panel.values;
    v.col(1) = v.col(0);
    const auto dup = residual_test(ReturnPanel(v), CleaningScheme{CleaningKind::LinearShrinkage, 1e-9}, opt);
    // Mean over stocks: two of them have (near) zero residual variance.
    CHECK(dup.in_res < (N - 2 + 0.01) / static_cast<double>(N));
}

TEST_CASE("residual test: power-law cleaning beats clipping on power-law truth") {
    const Eigen::Index N = 100;
    const auto C = build_true_correlation({TrueCorrelationKind::PowerLaw, N}, 15);
    const auto panel = gaussian_panel(C, 1200, std::uint64_t{16});
    BacktestOptions opt;
    opt.window = 200;
    opt.horizon = 99;
    opt.step = 100;
    const auto pl = residual_test(panel, CleaningScheme{CleaningKind::PowerLaw, 0.35}, opt);
    const auto cl = residual_test(panel, CleaningScheme{CleaningKind::Clipping, 0.5}, opt);
    CHECK(std::abs(pl.ratio - 1.0) < std::abs(cl.ratio - 1.0));
}

}  // TEST_SUITE
