#pragma once

#include "rmt/cleaning.hpp"
#include "rmt/correlation.hpp"
#include "rmt/panel.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace rmt {

struct PortfolioWeights {
    Eigen::VectorXd w;
    double target_gain = 0.0;
};

/// w = G C⁻¹g/(gᵀC⁻¹g).
PortfolioWeights markowitz_weights(const CorrelationMatrix& C, const Eigen::VectorXd& g, double G);

/// Squared risks R² (variances of the portfolio).
struct RiskReport {
    double in_sample = 0.0;
    double out_of_sample = 0.0;
    std::optional<double> true_risk;
};

/// R²_in = G²/(gᵀE⁻¹g); with C: R²_true = G²/(gᵀC⁻¹g) and
/// R²_out = G² gᵀE⁻¹CE⁻¹g/(gᵀE⁻¹g)². Without C only in_sample is set.
RiskReport risk_triple(const CorrelationMatrix& E, const CorrelationMatrix* C_true,
                       const Eigen::VectorXd& g, double G);

/// (R_in/R_true, R_out/R_true) = (√(1−q), 1/√(1−q)).
std::pair<double, double> theoretical_risk_ratios(double q);

enum class Predictor { Returns, Random };

struct BacktestOptions {
    int window = 1000;
    int horizon = 99;
    int step = 100;
    Predictor predictor = Predictor::Returns;
    std::uint64_t seed = 0;   // random predictor only
    unsigned threads = 0;     // 0: RMT_THREADS or 1
};

struct BacktestRow {
    CleaningKind kind = CleaningKind::Clipping;
    double alpha = 0.0;
    RiskReport risk;           // date averages of R²_in and R²_out
    std::size_t dates = 0;
};

/// Rebalance dates t = window, window+step, … with t + horizon < T. On each
/// date: E from days [t−window, t−1] (each column demeaned and scaled by its
/// trailing volatility σ_i), cleaned with `kind` at every α; predictor
/// g = z_t/|z_t| with z_t = r_t/σ (or a unit random vector); w = E_α⁻¹g/(gᵀE_α⁻¹g);
/// R²_in = 1/(gᵀE_α⁻¹g), R²_out = mean over t' in (t, t+horizon] of (Σ_i w_i r_i^{t'}/σ_i)².
std::vector<BacktestRow> backtest(const ReturnPanel& panel, CleaningKind kind,
                                  const std::vector<double>& alphas, const BacktestOptions& opt = {},
                                  double mu = 2.0);

RiskReport backtest(const ReturnPanel& panel, const CleaningScheme& scheme,
                    const BacktestOptions& opt = {});

struct ResidualReport {
    double in_res = 0.0;   // mean of 1/(E_α⁻¹)_ii
    double out_res = 0.0;  // mean realized variance of (E_α⁻¹z)_i/(E_α⁻¹)_ii
    double ratio = 0.0;    // out_res / in_res
    std::size_t dates = 0;
};

/// Same dates and windows as backtest; residual of stock i given all others.
ResidualReport residual_test(const ReturnPanel& panel, const CleaningScheme& scheme,
                             const BacktestOptions& opt = {});

}  // namespace rmt
