#pragma once

#include "rmt/panel.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rmt {

struct WhiteningResult {
    ReturnPanel components;        // T × k, X̂_α = Σ_i V_{α,i} X_i/√λ_α
    Eigen::VectorXd eigenvalues;   // kept eigenvalues of XᵀX/T, descending
    Eigen::MatrixXd loadings;      // N × k, columns V_α/√λ_α
    std::size_t dropped = 0;
    std::vector<std::string> warnings;
};

/// Exact normalized principal components; directions with λ ≤ rel_tol·λ_max are
/// dropped with a warning. The output has (1/T)X̂ᵀX̂ = 1.
WhiteningResult normalize_principal_components(const ReturnPanel& panel, double rel_tol = 1e-10);

/// Multiplier of the edge scale in the significance threshold, set by Monte
/// Carlo at a 1% false-positive rate for the largest null singular value.
inline constexpr double kSvdBuffer = 2.0;

struct CrossCorrelationResult {
    Eigen::VectorXd singular_values;   // descending, in [0, 1]
    Eigen::MatrixXd left_vectors;      // M × r, combinations of Y components
    Eigen::MatrixXd right_vectors;     // N × r, combinations of X components
    std::pair<double, double> null_band;  // (√γ−, √γ+)
    double edge_scale = 0.0;
    double threshold = 0.0;            // √γ+ + buffer·edge_scale
    int significant_count = 0;
};

/// Soft-edge fluctuation scale of the largest null singular value:
/// (π T A)^{−2/3} where ρ(c) ≈ A√(√γ+ − c) near the upper edge.
double rsvd_edge_scale(double n, double m, long long T);

/// SVD of Ê = (1/T) ŶᵀX̂ for whitened panels with the same T.
CrossCorrelationResult cross_singulars(const ReturnPanel& xhat, const ReturnPanel& yhat,
                                       double buffer = kSvdBuffer);

/// X IID Gaussian (T × N); Y = s·f + √(1−s²)·noise with f = Xa for a random
/// unit vector a, the same factor in every Y column. Both standardized.
std::pair<ReturnPanel, ReturnPanel> planted_factor_panels(Eigen::Index N, Eigen::Index M, Eigen::Index T,
                                                          double strength, std::uint64_t seed);

}  // namespace rmt
