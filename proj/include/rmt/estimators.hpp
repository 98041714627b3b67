#pragma once

#include "rmt/correlation.hpp"
#include "rmt/panel.hpp"

#include <vector>

namespace rmt {

/// Demeans and scales every column to unit population (1/T) variance.
/// Throws naming the asset when a column is constant.
ReturnPanel standardize(const ReturnPanel& panel);

/// E = XᵀX with X = values/√T. No demeaning or scaling happens here, so a
/// standardized panel yields the Pearson correlation matrix and a raw panel
/// the (uncentred) covariance.
CorrelationMatrix pearson(const ReturnPanel& panel);

/// E = Σ_t w_t r_t r_tᵀ, w_t ∝ (1−ε)^{T−1−t}, weights normalized to one.
CorrelationMatrix ewma_estimator(const ReturnPanel& panel, double epsilon);

struct StudentMlResult {
    CorrelationMatrix matrix;
    int iterations = 0;
    double last_change = 0.0;
};

/// Fixed point Ĉ = ((N+μ)/T) Σ_t r_t r_tᵀ/(μ + r_tᵀĈ⁻¹r_t), started from
/// Pearson; the update is damped (factor halved) whenever the change grows.
StudentMlResult student_ml(const ReturnPanel& panel, double mu, double tol = 1e-10,
                           int max_iter = 1000);

struct DualSpectrum {
    Eigen::VectorXd eigs_n;  // E = XᵀX/T, N values, descending
    Eigen::VectorXd eigs_t;  // Ẽ = XXᵀ/N, T values, descending
    double max_relative_gap = 0.0;  // max_k |λ_k(E) − (N/T)λ_k(Ẽ)| / λ_max(E)
};

DualSpectrum dual_spectrum_check(const ReturnPanel& panel);

struct EigenportfolioReport {
    Eigen::VectorXd eigenvalues;        // descending
    Eigen::VectorXd realized_variance;  // (1/T) Σ_t (V_αᵀ r_t)²
    Eigen::MatrixXd cross_covariance;   // (1/T) Σ_t p_α p_β
    double max_variance_error = 0.0;
    double max_cross_covariance = 0.0;
};

EigenportfolioReport eigenportfolio_report(const CorrelationMatrix& E, const ReturnPanel& panel);

/// N Σ_i v_i⁴ − 3 for each eigenvector, by rank (0 for unit vectors with
/// Gaussian-like components, N/k − 3 for a vector spread evenly on k entries).
std::vector<double> eigenvector_kurtosis(const CorrelationMatrix& E);

}  // namespace rmt
