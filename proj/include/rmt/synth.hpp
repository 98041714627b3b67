#pragma once

#include "rmt/correlation.hpp"
#include "rmt/panel.hpp"
#include "rmt/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rmt {

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the signs
/// of R's diagonal moved into Q.
Eigen::MatrixXd haar_rotation(Eigen::Index N, Rng& rng);
Eigen::MatrixXd haar_rotation(Eigen::Index N, std::uint64_t seed);

enum class TrueCorrelationKind { Identity, SingleSpike, MultiSpike, PowerLaw };

struct TrueCorrelationSpec {
    TrueCorrelationKind kind = TrueCorrelationKind::Identity;
    Eigen::Index N = 100;
    double rho = 0.0;                 // SingleSpike: common off-diagonal correlation
    std::vector<double> spikes;       // MultiSpike: eigenvalues Λ_r on e_1, e_2, … (bulk stays at 1)
    double alpha = 0.35;              // PowerLaw
    double mu = 2.0;                  // PowerLaw

    void validate() const;
    std::string describe() const;
};

/// PowerLaw: λ_k = λ0 + (A N/k)^{1/μ}, k = 1..N, conjugated by a Haar rotation
/// drawn from `seed` (no trace rescaling). The other kinds ignore the seed.
CorrelationMatrix build_true_correlation(const TrueCorrelationSpec& spec, std::uint64_t seed = 0);

/// Power-law eigenvalue ladder, descending (k = 1 first).
Eigen::VectorXd powerlaw_ladder(Eigen::Index N, double alpha, double mu = 2.0);

/// Symmetric square root through the spectrum (negative eigenvalues floored at 0).
Eigen::MatrixXd sqrt_psd(const CorrelationMatrix& C);

/// Rows r_t = C^{1/2} ξ_t, ξ_t ~ N(0, 1). Raw (not standardized).
ReturnPanel gaussian_panel(const CorrelationMatrix& C, Eigen::Index T, Rng& rng);
ReturnPanel gaussian_panel(const CorrelationMatrix& C, Eigen::Index T, std::uint64_t seed);

/// r_t = σ_t ξ_t, ξ_t ~ N(0, Ĉ), σ_t² = μ/s_t, s_t ~ χ²(μ) common to all assets.
/// Unconditional covariance (μ/(μ−2))Ĉ; columns standardized unless told otherwise.
ReturnPanel student_panel(const CorrelationMatrix& C_hat, double mu, Eigen::Index T, Rng& rng,
                          bool standardize_columns = true);
ReturnPanel student_panel(const CorrelationMatrix& C_hat, double mu, Eigen::Index T, std::uint64_t seed,
                          bool standardize_columns = true);

struct WickReport {
    double prefactor = 0.0;            // fitted ⟨r_i r_j r_k r_l⟩ / [C_ijC_kl + C_ikC_jl + C_ilC_jk]
    double expected_prefactor = 1.0;   // (μ−2)/(μ−4), 1 for μ = ∞
    double max_abs_deviation = 0.0;    // over the sampled quadruples
    double max_z = 0.0;                // same, in units of the standard error of each moment
    std::size_t quadruples = 0;
};

/// Compares sampled fourth moments with the Student generalization of Wick's
/// theorem, C being the sample covariance of the panel. μ = +∞ is the Gaussian case.
/// Index quadruples mix the patterns (i,i,i,i), (i,i,j,j), (i,j,i,j) and (i,j,k,l).
WickReport wick_check(const ReturnPanel& panel, double mu, std::size_t quadruples = 400,
                      std::uint64_t seed = 1);

}  // namespace rmt
