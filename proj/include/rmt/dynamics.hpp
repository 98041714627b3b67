#pragma once

#include "rmt/panel.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace rmt {

struct EigenTrack {
    double epsilon = 0.0;
    std::vector<long long> times;          // row index in the panel
    std::vector<double> lambda1;
    std::vector<Eigen::VectorXd> v1;       // unit norm, consecutive overlaps ≥ 0
    std::vector<double> theta;             // angle to the reference vector, in [0, π]

    std::size_t size() const { return lambda1.size(); }
};

struct TrackOptions {
    long long burn_in = 0;       // steps not recorded
    long long record_every = 1;
    int full_refresh = 100;      // full eigendecomposition every this many steps
    double power_tol = 1e-10;
    int power_max_iter = 500;
};

/// E_t = (1−ε)E_{t−1} + ε r_t r_tᵀ, normalized by its total weight 1−(1−ε)^t so
/// that E_t equals the batch EWMA estimator on rows 0..t. Top eigenpair by power
/// iteration warm-started from the previous vector; the sign of v1 maximizes the
/// overlap with the previous step.
EigenTrack track_top(const ReturnPanel& panel, double epsilon, const Eigen::VectorXd& v_ref,
                     const TrackOptions& opt = {});

/// Λ1/Λ0 such that the small-angle variance of P(θ) equals εκ/2,
/// κ = Λ1Λb/(Λ1−Λb)²: Λ1/Λ0 = 1/(1 + 2/κ − (1−b)/(2−b)), b = Λb/Λ1.
double default_lambda0(double Lambda1, double Lambda_b);

/// P(θ) ∝ [(1 + cos2θ(1−Λb/Λ1))/(1 − cos2θ(1−Λ1/Λ0))]^{1/(4ε)} on [0, π],
/// normalized numerically. Λ0 defaults to default_lambda0.
class AngleDensity {
public:
    AngleDensity(double Lambda1, double Lambda_b, double epsilon,
                 std::optional<double> Lambda0 = std::nullopt);

    double pdf(double theta) const;
    double cdf(double theta) const;
    double lambda0() const { return lambda0_; }
    /// ⟨cos²θ⟩ under P.
    double mean_cos2() const { return mean_cos2_; }

private:
    double log_unnormalized(double theta) const;

    double l1_, lb_, eps_, lambda0_;
    double log_norm_ = 0.0, mean_cos2_ = 0.0;
    std::vector<double> grid_, cum_;
};

std::vector<double> stationary_angle_density(double Lambda1, double Lambda_b, double epsilon,
                                             const std::vector<double>& theta,
                                             std::optional<double> Lambda0 = std::nullopt);

struct Variograms {
    std::vector<double> tau;
    std::vector<double> value;    // ⟨(λ_{t+τ} − λ_t)²⟩
    std::vector<double> vector;   // ⟨(v_{t+τ} − v_t)²⟩ = 2 − 2⟨|v_{t+τ}·v_t|⟩
};

/// 2Λ1²ε(1 − e^{−ετ}) and 2ε(Λb/Λ1)(1 − e^{−ετ}).
Variograms theoretical_variograms(double Lambda1, double Lambda_b, double epsilon,
                                  const std::vector<double>& tau);

/// Averages over all pairs (t, t+τ), or over t = 0, τ, 2τ, … when
/// `non_overlapping`. Requires at least 10/ε recorded steps; τ in record units.
Variograms empirical_variogram(const EigenTrack& track, const std::vector<long long>& tau,
                               bool non_overlapping = false);

struct NonStationarityReport {
    double lambda1 = 0.0;          // track mean of λ1
    double predicted = 0.0;        // 2Λ1²ε
    double observed = 0.0;         // largest value variogram over τ = 5/ε, 10/ε, … ≤ T/2
    double ratio = 0.0;
    bool fired = false;
};

/// Fires when the large-lag value variogram exceeds the stationary asymptote by `threshold`.
NonStationarityReport detect_nonstationarity(const EigenTrack& track, double threshold = 1.5);

}  // namespace rmt
