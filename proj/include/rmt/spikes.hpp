#pragma once

#include "rmt/correlation.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rmt {

/// Λ + Λq/(Λ−1) above the threshold Λ = 1+√q, (1+√q)² below.
double bbp_map_mp(double Lambda, double q);
/// (Λ + 1/Λ, 1 − Λ⁻²) for Λ > 1, (2, 0) otherwise.
std::pair<double, double> bbp_map_wigner(double Lambda);
/// Λ > 1+√q with bbp_map_mp(Λ, q) = λ; throws for λ ≤ (1+√q)².
double invert_spike_mp(double lambda_obs, double q);

/// Soft-edge fluctuation scale: λ_max ≈ λ+ + γ N^{−2/3} u, u Tracy–Widom.
struct EdgeScaling {
    double lambda_plus = 0.0;
    double gamma = 0.0;
    double theta = 0.5;                       // edge density exponent
    double width_exponent = 2.0 / 3.0;        // 1/(1+θ)
    long long N = 1;

    double scale() const { return gamma * std::pow(static_cast<double>(N), -width_exponent); }
    double rescaled(double lambda_max) const { return (lambda_max - lambda_plus) / scale(); }
};

/// λ+ = (1+√q)², γ = √q λ+^{2/3}.
EdgeScaling edge_scaling_mp(double q, long long N);
/// λ+ = 2, γ = 1.
EdgeScaling edge_scaling_wigner(long long N);

enum class TailRegime { TracyWidom, Marginal, Frechet };

struct HeavyTailRegime {
    TailRegime regime = TailRegime::TracyWidom;
    /// λ_max ∝ N^{exponent} (2/μ − 1/2) in the Fréchet regime.
    std::optional<double> exponent;
    std::string description;
};

/// Largest-eigenvalue regime of a Wigner-like matrix with entries of tail index μ > 2.
HeavyTailRegime heavy_tail_regime(double mu);
std::string to_string(TailRegime r);

struct SpikeOutlier {
    long long index = 0;         // rank in the descending spectrum
    double lambda = 0.0;
    double implied_Lambda = 0.0;
    double overlap = 0.0;        // heuristic: Wigner formula 1 − Λ⁻²
};

struct SpikeReport {
    std::vector<SpikeOutlier> outliers;
    double threshold = 0.0;
    EdgeScaling edge;
    static constexpr const char* kOverlapNote = "overlap uses the Wigner formula 1-Lambda^-2 (heuristic)";
};

/// Flags eigenvalues above λ+ + u·γN^{−2/3}.
SpikeReport detect_spikes(const CorrelationMatrix& E, double q, double u_threshold = 3.0);
/// Same, from a descending list of eigenvalues.
SpikeReport detect_spikes(const Eigen::VectorXd& eigenvalues, double q, double u_threshold = 3.0);

}  // namespace rmt
