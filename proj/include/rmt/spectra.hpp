#pragma once

#include "rmt/numerics.hpp"
#include "rmt/spectral_density.hpp"

#include <cmath>
#include <utility>

namespace rmt {

struct SpectralOptions {
    std::size_t points = 2000;
    double eps_rel = 1e-4;     // ε(λ) = eps_rel·max(|λ|, bulk scale)
    double tail_mass = 1e-4;   // heavy tails cut where the remaining mass equals this
};

/// Marčenko–Pastur density of E = XᵀX/T for IID unit-variance data, q = N/T.
/// For q > 1 the continuous part carries mass 1/q and an atom 1 − 1/q sits at 0.
SpectralDensity mp_density(double q, std::size_t points = 2000);
/// Closed-form MP resolvent (physical root, Im G·Im z < 0).
cplx mp_resolvent(double q, cplx z);
/// B(w) = 1/w + 1/(1 − qw).
cplx mp_blue(double q, cplx w);
std::pair<double, double> mp_edges(double q);

/// Semicircle of variance `variance` (radius 2√variance).
SpectralDensity wigner_density(double variance = 1.0, std::size_t points = 2000);
cplx wigner_resolvent(double variance, cplx z);

/// Spectrum of the exponentially weighted estimator with q = Nε:
/// λ q G = q − log(1 − qG), solved by Newton with continuation along the grid.
SpectralDensity ewma_density(double q, const SpectralOptions& opt = {});
/// B(w) = 1/w − log(1 − qw)/(qw); NaN where qw ≥ 1.
double ewma_blue(double q, double w);
/// Band edges, the two roots of λ = log λ + q + 1.
std::pair<double, double> ewma_edges(double q);

/// Spectrum of E = C^{1/2} X Xᵀ C^{1/2}/T given the spectrum of C: solves
/// z G_E(z) = Z G_C(Z) with Z = z/(1 − q + q z G_E(z)).
SpectralDensity dressed_spectrum(const SpectralDensity& rho_c, double q,
                                 const SpectralOptions& opt = {});
/// G_E at a single point off the support; −G_E(0⁻) = (1/N) Tr E⁻¹.
cplx dressed_resolvent(const SpectralDensity& rho_c, double q, cplx z);

/// Power-law prior ρ_C(λ) = μA/(λ−λ0)^{1+μ} for λ ≥ α, with A and λ0 fixed by
/// unit mass and unit mean: λ0 = α − (μ−1)(1−α), A = ((μ−1)(1−α))^μ
/// (for μ = 2: λ0 = 2α−1, A = (1−α)²).
struct PowerLawPrior {
    double alpha = 0.35;
    double mu = 2.0;

    double lambda0() const { return alpha - (mu - 1.0) * (1.0 - alpha); }
    double A() const { return std::pow((mu - 1.0) * (1.0 - alpha), mu); }
    /// Tail mass above λ (λ ≥ α).
    double tail_mass(double lambda) const;
    void validate() const;
};

SpectralDensity powerlaw_prior_density(const PowerLawPrior& p, const SpectralOptions& opt = {});

/// Multivariate Student returns r = σξ, σ² = (μ−2)/s, s ~ χ²(μ), so that the
/// columns have unit variance and the spectrum has unit mean.
struct EllipticParams {
    double q = 0.5;
    double mu = 4.0;
    void validate() const;
};

/// Spectrum of the Pearson matrix of elliptic Student data:
/// z = 1/G − c·G_P(q c G), c = μ − 2, G_P the resolvent of s ~ χ²(μ).
/// Real and imaginary parts of this equation are the coupled equations for
/// (Re G, ρ). The tail ρ ~ λ^{−1−μ/2} is truncated at `tail_mass`.
SpectralDensity elliptic_student_density(const EllipticParams& p, const SpectralOptions& opt = {});

/// Singular-value density of the cross-correlation of two independent whitened
/// panels with n = N/T, m = M/T (0 < n, m < 1).
SpectralDensity rsvd_benchmark(double n, double m, std::size_t points = 2000);
/// γ± = n + m − 2mn ± 2√(mn(1−n)(1−m)).
std::pair<double, double> rsvd_gamma(double n, double m);

}  // namespace rmt
