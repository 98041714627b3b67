#pragma once

#include "rmt/numerics.hpp"
#include "rmt/spectral_density.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace rmt {

/**
 * Resolvent G(z) = ∫ρ(λ)/(z−λ)dλ + Σ m_k/(z−x_k) of a SpectralDensity.
 *
 * Sign convention: Im G < 0 for Im z > 0, and the density is recovered as
 * ρ(λ) = Im G(λ − iε)/π. The continuous part is integrated exactly on its
 * piecewise-linear representation (closed-form logarithms near z, 4-point
 * Gauss–Legendre on far segments), so evaluations are accurate right up to
 * the real axis.
 */
class Resolvent {
public:
    explicit Resolvent(const SpectralDensity& rho);

    /// Throws std::invalid_argument("pole on support") for real z on the support.
    cplx operator()(cplx z) const { return eval(z, false).first; }
    cplx derivative(cplx z) const { return eval(z, true).second; }
    std::pair<cplx, cplx> value_and_derivative(cplx z) const { return eval(z, true); }

    bool on_support(cplx z) const;
    double mean() const { return mean_; }
    double stddev() const { return stddev_; }
    double lower() const { return lo_; }
    double upper() const { return hi_; }
    double total_mass() const { return mass_; }
    const SpectralDensity& density() const { return rho_; }

private:
    std::pair<cplx, cplx> eval(cplx z, bool with_derivative) const;

    SpectralDensity rho_;
    double mean_ = 0.0, stddev_ = 0.0, lo_ = 0.0, hi_ = 0.0, mass_ = 0.0;
};

cplx resolvent(const SpectralDensity& density, cplx z);

/// ρ(λ) = Im g(λ − iε)/π on `grid`. Known atoms are subtracted from g before
/// extraction and attached to the result. The continuous part is renormalized
/// when the total mass is within 2% of one; otherwise the deficit is stored in
/// `truncated_mass`. Throws "non-Herglotz evaluator" on density < −1e-8.
SpectralDensity density_from_resolvent(const std::function<cplx(cplx)>& g,
                                       const std::vector<double>& grid, double eps,
                                       const std::vector<Atom>& atoms = {});

/// Same, with a point-dependent offset ε(λ).
SpectralDensity density_from_resolvent(const std::function<cplx(cplx)>& g,
                                       const std::vector<double>& grid,
                                       const std::function<double(double)>& eps,
                                       const std::vector<Atom>& atoms = {});

/// Functional inverse of G: returns z with G(z) = w, |G(z) − w| < 1e-10.
cplx blue(const Resolvent& G, cplx w, const RootOptions& opt = {});
cplx blue(const SpectralDensity& density, cplx w, const RootOptions& opt = {});

/// R(w) = B(w) − 1/w.
cplx r_transform(const SpectralDensity& density, cplx w, const RootOptions& opt = {});

/// S(w) = −((1+w)/w)·η⁻¹(1+w), η(y) = −(1/y)·G(−1/y) = E[1/(1 + yλ)].
cplx s_transform(const SpectralDensity& density, cplx w, const RootOptions& opt = {});

struct FreeOptions {
    std::size_t points = 2000;
    double eps_rel = 1e-4;        // ε(λ) = eps_rel·max(|λ|, span)
    std::size_t edge_points = 64; // extra nodes around each detected edge
};

/// Spectrum of A + B for A, B free (subordination solved by 2-d Newton with
/// continuation along the grid, fixed-point fallback).
SpectralDensity free_add(const SpectralDensity& a, const SpectralDensity& b,
                         const FreeOptions& opt = {});

/// Spectrum of √A B √A for A, B ≥ 0 free.
SpectralDensity free_multiply(const SpectralDensity& a, const SpectralDensity& b,
                              const FreeOptions& opt = {});

struct SpectrumEdges {
    std::optional<double> lower;
    std::optional<double> upper;
    std::vector<double> stationary_points;  // w with B'(w) = 0, ascending
    bool bounded() const { return lower.has_value() && upper.has_value(); }
};

struct EdgeSearch {
    double w_min = 1e-4;  // scan |w| in [w_min, w_max] on both signs
    double w_max = 1e4;
    std::size_t points = 4000;
    double fd_step = 1e-6;
};

/// λ± = B(w±) at the real stationary points of a (real-valued on the real
/// axis) Blue function; B' by central differences. Non-finite values of B
/// mark poles or excluded regions and are skipped.
SpectrumEdges spectrum_edges(const std::function<double(double)>& blue_real,
                             const EdgeSearch& search = {});

}  // namespace rmt
