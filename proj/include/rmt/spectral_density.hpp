#pragma once

#include <cstddef>
#include <vector>

namespace rmt {

/// A point mass of the spectrum.
struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/**
 * Eigenvalue (or singular-value) density: a continuous part sampled on an
 * ascending grid, read as piecewise linear between nodes, plus atoms.
 *
 * `truncated_mass` is the mass known to lie outside the grid (heavy tails
 * cut off at a finite λ); it is zero for compactly supported densities.
 */
struct SpectralDensity {
    std::vector<double> grid;
    std::vector<double> density;
    std::vector<Atom> atoms;
    double truncated_mass = 0.0;

    /// Trapezoid integral of the continuous part.
    double continuous_mass() const;
    double atom_mass() const;
    double total_mass() const { return continuous_mass() + atom_mass(); }
    double mean() const;
    double second_moment() const;

    /// Linear interpolation of the continuous part, zero outside the grid.
    double value_at(double x) const;
    /// Mass of [lo, hi] (continuous part integrated exactly on the piecewise
    /// linear representation, atoms counted when lo < x <= hi).
    double mass_between(double lo, double hi) const;

    double support_min() const;
    double support_max() const;
    bool has_continuous_part() const { return grid.size() >= 2; }

    /// Throws std::invalid_argument on ascending-grid, sign or mass violations.
    void validate(double mass_tol = 1e-6) const;

    /// Density of a·X for a > 0.
    SpectralDensity scaled(double a) const;
    /// Density of X + m.
    SpectralDensity shifted(double m) const;
};

SpectralDensity atom_density(double location);
SpectralDensity atoms_density(const std::vector<Atom>& atoms);

/// Build a density from samples of the continuous part; scales the continuous
/// part so that its trapezoid mass equals `continuous_mass`.
SpectralDensity make_density(std::vector<double> grid, std::vector<double> values,
                             std::vector<Atom> atoms, double continuous_mass);

/// Chebyshev–Lobatto nodes on [lo, hi] (clustered at both ends), ascending.
std::vector<double> chebyshev_grid(double lo, double hi, std::size_t n);
std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// L1 distance between two densities: ∫|ρa − ρb| on the merged grid plus
/// atom mismatch (atoms closer than `atom_tol` are matched).
double l1_distance(const SpectralDensity& a, const SpectralDensity& b,
                   double atom_tol = 1e-9);

/// Binned L1 distance between an empirical sample and a density:
/// Σ_bins |empirical mass − model mass| plus the mass of both outside [lo, hi].
double binned_l1(const std::vector<double>& samples, const SpectralDensity& rho,
                 std::size_t bins, double lo, double hi);

}  // namespace rmt
