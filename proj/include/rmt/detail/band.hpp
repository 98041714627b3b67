#pragma once

#include "rmt/numerics.hpp"
#include "rmt/spectral_density.hpp"

#include <array>
#include <functional>
#include <vector>

namespace rmt::detail {

using State = std::array<cplx, 2>;

/// A resolvent defined implicitly by an equation solved point by point on the
/// line λ − iε(λ), continued from the far right down the grid.
struct BandProblem {
    std::vector<double> grid;              // initial grid, ascending
    std::function<double(double)> eps;     // evaluation offset ε(λ)
    std::vector<Atom> atoms;               // known atoms of the result
    double far_start = 0.0;                // real part of the first solve
    std::function<State(cplx)> far_seed;   // initial state at far_start
    /// Solves at z from `st`; on success updates st and g and returns true.
    std::function<bool(cplx, State&, cplx&)> solve;
    std::size_t edge_points = 64;          // extra nodes per detected edge
    double jump_tol = 0.0;                 // > 0: reject relative jumps of G larger than this
};

struct BandValues {
    std::vector<double> grid;
    std::vector<cplx> g;
};

/// Runs the continuation on `grid` (descending), bisecting failed steps.
std::vector<cplx> solve_along(const BandProblem& p, const std::vector<double>& grid);

/// Continuation, edge refinement and density extraction.
SpectralDensity solve_band(const BandProblem& p, BandValues* values = nullptr);

/// Im g/π minus atom Lorentzians, with the mass handling of density_from_resolvent.
SpectralDensity density_from_values(const std::vector<double>& grid, const std::vector<cplx>& g,
                                    const std::function<double(double)>& eps,
                                    const std::vector<Atom>& atoms);

}  // namespace rmt::detail
