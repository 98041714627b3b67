#include "rmt/detail/band.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rmt::detail {

SpectralDensity density_from_values(const std::vector<double>& grid, const std::vector<cplx>& g,
                                    const std::function<double(double)>& eps,
                                    const std::vector<Atom>& atoms) {
    if (grid.size() < 2) throw std::invalid_argument("density_from_resolvent: grid too small");
    SpectralDensity out;
    out.grid = grid;
    out.density.resize(grid.size());
    out.atoms = atoms;
    double scale = 0.0;
    std::vector<double> raw(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double e = eps(grid[i]);
        if (!(e > 0.0)) throw std::invalid_argument("density_from_resolvent: eps must be positive");
        const cplx z(grid[i], -e);
        cplx v = g[i];
        for (const auto& a : atoms) v -= a.mass / (z - a.location);
        raw[i] = v.imag() / std::numbers::pi;
        scale = std::max(scale, std::abs(raw[i]));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(raw[i])) throw NumericalError("density_from_resolvent: non-finite value");
        if (raw[i] < -1e-8 * std::max(1.0, scale)) {
            std::ostringstream os;
            os << "non-Herglotz evaluator: density " << raw[i] << " at lambda=" << grid[i];
            throw NumericalError(os.str());
        }
        out.density[i] = std::max(0.0, raw[i]);
    }
    const double am = out.atom_mass();
    const double total = out.continuous_mass() + am;
    if (std::abs(total - 1.0) <= 0.02) {
        const double cm = out.continuous_mass();
        if (cm > 0.0 && 1.0 - am > 0.0)
            for (auto& v : out.density) v *= (1.0 - am) / cm;
    } else {
        out.truncated_mass = std::max(0.0, 1.0 - total);
    }
    return out;
}

std::vector<cplx> solve_along(const BandProblem& p, const std::vector<double>& grid) {
    std::vector<cplx> out(grid.size());
    const double start = std::max(p.far_start, grid.back());
    const cplx z0(start, -p.eps(start));
    State st = p.far_seed(z0);
    cplx g;
    if (!p.solve(z0, st, g)) throw NumericalError("continuation: far-field seed failed");

    auto jumped = [&](cplx a, cplx b) {
        return p.jump_tol > 0.0 && std::abs(a - b) > p.jump_tol * (std::abs(a) + std::abs(b));
    };
    // One continuation step; failed or jumping steps are bisected.
    std::function<bool(double, double, State&, cplx&, int)> step =
        [&](double from, double to, State& s, cplx& gv, int depth) -> bool {
        State trial = s;
        cplx gt;
        if (p.solve(cplx(to, -p.eps(to)), trial, gt) && !jumped(gv, gt)) {
            s = trial;
            gv = gt;
            return true;
        }
        if (depth >= 14) return false;
        const double mid = 0.5 * (from + to);
        State s1 = s;
        cplx g1 = gv;
        if (!step(from, mid, s1, g1, depth + 1)) return false;
        if (!step(mid, to, s1, g1, depth + 1)) return false;
        s = s1;
        gv = g1;
        return true;
    };

    double prev = start;
    std::vector<double> failures;
    for (std::size_t k = grid.size(); k-- > 0;) {
        if (!step(prev, grid[k], st, g, 0)) {
            failures.push_back(grid[k]);
            break;
        }
        out[k] = g;
        prev = grid[k];
    }
    if (!failures.empty()) {
        std::ostringstream os;
        os << "continuation failed (branch jump or no convergence) at lambda=" << failures.front()
           << "; partial result discarded";
        throw NumericalError(os.str());
    }
    return out;
}

SpectralDensity solve_band(const BandProblem& p, BandValues* values) {
    std::vector<double> grid = p.grid;
    std::vector<cplx> gv = solve_along(p, grid);
    SpectralDensity first = density_from_values(grid, gv, p.eps, p.atoms);
    if (p.edge_points > 0) {
        const double peak = *std::max_element(first.density.begin(), first.density.end());
        const double thr = 1e-3 * peak;
        std::vector<double> extra;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const bool a = first.density[i - 1] > thr, b = first.density[i] > thr;
            if (a == b) continue;
            const std::size_t l = i >= 3 ? i - 3 : 0;
            const std::size_t r = std::min(grid.size() - 1, i + 2);
            auto cheb = chebyshev_grid(grid[l], grid[r], p.edge_points + 2);
            extra.insert(extra.end(), cheb.begin() + 1, cheb.end() - 1);
        }
        if (!extra.empty()) {
            grid.insert(grid.end(), extra.begin(), extra.end());
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end(),
                                   [](double x, double y) {
                                       return std::abs(x - y) <= 1e-13 * (1.0 + std::abs(x));
                                   }),
                       grid.end());
            gv = solve_along(p, grid);
            first = density_from_values(grid, gv, p.eps, p.atoms);
        }
    }
    if (values) *values = {grid, gv};
    return first;
}

}  // namespace rmt::detail
