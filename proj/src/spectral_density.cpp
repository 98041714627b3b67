#include "rmt/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rmt {

namespace {

// ∫ over [x0, x1] of the linear interpolant through (x0, y0), (x1, y1),
// restricted to [lo, hi].
double segment_mass(double x0, double y0, double x1, double y1, double lo, double hi) {
    const double a = std::max(x0, lo);
    const double b = std::min(x1, hi);
    if (b <= a) return 0.0;
    const double slope = (y1 - y0) / (x1 - x0);
    const double ya = y0 + slope * (a - x0);
    const double yb = y0 + slope * (b - x0);
    return 0.5 * (ya + yb) * (b - a);
}

}  // namespace

double SpectralDensity::continuous_mass() const {
    double m = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        m += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    return m;
}

double SpectralDensity::atom_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.mass;
    return m;
}

double SpectralDensity::mean() const {
    // Exact first moment of the piecewise linear interpolant.
    double s = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double a = grid[i - 1], b = grid[i], ya = density[i - 1], yb = density[i];
        s += (b - a) * (ya * (2 * a + b) + yb * (a + 2 * b)) / 6.0;
    }
    for (const auto& at : atoms) s += at.mass * at.location;
    return s;
}

double SpectralDensity::second_moment() const {
    double s = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double a = grid[i - 1], b = grid[i], ya = density[i - 1], yb = density[i];
        const double h = b - a;
        // ∫ x² (ya (b−x) + yb (x−a))/h dx
        const double ia = (std::pow(b, 4) - std::pow(a, 4)) / 4.0;
        const double i3 = (std::pow(b, 3) - std::pow(a, 3)) / 3.0;
        s += (ya * (b * i3 - ia) + yb * (ia - a * i3)) / h;
    }
    for (const auto& at : atoms) s += at.mass * at.location * at.location;
    return s;
}

double SpectralDensity::value_at(double x) const {
    if (grid.size() < 2 || x < grid.front() || x > grid.back()) return 0.0;
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.end()) return density.back();
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return density[i - 1] + t * (density[i] - density[i - 1]);
}

double SpectralDensity::mass_between(double lo, double hi) const {
    double m = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= lo) continue;
        if (grid[i - 1] >= hi) break;
        m += segment_mass(grid[i - 1], density[i - 1], grid[i], density[i], lo, hi);
    }
    for (const auto& a : atoms)
        if (a.location > lo && a.location <= hi) m += a.mass;
    return m;
}

double SpectralDensity::support_min() const {
    double lo = grid.empty() ? INFINITY : grid.front();
    for (const auto& a : atoms) lo = std::min(lo, a.location);
    return lo;
}

double SpectralDensity::support_max() const {
    double hi = grid.empty() ? -INFINITY : grid.back();
    for (const auto& a : atoms) hi = std::max(hi, a.location);
    return hi;
}

void SpectralDensity::validate(double mass_tol) const {
    if (grid.size() != density.size())
        throw std::invalid_argument("SpectralDensity: grid and density sizes differ");
    if (grid.size() == 1)
        throw std::invalid_argument("SpectralDensity: continuous part needs at least two nodes");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("SpectralDensity: grid not strictly ascending at index " +
                                        std::to_string(i));
    for (std::size_t i = 0; i < density.size(); ++i)
        if (!(density[i] >= 0.0) || !std::isfinite(density[i]))
            throw std::invalid_argument("SpectralDensity: invalid density value at index " +
                                        std::to_string(i));
    for (const auto& a : atoms)
        if (!(a.mass >= 0.0 && a.mass <= 1.0 + 1e-12) || !std::isfinite(a.location))
            throw std::invalid_argument("SpectralDensity: invalid atom");
    const double m = total_mass() + truncated_mass;
    if (std::abs(m - 1.0) > mass_tol)
        throw std::invalid_argument("SpectralDensity: total mass " + std::to_string(m) +
                                    " differs from 1");
}

SpectralDensity SpectralDensity::scaled(double a) const {
    if (!(a > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
    SpectralDensity out = *this;
    for (auto& x : out.grid) x *= a;
    for (auto& y : out.density) y /= a;
    for (auto& at : out.atoms) at.location *= a;
    return out;
}

SpectralDensity SpectralDensity::shifted(double m) const {
    SpectralDensity out = *this;
    for (auto& x : out.grid) x += m;
    for (auto& at : out.atoms) at.location += m;
    return out;
}

SpectralDensity atom_density(double location) {
    SpectralDensity d;
    d.atoms.push_back({location, 1.0});
    return d;
}

SpectralDensity atoms_density(const std::vector<Atom>& atoms) {
    SpectralDensity d;
    d.atoms = atoms;
    return d;
}

SpectralDensity make_density(std::vector<double> grid, std::vector<double> values,
                             std::vector<Atom> atoms, double continuous_mass) {
    SpectralDensity d;
    d.grid = std::move(grid);
    d.density = std::move(values);
    d.atoms = std::move(atoms);
    const double m = d.continuous_mass();
    if (m > 0.0 && continuous_mass > 0.0)
        for (auto& y : d.density) y *= continuous_mass / m;
    return d;
}

std::vector<double> chebyshev_grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("chebyshev_grid: need at least two nodes");
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double c = std::cos(std::numbers::pi * static_cast<double>(n - 1 - k) /
                                  static_cast<double>(n - 1));
        g[k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("linear_grid: need at least two nodes");
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    g.back() = hi;
    return g;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    if (n < 2 || !(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("geometric_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double r = std::log(hi / lo);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = lo * std::exp(r * static_cast<double>(k) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

double l1_distance(const SpectralDensity& a, const SpectralDensity& b, double atom_tol) {
    std::vector<double> xs;
    xs.reserve(a.grid.size() + b.grid.size());
    xs.insert(xs.end(), a.grid.begin(), a.grid.end());
    xs.insert(xs.end(), b.grid.begin(), b.grid.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double d = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double x0 = xs[i - 1], x1 = xs[i];
        // Both interpolants are linear on [x0, x1], except at the open ends of
        // a grid where one drops to zero; evaluate just inside the cell.
        const double e = 1e-12 * (x1 - x0);
        const double f0 = a.value_at(x0 + e) - b.value_at(x0 + e);
        const double f1 = a.value_at(x1 - e) - b.value_at(x1 - e);
        const double h = x1 - x0;
        if (f0 * f1 >= 0.0) {
            d += 0.5 * (std::abs(f0) + std::abs(f1)) * h;
        } else {
            const double t = f0 / (f0 - f1);
            d += 0.5 * (std::abs(f0) * t + std::abs(f1) * (1.0 - t)) * h;
        }
    }

    std::vector<bool> used(b.atoms.size(), false);
    for (const auto& at : a.atoms) {
        bool matched = false;
        for (std::size_t j = 0; j < b.atoms.size(); ++j) {
            if (!used[j] && std::abs(b.atoms[j].location - at.location) <= atom_tol) {
                d += std::abs(at.mass - b.atoms[j].mass);
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) d += at.mass;
    }
    for (std::size_t j = 0; j < b.atoms.size(); ++j)
        if (!used[j]) d += b.atoms[j].mass;
    return d;
}

double binned_l1(const std::vector<double>& samples, const SpectralDensity& rho,
                 std::size_t bins, double lo, double hi) {
    if (samples.empty() || bins == 0 || !(hi > lo))
        throw std::invalid_argument("binned_l1: need samples, bins > 0 and hi > lo");
    std::vector<double> counts(bins, 0.0);
    double outside = 0.0;
    const double w = (hi - lo) / static_cast<double>(bins);
    const double unit = 1.0 / static_cast<double>(samples.size());
    for (double x : samples) {
        if (x < lo || x >= hi) {
            outside += unit;
            continue;
        }
        auto k = static_cast<std::size_t>((x - lo) / w);
        counts[std::min(k, bins - 1)] += unit;
    }
    // Bins are half-open [a, b), for the sample and the model alike.
    double inside = 0.0, d = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
        const double a = lo + w * static_cast<double>(k);
        const double b = (k + 1 == bins) ? hi : a + w;
        double m = rho.mass_between(a, b);
        for (const auto& at : rho.atoms) {
            if (at.location == a) m += at.mass;
            if (at.location == b) m -= at.mass;
        }
        inside += m;
        d += std::abs(counts[k] - m);
    }
    return d + std::abs(outside - (1.0 - inside));
}

}  // namespace rmt
