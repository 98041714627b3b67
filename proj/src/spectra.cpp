#include "rmt/spectra.hpp"

#include "rmt/detail/band.hpp"
#include "rmt/transforms.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;
using detail::BandProblem;
using detail::State;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

// Root of a quadratic resolvent on the physical sheet: Im g·Im z < 0, and for
// real z the root that decays like 1/z (picked with a small imaginary shift).
cplx pick_physical(cplx z, const std::function<std::pair<cplx, cplx>(cplx)>& roots) {
    if (z.imag() == 0.0) {
        const double d = 1e-9 * std::max(1.0, std::abs(z));
        const cplx zp(z.real(), d);
        auto [a, b] = roots(zp);
        auto [a0, b0] = roots(z);
        const cplx chosen = (a.imag() < 0.0) ? a : b;
        return std::abs(a0 - chosen) < std::abs(b0 - chosen) ? cplx(a0.real(), 0.0)
                                                              : cplx(b0.real(), 0.0);
    }
    auto [a, b] = roots(z);
    return (a.imag() * z.imag() < 0.0) ? a : b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Marčenko–Pastur and Wigner

std::pair<double, double> mp_edges(double q) {
    require_positive(q, "q");
    const double s = std::sqrt(q);
    return {(1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
}

SpectralDensity mp_density(double q, std::size_t points) {
    require_positive(q, "q");
    if (q < 1e-8) return atom_density(1.0);
    auto [lo, hi] = mp_edges(q);
    auto grid = chebyshev_grid(lo, hi, points);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double l = grid[i];
        const double d = 4.0 * l * q - (l + q - 1.0) * (l + q - 1.0);
        v[i] = (d > 0.0 && l > 0.0) ? std::sqrt(d) / (2.0 * kPi * l * q) : 0.0;
    }
    std::vector<Atom> atoms;
    if (q > 1.0) atoms.push_back({0.0, 1.0 - 1.0 / q});
    // q = 1: ρ ~ λ^{-1/2} at the hard edge; the node at 0 holds the value at
    // the next node so the integrable singularity is carried by the mass fix.
    if (v.front() == 0.0 && lo == 0.0) v.front() = v[1];
    return make_density(std::move(grid), std::move(v), std::move(atoms), std::min(1.0, 1.0 / q));
}

cplx mp_resolvent(double q, cplx z) {
    require_positive(q, "q");
    if (z == cplx(0.0)) throw std::invalid_argument("mp_resolvent: z = 0");
    auto roots = [q](cplx x) {
        const cplx b = x + q - 1.0;
        const cplx s = std::sqrt(b * b - 4.0 * q * x);
        return std::pair<cplx, cplx>{(b - s) / (2.0 * q * x), (b + s) / (2.0 * q * x)};
    };
    auto [lo, hi] = mp_edges(q);
    if (z.imag() == 0.0 && z.real() > lo && z.real() < hi) throw std::invalid_argument("pole on support");
    return pick_physical(z, roots);
}

cplx mp_blue(double q, cplx w) { return 1.0 / w + 1.0 / (1.0 - q * w); }

SpectralDensity wigner_density(double variance, std::size_t points) {
    require_positive(variance, "variance");
    const double r = 2.0 * std::sqrt(variance);
    auto grid = chebyshev_grid(-r, r, points);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = std::sqrt(std::max(0.0, r * r - grid[i] * grid[i])) / (2.0 * kPi * variance);
    return make_density(std::move(grid), std::move(v), {}, 1.0);
}

cplx wigner_resolvent(double variance, cplx z) {
    require_positive(variance, "variance");
    const double r = 2.0 * std::sqrt(variance);
    if (z.imag() == 0.0 && std::abs(z.real()) < r) throw std::invalid_argument("pole on support");
    auto roots = [variance](cplx x) {
        const cplx s = std::sqrt(x * x - 4.0 * variance);
        return std::pair<cplx, cplx>{(x - s) / (2.0 * variance), (x + s) / (2.0 * variance)};
    };
    return pick_physical(z, roots);
}

// ---------------------------------------------------------------------------
// EWMA

double ewma_blue(double q, double w) {
    const double u = q * w;
    if (!(u < 1.0) || w == 0.0) return NAN;
    return 1.0 / w - std::log1p(-u) / u;
}

std::pair<double, double> ewma_edges(double q) {
    require_positive(q, "q");
    auto f = [q](double l) { return l - std::log(l) - q - 1.0; };
    const double lo = bracket_root(f, std::exp(-(q + 2.0)), 1.0, 1e-16);
    const double hi = bracket_root(f, 1.0, 2.0 * (q + 2.0), 1e-16);
    return {lo, hi};
}

SpectralDensity ewma_density(double q, const SpectralOptions& opt) {
    require_positive(q, "q");
    if (q < 1e-8) return atom_density(1.0);
    auto [lo, hi] = ewma_edges(q);
    BandProblem p;
    p.grid = chebyshev_grid(lo, hi, opt.points);
    const double span = hi - lo, e = opt.eps_rel;
    p.eps = [e, span](double x) { return e * std::max(std::abs(x), span); };
    p.far_start = hi + std::max(span, 1.0);
    p.far_seed = [](cplx z) { return State{1.0 / (z - 1.0), 0.0}; };
    p.edge_points = 0;  // Chebyshev nodes already cluster at the exact edges
    p.jump_tol = 0.25;
    RootOptions ro;
    ro.tol = 1e-13;
    p.solve = [q, ro](cplx z, State& st, cplx& g) {
        auto F = [q, z](cplx G) { return z * q * G - q + std::log(1.0 - q * G); };
        auto dF = [q, z](cplx G) { return z * q - q / (1.0 - q * G); };
        auto ok = [](cplx G) { return G.imag() >= 0.0; };
        auto r = newton(F, dF, st[0], ro, ok);
        if (!(r.residual <= 1e-11)) return false;
        st[0] = r.z;
        g = r.z;
        return true;
    };
    try {
        return detail::solve_band(p);
    } catch (const NumericalError& err) {
        throw NumericalError(std::string("ewma_density: ") + err.what());
    }
}

// ---------------------------------------------------------------------------
// Dressed spectrum

namespace {

struct DressedEquation {
    const Resolvent& GC;
    double q;

    // F(g) = g − Z G_C(Z)/z, Z = z/(1 − q + q z g), and dF/dg. Residuals are in units of g.
    std::pair<cplx, cplx> operator()(cplx z, cplx g) const {
        const cplx Z = z / (1.0 - q + q * z * g);
        auto [gc, dgc] = GC.value_and_derivative(Z);
        return {g - Z * gc / z, 1.0 + q * Z * Z * (gc + Z * dgc) / z};
    }
};

bool solve_dressed_point(const DressedEquation& eq, cplx z, cplx& g, bool physical_sign) {
    auto F = [&](cplx x) { return eq(z, x).first; };
    auto dF = [&](cplx x) { return eq(z, x).second; };
    auto ok = [&](cplx x) {
        if (physical_sign && z.imag() < 0.0 && !(x.imag() > 0.0)) return false;
        const cplx Z = z / (1.0 - eq.q + eq.q * z * x);
        return std::isfinite(std::abs(Z)) && !eq.GC.on_support(Z);
    };
    RootOptions ro;
    ro.tol = 1e-13 * std::max(1.0, std::abs(g));
    auto r = newton(F, dF, g, ro, ok);
    if (r.residual <= 1e-10 * std::max(1.0, std::abs(r.z))) {
        g = r.z;
        return true;
    }
    // Damped fixed point g ← (1−θ)g + θ Z G_C(Z)/z, halving θ on oscillation.
    cplx x = g;
    double theta = 0.5, last = INFINITY;
    for (int it = 0; it < 500; ++it) {
        const cplx Z = z / (1.0 - eq.q + eq.q * z * x);
        if (!std::isfinite(std::abs(Z)) || eq.GC.on_support(Z)) return false;
        const cplx target = Z * eq.GC(Z) / z;
        const double res = std::abs(target - x);
        if (res < 1e-10) {
            g = target;
            return true;
        }
        if (res > last) theta *= 0.5;
        last = res;
        x = (1.0 - theta) * x + theta * target;
    }
    return false;
}

}  // namespace

SpectralDensity dressed_spectrum(const SpectralDensity& rho_c, double q, const SpectralOptions& opt) {
    require_positive(q, "q");
    rho_c.validate(1e-6);
    if (rho_c.support_min() < 0.0)
        throw std::invalid_argument("dressed_spectrum: rho_c must be supported on [0, inf)");
    const Resolvent GC(rho_c);
    const double cmin = std::max(rho_c.support_min(), 0.0), cmax = rho_c.support_max();
    const double s = std::sqrt(q);
    double lo = q < 1.0 ? 0.5 * cmin * (1.0 - s) * (1.0 - s) : 0.0;
    const double hi = 1.1 * cmax * (1.0 + s) * (1.0 + s);
    if (!(lo > 1e-6 * hi)) lo = 1e-6 * hi;

    BandProblem p;
    p.grid = (hi / lo > 10.0) ? geometric_grid(lo, hi, opt.points) : linear_grid(lo, hi, opt.points);
    if (q > 1.0) p.atoms.push_back({0.0, 1.0 - 1.0 / q});
    // Bulk scale: the width the spectrum would have for C = mean·I.
    const double bulk = std::max(GC.mean() * 4.0 * s, 1e-3 * hi);
    const double e = opt.eps_rel;
    p.eps = [e, bulk](double x) { return e * std::max(std::abs(x), bulk); };
    p.far_start = hi + std::max(hi - lo, 1.0);
    const double mC = GC.mean() * GC.total_mass();
    p.far_seed = [mC](cplx z) { return State{mC / z, 0.0}; };
    p.edge_points = 64;
    p.jump_tol = 0.5;
    const DressedEquation eq{GC, q};
    p.solve = [&eq](cplx z, State& st, cplx& g) {
        cplx x = st[0];
        if (!solve_dressed_point(eq, z, x, true)) return false;
        st[0] = x;
        g = x;
        return true;
    };
    SpectralDensity out;
    try {
        out = detail::solve_band(p);
    } catch (const NumericalError& err) {
        throw NumericalError(std::string("dressed_spectrum: fixed point not reached: ") + err.what());
    }
    if (rho_c.truncated_mass > 0.0) {
        out.truncated_mass = rho_c.truncated_mass;
        const double target = 1.0 - out.atom_mass() - out.truncated_mass;
        const double cm = out.continuous_mass();
        if (cm > 0.0)
            for (auto& v : out.density) v *= target / cm;
    }
    return out;
}

cplx dressed_resolvent(const SpectralDensity& rho_c, double q, cplx z) {
    require_positive(q, "q");
    const Resolvent GC(rho_c);
    const double cmax = std::max(rho_c.support_max(), 1e-12);
    const double s = std::sqrt(q);
    const double hi = cmax * (1.0 + s) * (1.0 + s);
    const double R = 10.0 * (hi + 1.0);
    cplx far;
    if (z.imag() != 0.0 || z.real() > hi)
        far = z + R;
    else if (z.real() < 0.0)
        far = z - R;
    else
        throw std::invalid_argument("pole on support");
    if (z.imag() == 0.0 && z.real() == 0.0) throw std::invalid_argument("dressed_resolvent: z = 0");
    const DressedEquation eq{GC, q};
    cplx g = GC.total_mass() / far;
    if (!solve_dressed_point(eq, far, g, z.imag() != 0.0))
        throw NumericalError("dressed_resolvent: far seed failed");
    const int steps = 400;
    for (int k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        // Geometric approach to z keeps steps small where G varies fastest.
        const cplx zk = z + (far - z) * std::pow(1.0 - t, 3.0);
        if (!solve_dressed_point(eq, zk, g, z.imag() != 0.0)) {
            std::ostringstream os;
            os << "dressed_resolvent: continuation failed at z=" << zk;
            throw NumericalError(os.str());
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Power-law prior

void PowerLawPrior::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    if (!(mu > 1.0)) throw std::invalid_argument("mu must exceed 1");
}

double PowerLawPrior::tail_mass(double lambda) const {
    if (lambda <= alpha) return 1.0;
    return A() * std::pow(lambda - lambda0(), -mu);
}

SpectralDensity powerlaw_prior_density(const PowerLawPrior& p, const SpectralOptions& opt) {
    p.validate();
    if (p.alpha == 1.0) return atom_density(1.0);
    const double l0 = p.lambda0(), A = p.A(), mu = p.mu;
    const double tail = opt.tail_mass;
    const double lmax = l0 + std::pow(A / tail, 1.0 / mu);
    auto u = geometric_grid(p.alpha - l0, lmax - l0, opt.points);
    std::vector<double> grid(u.size()), v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        grid[i] = l0 + u[i];
        v[i] = mu * A / std::pow(u[i], 1.0 + mu);
    }
    grid.front() = p.alpha;
    auto d = make_density(std::move(grid), std::move(v), {}, 1.0 - tail);
    d.truncated_mass = tail;
    return d;
}

// ---------------------------------------------------------------------------
// Elliptic Student ensemble

void EllipticParams::validate() const {
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("q must be positive");
    if (!(mu > 2.0)) throw std::invalid_argument("mu must exceed 2");
}

SpectralDensity elliptic_student_density(const EllipticParams& prm, const SpectralOptions& opt) {
    prm.validate();
    const double q = prm.q, mu = prm.mu, c = mu - 2.0;
    boost::math::chi_squared_distribution<double> chi(mu);

    // Law of s on a log grid, renormalized to unit mass.
    const double s_lo = std::max(1e-300, boost::math::quantile(chi, 1e-14));
    const double s_hi = boost::math::quantile(boost::math::complement(chi, 1e-16));
    auto sg = geometric_grid(s_lo, s_hi, 4000);
    std::vector<double> sv(sg.size());
    for (std::size_t i = 0; i < sg.size(); ++i) sv[i] = boost::math::pdf(chi, sg[i]);
    const Resolvent GP(make_density(sg, sv, {}, 1.0));

    // Tail: eigenvalues above L come from days with q·d > L, d = c/s; the
    // cut never falls inside the bulk.
    auto tail_above = [&](double L) { return boost::math::cdf(chi, c * q / L) / q; };
    const double bulk_top =
        1.3 * (1.0 + std::sqrt(q)) * (1.0 + std::sqrt(q)) * c / boost::math::quantile(chi, 0.01);
    double hi = bulk_top;
    if (tail_above(hi) > opt.tail_mass) {
        double a = hi, b = 2.0 * hi;
        while (tail_above(b) > opt.tail_mass && b < 1e12) {
            a = b;
            b *= 2.0;
        }
        hi = bracket_root([&](double L) { return tail_above(L) - opt.tail_mass; }, a, b, 1e-12);
    }
    const double truncated = tail_above(hi);
    const double lo = 1e-4;

    BandProblem p;
    p.grid = geometric_grid(lo, hi, std::max<std::size_t>(opt.points, 3000));
    if (q > 1.0) p.atoms.push_back({0.0, 1.0 - 1.0 / q});
    // The bulk leaves a Lorentzian floor ε/(πλ²) under the λ^{−1−μ/2} tail;
    // ε ∝ 1/λ past unit scale keeps it a fixed small fraction of the tail.
    const double e = opt.eps_rel;
    p.eps = [e](double x) { return e / std::max(std::abs(x), 1.0); };
    p.far_start = 2.0 * hi;
    p.far_seed = [](cplx z) { return State{1.0 / (z - 1.0), 0.0}; };
    p.edge_points = 64;
    p.jump_tol = 0.5;
    RootOptions ro;
    ro.tol = 1e-12;
    p.solve = [&GP, q, c, ro](cplx z, State& st, cplx& g) {
        auto F = [&](cplx G) { return 1.0 / G - c * GP(q * c * G) - z; };
        auto dF = [&](cplx G) { return -1.0 / (G * G) - q * c * c * GP.derivative(q * c * G); };
        auto ok = [&](cplx G) { return G.imag() > 0.0 && !GP.on_support(q * c * G); };
        auto r = newton(F, dF, st[0], ro, ok);
        if (!(r.residual <= 1e-8 * std::max(1.0, std::abs(z)))) return false;
        st[0] = r.z;
        g = r.z;
        return true;
    };
    SpectralDensity out;
    try {
        out = detail::solve_band(p);
    } catch (const NumericalError& err) {
        throw NumericalError(std::string("elliptic_student_density: ") + err.what());
    }
    out.truncated_mass = truncated;
    const double target = 1.0 - out.atom_mass() - out.truncated_mass;
    const double cm = out.continuous_mass();
    if (cm > 0.0)
        for (auto& v : out.density) v *= target / cm;
    return out;
}

// ---------------------------------------------------------------------------
// Random SVD benchmark

std::pair<double, double> rsvd_gamma(double n, double m) {
    if (!(n > 0.0 && n < 1.0)) throw std::invalid_argument("n must lie in (0, 1)");
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("m must lie in (0, 1)");
    const double a = n + m - 2.0 * m * n;
    const double b = 2.0 * std::sqrt(m * n * (1.0 - n) * (1.0 - m));
    return {std::max(0.0, a - b), a + b};
}

SpectralDensity rsvd_benchmark(double n, double m, std::size_t points) {
    auto [gm, gp] = rsvd_gamma(n, m);
    const double clo = std::sqrt(gm), chi = std::sqrt(gp);
    std::vector<Atom> atoms;
    const double a0 = std::max(1.0 - n, 1.0 - m);
    const double a1 = std::max(m + n - 1.0, 0.0);
    if (a0 > 0.0) atoms.push_back({0.0, a0});
    if (a1 > 0.0) atoms.push_back({1.0, a1});
    const double cont = 1.0 - a0 - a1;
    if (!(cont > 0.0) || !(chi > clo)) return atoms_density(atoms);
    auto grid = chebyshev_grid(clo, chi, points);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double c = grid[i], c2 = c * c;
        const double den = kPi * (1.0 - c2);
        double num;
        if (gm == 0.0)
            num = std::sqrt(std::max(0.0, gp - c2));  // √((c²)(γ+−c²))/c
        else
            num = c > 0.0 ? std::sqrt(std::max(0.0, (c2 - gm) * (gp - c2))) / c : 0.0;
        v[i] = den > 0.0 ? num / den : 0.0;
    }
    // γ+ = 1 puts an integrable singularity at c = 1; hold the neighbour value.
    if (!std::isfinite(v.back()) || 1.0 - chi * chi < 1e-14) v.back() = v[v.size() - 2];
    return make_density(std::move(grid), std::move(v), std::move(atoms), cont);
}

}  // namespace rmt
