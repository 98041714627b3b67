#include "rmt/transforms.hpp"

#include "rmt/detail/band.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::array<double, 4> kGlNodes = {-0.8611363115940526, -0.3399810435848563,
                                            0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGlWeights = {0.3478548451374538, 0.6521451548625461,
                                              0.6521451548625461, 0.3478548451374538};

}  // namespace

// ---------------------------------------------------------------------------
// Resolvent

Resolvent::Resolvent(const SpectralDensity& rho) : rho_(rho) {
    if (rho_.grid.size() != rho_.density.size())
        throw std::invalid_argument("resolvent: grid and density sizes differ");
    mass_ = rho_.total_mass();
    if (!(mass_ > 0.0)) throw std::invalid_argument("resolvent: density has no mass");
    mean_ = rho_.mean() / mass_;
    const double m2 = rho_.second_moment() / mass_;
    stddev_ = std::sqrt(std::max(0.0, m2 - mean_ * mean_));
    lo_ = rho_.support_min();
    hi_ = rho_.support_max();
}

bool Resolvent::on_support(cplx z) const {
    const double scale = std::max({1.0, std::abs(lo_), std::abs(hi_)});
    if (std::abs(z.imag()) > 1e-300) return false;
    const double x = z.real();
    for (const auto& a : rho_.atoms)
        if (a.mass > 0.0 && std::abs(x - a.location) <= 1e-15 * scale) return true;
    const auto& g = rho_.grid;
    if (g.size() < 2 || x < g.front() || x > g.back()) return false;
    auto it = std::upper_bound(g.begin(), g.end(), x);
    std::size_t i = static_cast<std::size_t>(it - g.begin());
    if (i == g.size()) i = g.size() - 1;
    if (i == 0) i = 1;
    if (rho_.density[i - 1] > 0.0 || rho_.density[i] > 0.0) return true;
    // A node with zero density between two segments still carries a log pole
    // when a neighbouring segment is non-zero.
    if (x == g[i - 1] && i >= 2 && rho_.density[i - 2] > 0.0) return true;
    if (x == g[i] && i + 1 < g.size() && rho_.density[i + 1] > 0.0) return true;
    return false;
}

std::pair<cplx, cplx> Resolvent::eval(cplx z, bool with_derivative) const {
    if (on_support(z)) throw std::invalid_argument("pole on support");
    cplx g = 0.0, dg = 0.0;
    for (const auto& a : rho_.atoms) {
        const cplx d = z - a.location;
        g += a.mass / d;
        if (with_derivative) dg -= a.mass / (d * d);
    }
    const auto& x = rho_.grid;
    const auto& y = rho_.density;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double ya = y[i - 1], yb = y[i];
        if (ya == 0.0 && yb == 0.0) continue;
        const double a = x[i - 1], b = x[i], h = b - a;
        const double mid = 0.5 * (a + b);
        if (std::abs(z - mid) > 20.0 * h) {
            for (std::size_t k = 0; k < 4; ++k) {
                const double t = kGlNodes[k];
                const double lam = mid + 0.5 * h * t;
                const double w = 0.5 * h * kGlWeights[k] * (ya + (yb - ya) * 0.5 * (1.0 + t));
                const cplx inv = 1.0 / (z - lam);
                g += w * inv;
                if (with_derivative) dg -= w * inv * inv;
            }
        } else {
            const double beta = (yb - ya) / h;
            const cplx rz = ya + beta * (z - a);
            const cplx L = std::log(z - a) - std::log(z - b);
            g += rz * L - beta * h;
            if (with_derivative) dg += beta * L + rz * (1.0 / (z - a) - 1.0 / (z - b));
        }
    }
    return {g, dg};
}

cplx resolvent(const SpectralDensity& density, cplx z) { return Resolvent(density)(z); }

// ---------------------------------------------------------------------------
// Density extraction

SpectralDensity density_from_resolvent(const std::function<cplx(cplx)>& g,
                                       const std::vector<double>& grid, double eps,
                                       const std::vector<Atom>& atoms) {
    if (!(eps > 0.0)) throw std::invalid_argument("density_from_resolvent: eps must be positive");
    return density_from_resolvent(g, grid, [eps](double) { return eps; }, atoms);
}

SpectralDensity density_from_resolvent(const std::function<cplx(cplx)>& g,
                                       const std::vector<double>& grid,
                                       const std::function<double(double)>& eps,
                                       const std::vector<Atom>& atoms) {
    std::vector<cplx> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = g(cplx(grid[i], -eps(grid[i])));
    return detail::density_from_values(grid, values, eps, atoms);
}

// ---------------------------------------------------------------------------
// Blue, R and S

namespace {

// Solves F(z) = t·w along t ∈ [t0, 1], starting from a far-field seed at t0.
// F returns (value, derivative).
cplx invert_by_continuation(const std::function<std::pair<cplx, cplx>(cplx)>& F, cplx w,
                            double t0, cplx seed, const std::function<bool(cplx)>& admissible,
                            const RootOptions& opt, const char* what) {
    auto solve_at = [&](double t, cplx z0, ComplexRoot& out) {
        const cplx target = t * w;
        out = newton([&](cplx z) { return F(z).first - target; },
                     [&](cplx z) { return F(z).second; }, z0, opt, admissible);
        return out.converged;
    };
    ComplexRoot r;
    if (!solve_at(t0, seed, r)) {
        std::ostringstream os;
        os << what << ": seed did not converge (residual " << r.residual << ")";
        throw NumericalError(os.str());
    }
    cplx z = r.z;
    double t = t0;
    double dt_log = 0.25;  // step in log t
    int guard = 0;
    while (t < 1.0) {
        if (++guard > 10000) break;
        const double tn = std::min(1.0, t * std::exp(dt_log));
        // First-order predictor along dz/dt = w/F'(z).
        const cplx dF = F(z).second;
        cplx zp = z + (tn - t) * w / dF;
        if (admissible && !admissible(zp)) zp = z;
        ComplexRoot rn;
        if (solve_at(tn, zp, rn) || solve_at(tn, z, rn)) {
            z = rn.z;
            t = tn;
            dt_log = std::min(0.5, dt_log * 1.5);
        } else {
            dt_log *= 0.5;
            if (dt_log < 1e-10) break;
        }
    }
    if (t < 1.0) {
        std::ostringstream os;
        os << what << ": continuation stalled at t=" << t;
        throw NumericalError(os.str());
    }
    return z;
}

// Real-axis inversion of a monotone branch by bracketing: G decreases from
// G(edge) to 0 on (edge, ∞) and from 0 to G(edge) on (−∞, edge).
std::optional<double> invert_real(const std::function<double(double)>& f, double w, double edge,
                                  double scale, bool right) {
    const double dir = right ? 1.0 : -1.0;
    double near = edge + dir * 1e-12 * scale;
    double far = edge + dir * scale;
    auto h = [&](double x) { return f(x) - w; };
    double hn = h(near);
    if (!std::isfinite(hn)) return std::nullopt;
    for (int k = 0; k < 200 && h(far) * hn > 0.0; ++k) far = edge + (far - edge) * 4.0;
    if (h(far) * hn > 0.0) return std::nullopt;
    return bracket_root(h, std::min(near, far), std::max(near, far), 1e-16);
}

}  // namespace

cplx blue(const Resolvent& G, cplx w, const RootOptions& opt) {
    if (w == cplx(0.0)) throw std::invalid_argument("blue: w must be non-zero");
    const double spread = std::max({G.stddev(), 0.5 * (G.upper() - G.lower()), 1e-12}) +
                          std::abs(G.mean()) * 1e-3;
    auto admissible = [&G](cplx z) { return !G.on_support(z); };
    auto F = [&G](cplx z) { return G.value_and_derivative(z); };
    const double t0 = std::min(1.0, 0.05 / (std::abs(w) * spread));
    const cplx seed = G.mean() + 1.0 / (t0 * w);
    try {
        cplx z = invert_by_continuation(F, w, t0, seed, admissible, opt, "blue");
        if (std::abs(G(z) - w) < 1e-10) return z;
    } catch (const NumericalError&) {
        if (w.imag() != 0.0) throw;
    }
    // Real w: monotone branches outside the support.
    const double scale = std::max(1.0, G.upper() - G.lower());
    auto gr = [&G](double x) { return G(cplx(x, 0.0)).real(); };
    auto x = w.real() > 0 ? invert_real(gr, w.real(), G.upper(), scale, true)
                          : invert_real(gr, w.real(), G.lower(), scale, false);
    if (!x) {
        std::ostringstream os;
        os << "blue: w=" << w.real() << " outside the real image of G";
        throw NumericalError(os.str());
    }
    const double res = std::abs(G(cplx(*x, 0.0)) - w);
    if (!(res < 1e-10)) {
        std::ostringstream os;
        os << "blue: no convergence, residual " << res;
        throw NumericalError(os.str());
    }
    return {*x, 0.0};
}

cplx blue(const SpectralDensity& density, cplx w, const RootOptions& opt) {
    return blue(Resolvent(density), w, opt);
}

cplx r_transform(const SpectralDensity& density, cplx w, const RootOptions& opt) {
    return blue(density, w, opt) - 1.0 / w;
}

cplx s_transform(const SpectralDensity& density, cplx w, const RootOptions& opt) {
    if (w == cplx(0.0)) throw std::invalid_argument("s_transform: w must be non-zero");
    Resolvent G(density);
    const double m = G.mean();
    if (std::abs(m) < 1e-14) throw std::invalid_argument("s_transform: density has zero mean");
    // η(y) = 1 + w with z = −1/y  ⇔  ψ(z) = z·G(z) − 1 = w.
    auto F = [&G](cplx z) {
        auto [g, dg] = G.value_and_derivative(z);
        return std::pair<cplx, cplx>{z * g - 1.0, g + z * dg};
    };
    auto admissible = [&G](cplx z) { return !G.on_support(z) && z != cplx(0.0); };
    const double spread = std::max({G.stddev(), 0.5 * (G.upper() - G.lower()), 1e-12});
    const double t0 = std::min(1.0, 0.05 * std::abs(m) / (std::abs(w) * (std::abs(m) + spread)));
    const cplx seed = m / (t0 * w) + m;
    cplx z;
    try {
        z = invert_by_continuation(F, w, t0, seed, admissible, opt, "s_transform");
    } catch (const NumericalError& e) {
        std::ostringstream os;
        os << e.what() << " (bracket: support [" << G.lower() << ", " << G.upper()
           << "], w=" << w << ")";
        throw NumericalError(os.str());
    }
    return (1.0 + w) / (w * z);
}

// ---------------------------------------------------------------------------
// Free convolutions

namespace {

using detail::BandProblem;
using detail::State;

// Linear grid over the support bracket with a 2% margin, ε(λ) = eps_rel·max(|λ|, span).
void setup_grid(BandProblem& p, double lo, double hi, const FreeOptions& opt) {
    const double span = std::max(hi - lo, 1e-12);
    const double margin = 0.02 * span;
    p.grid = linear_grid(lo - margin, hi + margin, opt.points);
    const double e = opt.eps_rel;
    p.eps = [e, span](double x) { return e * std::max(std::abs(x), span); };
    p.far_start = hi + margin + std::max(span, 1.0);
    p.edge_points = opt.edge_points;
}

bool is_single_atom(const SpectralDensity& d) {
    return d.atoms.size() == 1 && d.continuous_mass() == 0.0 && std::abs(d.atoms[0].mass - 1.0) < 1e-12;
}

std::vector<Atom> sorted_atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    // Merge coincident locations.
    std::vector<Atom> out;
    for (const auto& a : atoms) {
        if (!out.empty() && std::abs(out.back().location - a.location) <= 1e-12)
            out.back().mass += a.mass;
        else
            out.push_back(a);
    }
    return out;
}

}  // namespace

SpectralDensity free_add(const SpectralDensity& a, const SpectralDensity& b,
                         const FreeOptions& opt) {
    a.validate(1e-6);
    b.validate(1e-6);
    if (is_single_atom(a)) return b.shifted(a.atoms[0].location);
    if (is_single_atom(b)) return a.shifted(b.atoms[0].location);

    const Resolvent GA(a), GB(b);
    BandProblem p;
    setup_grid(p, GA.lower() + GB.lower(), GA.upper() + GB.upper(), opt);
    for (const auto& x : a.atoms)
        for (const auto& y : b.atoms)
            if (x.mass + y.mass > 1.0 + 1e-12)
                p.atoms.push_back({x.location + y.location, x.mass + y.mass - 1.0});
    p.atoms = sorted_atoms(p.atoms);

    const double mA = GA.mean(), mB = GB.mean();
    p.far_seed = [mA, mB](cplx z) { return State{z - mB, z - mA}; };
    auto system = [&GA, &GB](const State& w, cplx z) {
        auto [ga, dga] = GA.value_and_derivative(w[0]);
        auto [gb, dgb] = GB.value_and_derivative(w[1]);
        System2 s;
        s.f = {ga - gb, w[0] + w[1] - 1.0 / ga - z};
        s.jac = {{{dga, -dgb}, {1.0 + dga / (ga * ga), 1.0}}};
        return s;
    };
    auto admissible = [](const State& w) { return w[0].imag() < 0.0 && w[1].imag() < 0.0; };
    RootOptions ro;
    ro.max_iter = 100;
    ro.tol = 1e-13;
    p.solve = [&, ro](cplx z, State& st, cplx& g) {
        auto sys = [&](const State& w) { return system(w, z); };
        auto r = newton2(sys, st, ro, admissible);
        if (!r.converged) {
            // Subordination fixed point ω₁ ← z + h_B(z + h_A(ω₁)), h(w) = 1/G(w) − w.
            cplx w1 = st[0].imag() < 0.0 ? st[0] : z;
            bool ok = false;
            for (int it = 0; it < 20000; ++it) {
                const cplx w2 = z + 1.0 / GA(w1) - w1;
                if (!(w2.imag() < 0.0)) break;
                const cplx next = z + 1.0 / GB(w2) - w2;
                if (!(next.imag() < 0.0) || !std::isfinite(std::abs(next))) break;
                const double d = std::abs(next - w1);
                w1 = next;
                if (d < 1e-14 * (1.0 + std::abs(w1))) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
            State s0{w1, z + 1.0 / GA(w1) - w1};
            r = newton2(sys, s0, ro, admissible);
            if (!r.converged && r.residual > 1e-10) return false;
        }
        st = r.z;
        g = GA(st[0]);
        return true;
    };
    return detail::solve_band(p);
}

SpectralDensity free_multiply(const SpectralDensity& a, const SpectralDensity& b,
                              const FreeOptions& opt) {
    a.validate(1e-6);
    b.validate(1e-6);
    if (a.support_min() < -1e-12 || b.support_min() < -1e-12)
        throw std::invalid_argument("free multiplication requires non-negative matrices");
    auto scale_by = [](const SpectralDensity& x, double c) {
        return c > 0.0 ? x.scaled(c) : atom_density(0.0);
    };
    if (is_single_atom(a)) return scale_by(b, a.atoms[0].location);
    if (is_single_atom(b)) return scale_by(a, b.atoms[0].location);

    const Resolvent GA(a), GB(b);
    BandProblem p;
    setup_grid(p, std::max(0.0, GA.lower()) * std::max(0.0, GB.lower()), GA.upper() * GB.upper(),
               opt);
    double zeroA = 0.0, zeroB = 0.0;
    for (const auto& x : a.atoms)
        if (std::abs(x.location) <= 1e-12) zeroA += x.mass;
    for (const auto& y : b.atoms)
        if (std::abs(y.location) <= 1e-12) zeroB += y.mass;
    if (std::max(zeroA, zeroB) > 0.0) p.atoms.push_back({0.0, std::max(zeroA, zeroB)});
    for (const auto& x : a.atoms)
        for (const auto& y : b.atoms)
            if (std::abs(x.location) > 1e-12 && std::abs(y.location) > 1e-12 &&
                x.mass + y.mass > 1.0 + 1e-12)
                p.atoms.push_back({x.location * y.location, x.mass + y.mass - 1.0});
    p.atoms = sorted_atoms(p.atoms);

    const double mA = GA.mean(), mB = GB.mean();
    if (!(mA > 0.0) || !(mB > 0.0))
        throw std::invalid_argument("free_multiply: densities must have positive mean");
    p.far_seed = [mA, mB](cplx z) { return State{z / mB, z / mA}; };
    // Unknowns ζ_A, ζ_B with ψ_X(ζ) = ζ G_X(ζ) − 1:
    //   ψ_A(ζ_A) = ψ_B(ζ_B) = w,   w ζ_A ζ_B = z (1 + w),   G_AB(z) = (1 + w)/z.
    auto system = [&GA, &GB](const State& s, cplx z) {
        auto [ga, dga] = GA.value_and_derivative(s[0]);
        auto [gb, dgb] = GB.value_and_derivative(s[1]);
        const cplx psiA = s[0] * ga - 1.0, psiB = s[1] * gb - 1.0;
        const cplx pA = ga + s[0] * dga, pB = gb + s[1] * dgb;
        System2 r;
        r.f = {psiA - psiB, s[0] * s[1] * psiA - z * (1.0 + psiA)};
        r.jac = {{{pA, -pB}, {s[1] * psiA + s[0] * s[1] * pA - z * pA, s[0] * psiA}}};
        return r;
    };
    auto admissible = [](const State& s) { return s[0].imag() < 0.0 && s[1].imag() < 0.0; };
    RootOptions ro;
    ro.max_iter = 100;
    ro.tol = 1e-13;
    p.solve = [&, ro](cplx z, State& st, cplx& g) {
        auto sys = [&](const State& s) { return system(s, z); };
        auto r = newton2(sys, st, ro, admissible);
        if (!r.converged && !(r.residual <= 1e-10)) return false;
        st = r.z;
        g = st[0] * GA(st[0]) / z;
        return true;
    };
    return detail::solve_band(p);
}

// ---------------------------------------------------------------------------
// Edges

SpectrumEdges spectrum_edges(const std::function<double(double)>& blue_real,
                             const EdgeSearch& s) {
    auto hstep = [&s](double w) { return s.fd_step * std::max(1.0, std::abs(w)); };
    auto D = [&](double w) {
        const double h = hstep(w);
        return (blue_real(w + h) - blue_real(w - h)) / (2.0 * h);
    };
    SpectrumEdges out;
    std::vector<std::pair<double, double>> found;  // (w, B(w))
    for (int side : {-1, 1}) {
        auto mags = geometric_grid(s.w_min, s.w_max, std::max<std::size_t>(s.points / 2, 16));
        double pw = NAN, pd = NAN;
        for (double m : mags) {
            const double w = side * m;
            const double d = D(w);
            if (!std::isfinite(d)) {
                pw = pd = NAN;
                continue;
            }
            if (std::isfinite(pd) && ((pd < 0.0) != (d < 0.0))) {
                const double ws = bracket_root(D, std::min(pw, w), std::max(pw, w), 1e-15);
                const double h = 10.0 * hstep(ws);
                const double b0 = blue_real(ws), bl = blue_real(ws - h), br = blue_real(ws + h);
                const bool continuous = std::isfinite(b0) && std::isfinite(bl) && std::isfinite(br) &&
                                        std::abs(br - bl) < 1e-3 * (1.0 + std::abs(b0));
                if (continuous) found.emplace_back(ws, b0);
            }
            pw = w;
            pd = d;
        }
    }
    std::sort(found.begin(), found.end());
    for (const auto& f : found) out.stationary_points.push_back(f.first);
    if (found.size() >= 2) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& f : found) {
            lo = std::min(lo, f.second);
            hi = std::max(hi, f.second);
        }
        out.lower = lo;
        out.upper = hi;
    } else if (found.size() == 1) {
        if (found[0].first > 0.0)
            out.upper = found[0].second;
        else
            out.lower = found[0].second;
    }
    return out;
}

}  // namespace rmt
