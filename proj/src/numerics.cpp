#include "rmt/numerics.hpp"

#include <boost/math/tools/roots.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rmt {

ComplexRoot newton(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& df,
                   cplx z0, const RootOptions& opt,
                   const std::function<bool(cplx)>& admissible) {
    ComplexRoot r;
    r.z = z0;
    cplx fz = f(z0);
    r.residual = std::abs(fz);
    for (r.iterations = 0; r.iterations < opt.max_iter; ++r.iterations) {
        if (!(r.residual > opt.tol)) {
            r.converged = std::isfinite(r.residual);
            return r;
        }
        const cplx d = df(r.z);
        if (d == cplx(0.0) || !std::isfinite(std::abs(d))) return r;
        cplx step = -fz / d;
        bool accepted = false;
        for (int h = 0; h <= opt.max_halvings; ++h) {
            const cplx zn = r.z + step;
            if (!admissible || admissible(zn)) {
                const cplx fn = f(zn);
                const double rn = std::abs(fn);
                if (std::isfinite(rn) && rn < r.residual) {
                    r.z = zn;
                    fz = fn;
                    r.residual = rn;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    r.converged = r.residual <= opt.tol;
    return r;
}

namespace {

double norm2(const std::array<cplx, 2>& v) { return std::hypot(std::abs(v[0]), std::abs(v[1])); }

}  // namespace

ComplexRoot2 newton2(const std::function<System2(const std::array<cplx, 2>&)>& system,
                     std::array<cplx, 2> z0, const RootOptions& opt,
                     const std::function<bool(const std::array<cplx, 2>&)>& admissible) {
    ComplexRoot2 r;
    r.z = z0;
    System2 s = system(z0);
    r.residual = norm2(s.f);
    for (r.iterations = 0; r.iterations < opt.max_iter; ++r.iterations) {
        if (!(r.residual > opt.tol)) {
            r.converged = std::isfinite(r.residual);
            return r;
        }
        const auto& J = s.jac;
        const cplx det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == cplx(0.0) || !std::isfinite(std::abs(det))) return r;
        std::array<cplx, 2> step = {-(J[1][1] * s.f[0] - J[0][1] * s.f[1]) / det,
                                    -(-J[1][0] * s.f[0] + J[0][0] * s.f[1]) / det};
        bool accepted = false;
        for (int h = 0; h <= opt.max_halvings; ++h) {
            const std::array<cplx, 2> zn = {r.z[0] + step[0], r.z[1] + step[1]};
            if (!admissible || admissible(zn)) {
                System2 sn = system(zn);
                const double rn = norm2(sn.f);
                if (std::isfinite(rn) && rn < r.residual) {
                    r.z = zn;
                    s = sn;
                    r.residual = rn;
                    accepted = true;
                    break;
                }
            }
            step[0] *= 0.5;
            step[1] *= 0.5;
        }
        if (!accepted) break;
    }
    r.converged = r.residual <= opt.tol;
    return r;
}

double bracket_root(const std::function<double(double)>& f, double a, double b, double xtol,
                    int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NumericalError("bracket_root: no sign change on the bracket");
    boost::uintmax_t it = static_cast<boost::uintmax_t>(max_iter);
    auto tol = [xtol](double x, double y) { return std::abs(x - y) <= xtol * (1.0 + std::abs(x)); };
    auto res = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, it);
    return 0.5 * (res.first + res.second);
}

unsigned default_thread_count() {
    if (const char* s = std::getenv("RMT_THREADS")) {
        const long v = std::strtol(s, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
    if (threads == 0) threads = default_thread_count();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex m;
    std::vector<std::thread> pool;
    const unsigned k = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    for (unsigned t = 0; t < k; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        c_ += (sum_ - t) + x;
    else
        c_ += (x - t) + sum_;
    sum_ = t;
}

}  // namespace rmt
