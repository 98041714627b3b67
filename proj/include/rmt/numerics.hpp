#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace rmt {

using cplx = std::complex<double>;

/// Raised when an iterative solver fails; maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct RootOptions {
    int max_iter = 200;
    double tol = 1e-12;  // residual target |f|
    int max_halvings = 40;
};

struct ComplexRoot {
    cplx z;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Damped Newton for f(z) = 0. Steps are halved until |f| decreases and
/// `admissible(z)` holds (e.g. staying off the real support).
ComplexRoot newton(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& df,
                   cplx z0, const RootOptions& opt = {},
                   const std::function<bool(cplx)>& admissible = nullptr);

struct ComplexRoot2 {
    std::array<cplx, 2> z;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Residual vector and Jacobian of a 2×2 complex system.
struct System2 {
    std::array<cplx, 2> f;
    std::array<std::array<cplx, 2>, 2> jac;
};

ComplexRoot2 newton2(const std::function<System2(const std::array<cplx, 2>&)>& system,
                     std::array<cplx, 2> z0, const RootOptions& opt = {},
                     const std::function<bool(const std::array<cplx, 2>&)>& admissible = nullptr);

/// Bracketing root of a real function on [a, b] (f(a), f(b) of opposite sign).
double bracket_root(const std::function<double(double)>& f, double a, double b,
                    double xtol = 1e-15, int max_iter = 200);

/// Runs body(i) for i in [0, n) on up to `threads` workers; results must be
/// written to per-index slots so the outcome is independent of scheduling.
/// threads = 0 reads RMT_THREADS (default 1).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

unsigned default_thread_count();

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

}  // namespace rmt
