#include "rmt/rng.hpp"

#include <stdexcept>

namespace rmt {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}

Rng Rng::split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream_)), stream);
}

double Rng::chi_squared(double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("chi_squared: dof must be positive");
    std::gamma_distribution<double> g(0.5 * dof, 2.0);
    return g(engine_);
}

Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

Eigen::VectorXd random_unit_vector(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd v(n);
    double norm = 0.0;
    while (norm == 0.0) {
        for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
        norm = v.norm();
    }
    return v / norm;
}

}  // namespace rmt
