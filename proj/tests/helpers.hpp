#pragma once

#include "rmt/correlation.hpp"
#include "rmt/rng.hpp"

#include <vector>

namespace rmt::test {

/// Eigenvalues of XᵀX/T for a T×N IID standard Gaussian X.
inline std::vector<double> wishart_eigs(Eigen::Index N, Eigen::Index T, Rng& rng) {
    const Eigen::MatrixXd x = gaussian_matrix(rng, T, N);
    const Eigen::VectorXd e = symmetric_eigenvalues(x.transpose() * x / static_cast<double>(T));
    return {e.data(), e.data() + e.size()};
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace rmt::test
