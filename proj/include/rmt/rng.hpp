#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace rmt {

/// Seedable, splittable generator: mt19937_64 seeded through splitmix64 from a
/// (seed, stream) pair. Streams derived with split() are independent of the
/// parent's draws, so replicas can be generated in any order.
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64/splitmix64";

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    Rng split(std::uint64_t stream) const;

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    /// χ² with `dof` degrees of freedom (Gamma(dof/2, scale 2)).
    double chi_squared(double dof);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

/// rows × cols matrix of IID standard normals, filled row by row.
Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Unit vector uniform on the sphere S^{n−1}.
Eigen::VectorXd random_unit_vector(Rng& rng, Eigen::Index n);

}  // namespace rmt
