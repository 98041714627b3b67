#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace rmt {

/**
 * Symmetric N×N matrix with its eigendecomposition computed once at
 * construction. Eigenvalues are sorted in descending order; each
 * eigenvector's largest-magnitude component is positive (first index wins
 * ties). Immutable after construction.
 */
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;
    /// Input must be symmetric to 1e-10 relative; it is symmetrized exactly.
    explicit CorrelationMatrix(const Eigen::MatrixXd& values, std::vector<std::string> ids = {});

    /// V diag(λ) Vᵀ from a given spectrum (eigenvectors as columns).
    static CorrelationMatrix from_spectrum(const Eigen::VectorXd& eigenvalues,
                                           const Eigen::MatrixXd& eigenvectors,
                                           std::vector<std::string> ids = {});

    const Eigen::MatrixXd& values() const { return values_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    const std::vector<std::string>& asset_ids() const { return ids_; }
    Eigen::Index size() const { return values_.rows(); }
    double trace() const { return values_.trace(); }
    double min_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }

    /// Inverse through the spectrum; throws if min eigenvalue ≤ `floor`.
    Eigen::MatrixXd inverse(double floor = 1e-12) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& b, double floor = 1e-12) const;

    /// Same eigenvectors, all eigenvalues multiplied so the trace equals `target`.
    CorrelationMatrix rescaled_to_trace(double target) const;

private:
    Eigen::MatrixXd values_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    std::vector<std::string> ids_;

    void decompose();
};

/// Eigenvalues of a symmetric matrix, descending (no vectors).
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

}  // namespace rmt
