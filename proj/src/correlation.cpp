#include "rmt/correlation.hpp"

#include <cmath>
#include <stdexcept>

namespace rmt {

CorrelationMatrix::CorrelationMatrix(const Eigen::MatrixXd& values, std::vector<std::string> ids)
    : ids_(std::move(ids)) {
    if (values.rows() != values.cols() || values.rows() == 0)
        throw std::invalid_argument("correlation matrix must be square and non-empty");
    if (!values.allFinite()) throw std::invalid_argument("correlation matrix has non-finite entries");
    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    const double asym = (values - values.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale)
        throw std::invalid_argument("correlation matrix is not symmetric (max asymmetry " +
                                    std::to_string(asym) + ")");
    values_ = 0.5 * (values + values.transpose());
    if (ids_.empty())
        for (Eigen::Index j = 0; j < values_.rows(); ++j) ids_.push_back("A" + std::to_string(j + 1));
    if (static_cast<Eigen::Index>(ids_.size()) != values_.rows())
        throw std::invalid_argument("correlation matrix: id count does not match size");
    decompose();
}

CorrelationMatrix CorrelationMatrix::from_spectrum(const Eigen::VectorXd& eigenvalues,
                                                   const Eigen::MatrixXd& eigenvectors,
                                                   std::vector<std::string> ids) {
    if (eigenvectors.cols() != eigenvalues.size() || eigenvectors.rows() != eigenvalues.size())
        throw std::invalid_argument("from_spectrum: dimension mismatch");
    Eigen::MatrixXd m = eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
    m = 0.5 * (m + m.transpose()).eval();
    return CorrelationMatrix(m, std::move(ids));
}

void CorrelationMatrix::decompose() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(values_);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    const Eigen::Index n = values_.rows();
    eigenvalues_ = es.eigenvalues().reverse();
    eigenvectors_ = es.eigenvectors().rowwise().reverse();
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(eigenvectors_(i, k));
            if (a > best * (1.0 + 1e-12)) {
                best = a;
                arg = i;
            }
        }
        if (eigenvectors_(arg, k) < 0.0) eigenvectors_.col(k) *= -1.0;
    }
}

Eigen::MatrixXd CorrelationMatrix::inverse(double floor) const {
    if (!(min_eigenvalue() > floor))
        throw std::invalid_argument("matrix is singular (smallest eigenvalue " +
                                    std::to_string(min_eigenvalue()) + "); clean it first");
    Eigen::MatrixXd inv = eigenvectors_ * eigenvalues_.cwiseInverse().asDiagonal() *
                          eigenvectors_.transpose();
    return 0.5 * (inv + inv.transpose());
}

Eigen::VectorXd CorrelationMatrix::solve(const Eigen::VectorXd& b, double floor) const {
    if (!(min_eigenvalue() > floor))
        throw std::invalid_argument("matrix is singular (smallest eigenvalue " +
                                    std::to_string(min_eigenvalue()) + "); clean it first");
    return eigenvectors_ * (eigenvalues_.cwiseInverse().asDiagonal() * (eigenvectors_.transpose() * b));
}

CorrelationMatrix CorrelationMatrix::rescaled_to_trace(double target) const {
    const double tr = trace();
    if (!(tr > 0.0)) throw std::invalid_argument("rescaled_to_trace: non-positive trace");
    CorrelationMatrix out = *this;
    const double f = target / tr;
    out.values_ *= f;
    out.eigenvalues_ *= f;
    return out;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    return es.eigenvalues().reverse();
}

}  // namespace rmt
