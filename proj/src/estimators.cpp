#include "rmt/estimators.hpp"

#include "rmt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmt {

ReturnPanel standardize(const ReturnPanel& panel) {
    const Eigen::Index T = panel.T();
    if (T < 2) throw std::invalid_argument("standardize: need at least 2 observations");
    ReturnPanel out = panel;
    for (Eigen::Index j = 0; j < panel.N(); ++j) {
        auto col = out.values.col(j);
        const double m = col.mean();
        col.array() -= m;
        const double var = col.squaredNorm() / static_cast<double>(T);
        const double scale = std::max(std::abs(m), panel.values.col(j).cwiseAbs().maxCoeff());
        if (!(var > 1e-28 * std::max(scale * scale, 1e-300)) || var == 0.0)
            throw std::invalid_argument("standardize: constant column for asset " + panel.asset_ids[j]);
        col /= std::sqrt(var);
    }
    return out;
}

CorrelationMatrix pearson(const ReturnPanel& panel) {
    if (panel.T() < 1) throw std::invalid_argument("pearson: empty panel");
    Eigen::MatrixXd e = panel.values.transpose() * panel.values / static_cast<double>(panel.T());
    return CorrelationMatrix(0.5 * (e + e.transpose()), panel.asset_ids);
}

CorrelationMatrix ewma_estimator(const ReturnPanel& panel, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("ewma_estimator: epsilon must lie in (0, 1)");
    const Eigen::Index T = panel.T();
    if (T < 1) throw std::invalid_argument("ewma_estimator: empty panel");
    Eigen::VectorXd w(T);
    for (Eigen::Index t = 0; t < T; ++t)
        w(t) = std::exp(static_cast<double>(T - 1 - t) * std::log1p(-epsilon));
    w /= w.sum();
    const Eigen::MatrixXd xw = w.cwiseSqrt().asDiagonal() * panel.values;
    Eigen::MatrixXd e = xw.transpose() * xw;
    return CorrelationMatrix(0.5 * (e + e.transpose()), panel.asset_ids);
}

StudentMlResult student_ml(const ReturnPanel& panel, double mu, double tol, int max_iter) {
    if (!(mu > 2.0)) throw std::invalid_argument("student_ml: mu must exceed 2");
    if (!(tol > 0.0) || max_iter < 1) throw std::invalid_argument("student_ml: bad tolerance");
    const double N = static_cast<double>(panel.N());
    const double T = static_cast<double>(panel.T());
    const Eigen::MatrixXd& X = panel.values;
    Eigen::MatrixXd c = X.transpose() * X / T;
    double theta = 1.0, prev = INFINITY, change = INFINITY;
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::LLT<Eigen::MatrixXd> llt(c);
        if (llt.info() != Eigen::Success)
            throw NumericalError("student_ml: singular iterate at iteration " + std::to_string(it));
        const Eigen::MatrixXd z = llt.matrixL().solve(X.transpose());
        const Eigen::VectorXd quad = z.colwise().squaredNorm().transpose();
        const Eigen::VectorXd w = ((N + mu) / T) * (mu + quad.array()).inverse().matrix();
        const Eigen::MatrixXd xw = w.cwiseSqrt().asDiagonal() * X;
        Eigen::MatrixXd f = xw.transpose() * xw;
        f = 0.5 * (f + f.transpose()).eval();
        change = (f - c).cwiseAbs().maxCoeff();
        if (change > prev) theta = std::max(theta * 0.5, 1.0 / 64.0);
        prev = change;
        c += theta * (f - c);
        if (change < tol) return {CorrelationMatrix(c, panel.asset_ids), it, change};
    }
    throw NumericalError("student_ml: no convergence after " + std::to_string(max_iter) +
                         " iterations (last change " + std::to_string(change) + ")");
}

DualSpectrum dual_spectrum_check(const ReturnPanel& panel) {
    const double N = static_cast<double>(panel.N());
    const double T = static_cast<double>(panel.T());
    const Eigen::MatrixXd& r = panel.values;
    DualSpectrum out;
    out.eigs_n = symmetric_eigenvalues(r.transpose() * r / T);
    out.eigs_t = symmetric_eigenvalues(r * r.transpose() / N);
    const Eigen::Index k = std::min(panel.N(), panel.T());
    const double top = std::max(out.eigs_n(0), 1e-300);
    for (Eigen::Index i = 0; i < k; ++i)
        out.max_relative_gap =
            std::max(out.max_relative_gap, std::abs(out.eigs_n(i) - (N / T) * out.eigs_t(i)) / top);
    return out;
}

EigenportfolioReport eigenportfolio_report(const CorrelationMatrix& E, const ReturnPanel& panel) {
    if (E.size() != panel.N()) throw std::invalid_argument("eigenportfolio_report: size mismatch");
    EigenportfolioReport rep;
    rep.eigenvalues = E.eigenvalues();
    const Eigen::MatrixXd p = panel.values * E.eigenvectors();
    rep.cross_covariance = p.transpose() * p / static_cast<double>(panel.T());
    rep.realized_variance = rep.cross_covariance.diagonal();
    rep.max_variance_error = (rep.realized_variance - rep.eigenvalues).cwiseAbs().maxCoeff();
    for (Eigen::Index a = 0; a < E.size(); ++a)
        for (Eigen::Index b = 0; b < E.size(); ++b)
            if (a != b)
                rep.max_cross_covariance =
                    std::max(rep.max_cross_covariance, std::abs(rep.cross_covariance(a, b)));
    return rep;
}

std::vector<double> eigenvector_kurtosis(const CorrelationMatrix& E) {
    const double n = static_cast<double>(E.size());
    std::vector<double> out;
    out.reserve(E.size());
    for (Eigen::Index k = 0; k < E.size(); ++k)
        out.push_back(n * E.eigenvectors().col(k).array().pow(4).sum() - 3.0);
    return out;
}

}  // namespace rmt
