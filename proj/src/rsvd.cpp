#include "rmt/rsvd.hpp"

#include "rmt/correlation.hpp"
#include "rmt/estimators.hpp"
#include "rmt/rng.hpp"
#include "rmt/spectra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmt {

WhiteningResult normalize_principal_components(const ReturnPanel& panel, double rel_tol) {
    if (panel.T() < 2 || panel.N() < 1) throw std::invalid_argument("whitening: empty panel");
    const double T = static_cast<double>(panel.T());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(panel.values.transpose() * panel.values / T);
    if (es.info() != Eigen::Success) throw NumericalError("whitening: eigendecomposition failed");
    const Eigen::VectorXd lam = es.eigenvalues().reverse();
    const Eigen::MatrixXd vec = es.eigenvectors().rowwise().reverse();
    Eigen::Index keep = 0;
    while (keep < lam.size() && lam(keep) > rel_tol * lam(0)) ++keep;
    if (keep == 0) throw std::invalid_argument("whitening: zero panel");
    WhiteningResult r;
    r.dropped = static_cast<std::size_t>(lam.size() - keep);
    if (r.dropped > 0)
        r.warnings.push_back("dropped " + std::to_string(r.dropped) +
                             " null direction(s) of the sample correlation matrix");
    r.eigenvalues = lam.head(keep);
    r.loadings = vec.leftCols(keep) * r.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
    std::vector<std::string> ids;
    for (Eigen::Index a = 0; a < keep; ++a) ids.push_back("PC" + std::to_string(a + 1));
    r.components = ReturnPanel(panel.values * r.loadings, ids, panel.time_ids);
    return r;
}

double rsvd_edge_scale(double n, double m, long long T) {
    const auto [gm, gp] = rsvd_gamma(n, m);
    const double cp = std::sqrt(gp);
    if (!(gp < 1.0)) throw std::invalid_argument("edge scale undefined for gamma+ = 1");
    const double A = std::sqrt((gp - gm) * 2.0 * cp) / (std::numbers::pi * cp * (1.0 - gp));
    return std::pow(std::numbers::pi * static_cast<double>(T) * A, -2.0 / 3.0);
}

CrossCorrelationResult cross_singulars(const ReturnPanel& xhat, const ReturnPanel& yhat, double buffer) {
    if (xhat.T() != yhat.T())
        throw std::invalid_argument("cross_singulars: T mismatch (" + std::to_string(xhat.T()) + " vs " +
                                    std::to_string(yhat.T()) + ")");
    const double T = static_cast<double>(xhat.T());
    const Eigen::MatrixXd e = yhat.values.transpose() * xhat.values / T;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
    CrossCorrelationResult r;
    r.singular_values = svd.singularValues();
    r.left_vectors = svd.matrixU();
    r.right_vectors = svd.matrixV();
    const double n = static_cast<double>(xhat.N()) / T, m = static_cast<double>(yhat.N()) / T;
    const auto [gm, gp] = rsvd_gamma(n, m);
    r.null_band = {std::sqrt(gm), std::sqrt(gp)};
    r.edge_scale = gp < 1.0 ? rsvd_edge_scale(n, m, xhat.T()) : 0.0;
    r.threshold = r.null_band.second + buffer * r.edge_scale;
    for (Eigen::Index k = 0; k < r.singular_values.size(); ++k)
        if (r.singular_values(k) > r.threshold) ++r.significant_count;
    return r;
}

std::pair<ReturnPanel, ReturnPanel> planted_factor_panels(Eigen::Index N, Eigen::Index M, Eigen::Index T,
                                                          double strength, std::uint64_t seed) {
    if (N < 1 || M < 1 || T < 2) throw std::invalid_argument("planted_factor_panels: bad dimensions");
    if (!(strength >= 0.0 && strength <= 1.0)) throw std::invalid_argument("strength must lie in [0, 1]");
    Rng rng(seed);
    Rng rx = rng.split(1), ry = rng.split(2), ra = rng.split(3);
    const Eigen::MatrixXd x = gaussian_matrix(rx, T, N);
    const Eigen::VectorXd a = random_unit_vector(ra, N);
    const Eigen::VectorXd f = x * a;
    Eigen::MatrixXd y = std::sqrt(1.0 - strength * strength) * gaussian_matrix(ry, T, M);
    y.colwise() += strength * f;
    std::vector<std::string> xid, yid;
    for (Eigen::Index i = 0; i < N; ++i) xid.push_back("X" + std::to_string(i + 1));
    for (Eigen::Index j = 0; j < M; ++j) yid.push_back("Y" + std::to_string(j + 1));
    return {standardize(ReturnPanel(x, xid)), standardize(ReturnPanel(y, yid))};
}

}  // namespace rmt
