#include "rmt/synth.hpp"

#include "rmt/estimators.hpp"
#include "rmt/spectra.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rmt {

Eigen::MatrixXd haar_rotation(Eigen::Index N, Rng& rng) {
    if (N < 1) throw std::invalid_argument("haar_rotation: N must be positive");
    const Eigen::MatrixXd g = gaussian_matrix(rng, N, N);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < N; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

Eigen::MatrixXd haar_rotation(Eigen::Index N, std::uint64_t seed) {
    Rng rng(seed);
    return haar_rotation(N, rng);
}

void TrueCorrelationSpec::validate() const {
    if (N < 1) throw std::invalid_argument("N must be positive");
    switch (kind) {
        case TrueCorrelationKind::Identity: break;
        case TrueCorrelationKind::SingleSpike:
            if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0, 1)");
            break;
        case TrueCorrelationKind::MultiSpike:
            if (static_cast<Eigen::Index>(spikes.size()) > N)
                throw std::invalid_argument("more spikes than assets");
            for (double s : spikes)
                if (!(s > 0.0)) throw std::invalid_argument("spike eigenvalues must be positive");
            break;
        case TrueCorrelationKind::PowerLaw:
            PowerLawPrior{alpha, mu}.validate();
            break;
    }
}

std::string TrueCorrelationSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case TrueCorrelationKind::Identity: os << "identity"; break;
        case TrueCorrelationKind::SingleSpike: os << "spike rho=" << rho; break;
        case TrueCorrelationKind::MultiSpike:
            os << "multispike";
            for (double s : spikes) os << ' ' << s;
            break;
        case TrueCorrelationKind::PowerLaw: os << "powerlaw alpha=" << alpha << " mu=" << mu; break;
    }
    os << " N=" << N;
    return os.str();
}

Eigen::VectorXd powerlaw_ladder(Eigen::Index N, double alpha, double mu) {
    const PowerLawPrior p{alpha, mu};
    p.validate();
    Eigen::VectorXd lam(N);
    for (Eigen::Index k = 0; k < N; ++k)
        lam(k) = std::max(1e-8, p.lambda0() + std::pow(p.A() * static_cast<double>(N) /
                                                           static_cast<double>(k + 1),
                                                       1.0 / mu));
    return lam;
}

CorrelationMatrix build_true_correlation(const TrueCorrelationSpec& spec, std::uint64_t seed) {
    spec.validate();
    const Eigen::Index n = spec.N;
    switch (spec.kind) {
        case TrueCorrelationKind::Identity: return CorrelationMatrix(Eigen::MatrixXd::Identity(n, n));
        case TrueCorrelationKind::SingleSpike: {
            Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, spec.rho);
            m.diagonal().setOnes();
            return CorrelationMatrix(m);
        }
        case TrueCorrelationKind::MultiSpike: {
            Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
            for (std::size_t r = 0; r < spec.spikes.size(); ++r)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = spec.spikes[r];
            return CorrelationMatrix(m);
        }
        case TrueCorrelationKind::PowerLaw: {
            if (spec.alpha == 1.0) return CorrelationMatrix(Eigen::MatrixXd::Identity(n, n));
            const Eigen::MatrixXd o = haar_rotation(n, seed);
            return CorrelationMatrix::from_spectrum(powerlaw_ladder(n, spec.alpha, spec.mu), o);
        }
    }
    throw std::invalid_argument("unknown correlation kind");
}

Eigen::MatrixXd sqrt_psd(const CorrelationMatrix& C) {
    const Eigen::VectorXd s = C.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd r = C.eigenvectors() * s.asDiagonal() * C.eigenvectors().transpose();
    return 0.5 * (r + r.transpose());
}

ReturnPanel gaussian_panel(const CorrelationMatrix& C, Eigen::Index T, Rng& rng) {
    if (T < 1) throw std::invalid_argument("T must be positive");
    const Eigen::MatrixXd xi = gaussian_matrix(rng, T, C.size());
    return ReturnPanel(xi * sqrt_psd(C), C.asset_ids());
}

ReturnPanel gaussian_panel(const CorrelationMatrix& C, Eigen::Index T, std::uint64_t seed) {
    Rng rng(seed);
    return gaussian_panel(C, T, rng);
}

ReturnPanel student_panel(const CorrelationMatrix& C_hat, double mu, Eigen::Index T, Rng& rng,
                          bool standardize_columns) {
    if (!(mu > 2.0)) throw std::invalid_argument("mu must exceed 2");
    if (T < 1) throw std::invalid_argument("T must be positive");
    const Eigen::MatrixXd xi = gaussian_matrix(rng, T, C_hat.size());
    Eigen::VectorXd sigma(T);
    for (Eigen::Index t = 0; t < T; ++t) sigma(t) = std::sqrt(mu / rng.chi_squared(mu));
    ReturnPanel p(sigma.asDiagonal() * (xi * sqrt_psd(C_hat)), C_hat.asset_ids());
    return standardize_columns ? standardize(p) : p;
}

ReturnPanel student_panel(const CorrelationMatrix& C_hat, double mu, Eigen::Index T, std::uint64_t seed,
                          bool standardize_columns) {
    Rng rng(seed);
    return student_panel(C_hat, mu, T, rng, standardize_columns);
}

WickReport wick_check(const ReturnPanel& panel, double mu, std::size_t quadruples, std::uint64_t seed) {
    if (!(mu > 4.0)) throw std::invalid_argument("wick_check: mu must exceed 4 (fourth moment diverges)");
    const Eigen::Index n = panel.N();
    const double T = static_cast<double>(panel.T());
    if (n < 1 || panel.T() < 2) throw std::invalid_argument("wick_check: empty panel");
    const Eigen::MatrixXd& r = panel.values;
    const Eigen::MatrixXd c = r.transpose() * r / T;
    WickReport rep;
    rep.expected_prefactor = std::isinf(mu) ? 1.0 : (mu - 2.0) / (mu - 4.0);
    rep.quadruples = quadruples;
    Rng rng(seed);
    auto pick = [&] { return static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n)) % n; };
    double num = 0.0, den = 0.0;
    for (std::size_t s = 0; s < quadruples; ++s) {
        std::array<Eigen::Index, 4> q{};
        const Eigen::Index i = pick(), j = pick();
        switch (s % 4) {
            case 0: q = {i, i, i, i}; break;
            case 1: q = {i, i, j, j}; break;
            case 2: q = {i, j, i, j}; break;
            default: q = {i, j, pick(), pick()}; break;
        }
        const Eigen::ArrayXd prod =
            r.col(q[0]).array() * r.col(q[1]).array() * r.col(q[2]).array() * r.col(q[3]).array();
        const double m = prod.mean();
        const double se = std::sqrt(((prod - m).square().sum() / (T - 1.0)) / T);
        const double w = c(q[0], q[1]) * c(q[2], q[3]) + c(q[0], q[2]) * c(q[1], q[3]) +
                         c(q[0], q[3]) * c(q[1], q[2]);
        const double dev = std::abs(m - rep.expected_prefactor * w);
        rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev);
        if (se > 0.0) rep.max_z = std::max(rep.max_z, dev / se);
        num += m * w;
        den += w * w;
    }
    rep.prefactor = den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace rmt
