#include "rmt/cleaning.hpp"

#include "rmt/spectra.hpp"

#include <cmath>
#include <stdexcept>

namespace rmt {

void CleaningScheme::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
    if (kind == CleaningKind::PowerLaw) {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must lie in (0, 1] for power-law cleaning");
        if (!(mu > 1.0)) throw std::invalid_argument("mu must exceed 1 for power-law cleaning");
    }
}

CleaningKind parse_cleaning_kind(const std::string& name) {
    if (name == "clip") return CleaningKind::Clipping;
    if (name == "powerlaw") return CleaningKind::PowerLaw;
    if (name == "shrink") return CleaningKind::LinearShrinkage;
    if (name == "ledoit") return CleaningKind::ConstantCorrShrinkage;
    throw std::invalid_argument("scheme: unknown value '" + name + "' (clip, powerlaw, shrink, ledoit)");
}

std::string to_string(CleaningKind kind) {
    switch (kind) {
        case CleaningKind::Clipping: return "clip";
        case CleaningKind::PowerLaw: return "powerlaw";
        case CleaningKind::LinearShrinkage: return "shrink";
        case CleaningKind::ConstantCorrShrinkage: return "ledoit";
    }
    return "?";
}

namespace {

Eigen::VectorXd clipped(const Eigen::VectorXd& eigs, double alpha) {
    const Eigen::Index n = eigs.size();
    const auto keep = static_cast<Eigen::Index>(std::ceil((1.0 - alpha) * static_cast<double>(n) - 1e-9));
    Eigen::VectorXd out = eigs;
    if (keep >= n) return out;
    const double kept = eigs.head(keep).sum();
    const double fill = (static_cast<double>(n) - kept) / static_cast<double>(n - keep);
    out.tail(n - keep).setConstant(fill);
    return out;
}

Eigen::VectorXd powerlaw_ladder(const Eigen::VectorXd& eigs, double alpha, double mu) {
    const PowerLawPrior p{alpha, mu};
    const double n = static_cast<double>(eigs.size());
    Eigen::VectorXd out = eigs;
    for (Eigen::Index k = 1; k < eigs.size(); ++k) {
        const double rank = static_cast<double>(k + 1);
        out(k) = std::max(1e-8, p.lambda0() + std::pow(p.A() * n / rank, 1.0 / mu));
    }
    return out;
}

Eigen::MatrixXd unit_diagonal(const Eigen::MatrixXd& m) {
    const Eigen::VectorXd d = m.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd out = d.asDiagonal() * m * d.asDiagonal();
    out.diagonal().setOnes();
    return out;
}

}  // namespace

Eigen::VectorXd cleaned_spectrum(const CorrelationMatrix& E, const CleaningScheme& s) {
    s.validate();
    switch (s.kind) {
        case CleaningKind::Clipping: return clipped(E.eigenvalues(), s.alpha);
        case CleaningKind::PowerLaw: return powerlaw_ladder(E.eigenvalues(), s.alpha, s.mu);
        case CleaningKind::LinearShrinkage:
            return ((1.0 - s.alpha) * E.eigenvalues().array() + s.alpha).matrix();
        case CleaningKind::ConstantCorrShrinkage: break;
    }
    throw std::invalid_argument("cleaned_spectrum: constant-correlation shrinkage changes eigenvectors");
}

CorrelationMatrix clip(const CorrelationMatrix& E, double alpha, bool renormalize_diagonal) {
    const CleaningScheme s{CleaningKind::Clipping, alpha};
    if (alpha == 0.0 && !renormalize_diagonal) return E;
    CorrelationMatrix c = CorrelationMatrix::from_spectrum(cleaned_spectrum(E, s), E.eigenvectors(),
                                                           E.asset_ids());
    if (!renormalize_diagonal) return c;
    return CorrelationMatrix(unit_diagonal(c.values()), E.asset_ids());
}

CorrelationMatrix powerlaw_clean(const CorrelationMatrix& E, double alpha, double mu) {
    const CleaningScheme s{CleaningKind::PowerLaw, alpha, mu};
    return CorrelationMatrix::from_spectrum(cleaned_spectrum(E, s), E.eigenvectors(), E.asset_ids());
}

CorrelationMatrix shrink_identity(const CorrelationMatrix& E, double alpha) {
    CleaningScheme{CleaningKind::LinearShrinkage, alpha}.validate();
    Eigen::MatrixXd m = (1.0 - alpha) * E.values();
    // d + α(1 − d) keeps a unit diagonal exactly.
    m.diagonal() = E.values().diagonal().array() + alpha * (1.0 - E.values().diagonal().array());
    return CorrelationMatrix(m, E.asset_ids());
}

double mean_off_diagonal(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    if (n < 2) return 0.0;
    const double off = m.sum() - m.trace();
    return off / static_cast<double>(n * (n - 1));
}

CorrelationMatrix shrink_const_corr(const CorrelationMatrix& E, double alpha) {
    CleaningScheme{CleaningKind::ConstantCorrShrinkage, alpha}.validate();
    const Eigen::Index n = E.size();
    Eigen::MatrixXd target = Eigen::MatrixXd::Constant(n, n, mean_off_diagonal(E.values()));
    target.diagonal().setOnes();
    Eigen::MatrixXd m = (1.0 - alpha) * E.values() + alpha * target;
    m.diagonal() = E.values().diagonal().array() + alpha * (1.0 - E.values().diagonal().array());
    return CorrelationMatrix(m, E.asset_ids());
}

CorrelationMatrix clean(const CorrelationMatrix& E, const CleaningScheme& s) {
    s.validate();
    switch (s.kind) {
        case CleaningKind::Clipping: return clip(E, s.alpha, s.renormalize_diagonal);
        case CleaningKind::PowerLaw: return powerlaw_clean(E, s.alpha, s.mu);
        case CleaningKind::LinearShrinkage: return shrink_identity(E, s.alpha);
        case CleaningKind::ConstantCorrShrinkage: return shrink_const_corr(E, s.alpha);
    }
    throw std::invalid_argument("unknown cleaning scheme");
}

}  // namespace rmt
