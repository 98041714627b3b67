#include "rmt/portfolio.hpp"

#include "rmt/numerics.hpp"
#include "rmt/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rmt {

PortfolioWeights markowitz_weights(const CorrelationMatrix& C, const Eigen::VectorXd& g, double G) {
    if (g.size() != C.size()) throw std::invalid_argument("markowitz_weights: g has wrong size");
    if (g.squaredNorm() == 0.0) throw std::invalid_argument("markowitz_weights: g must be non-zero");
    const Eigen::VectorXd cg = C.solve(g);
    const double denom = g.dot(cg);
    if (!(denom > 0.0)) throw std::invalid_argument("markowitz_weights: g^T C^-1 g is not positive");
    return {G * cg / denom, G};
}

RiskReport risk_triple(const CorrelationMatrix& E, const CorrelationMatrix* C, const Eigen::VectorXd& g,
                       double G) {
    if (g.size() != E.size()) throw std::invalid_argument("risk_triple: g has wrong size");
    const Eigen::VectorXd eg = E.solve(g);
    const double geg = g.dot(eg);
    RiskReport r;
    r.in_sample = G * G / geg;
    if (C) {
        if (C->size() != E.size()) throw std::invalid_argument("risk_triple: C has wrong size");
        r.true_risk = G * G / g.dot(C->solve(g));
        r.out_of_sample = G * G * eg.dot(C->values() * eg) / (geg * geg);
    }
    return r;
}

std::pair<double, double> theoretical_risk_ratios(double q) {
    if (!(q >= 0.0)) throw std::invalid_argument("q must be non-negative");
    if (q >= 1.0) throw std::invalid_argument("q >= 1: zero in-sample risk, ratios undefined");
    return {std::sqrt(1.0 - q), 1.0 / std::sqrt(1.0 - q)};
}

namespace {

struct DateData {
    CorrelationMatrix E;
    Eigen::VectorXd g;        // unit predictor
    Eigen::MatrixXd future;   // horizon × N, r/σ
};

std::vector<Eigen::Index> rebalance_dates(const ReturnPanel& panel, const BacktestOptions& opt) {
    if (opt.window < 2 || opt.horizon < 1 || opt.step < 1)
        throw std::invalid_argument("backtest: window >= 2, horizon >= 1 and step >= 1 required");
    if (panel.T() < opt.window + 1 + opt.horizon)
        throw std::invalid_argument("backtest: insufficient history (T=" + std::to_string(panel.T()) +
                                    " < window + 1 + horizon = " +
                                    std::to_string(opt.window + 1 + opt.horizon) + ")");
    std::vector<Eigen::Index> dates;
    for (Eigen::Index t = opt.window; t + opt.horizon < panel.T(); t += opt.step) dates.push_back(t);
    return dates;
}

DateData prepare(const ReturnPanel& panel, Eigen::Index t, const BacktestOptions& opt) {
    const Eigen::MatrixXd w = panel.values.middleRows(t - opt.window, opt.window);
    const Eigen::RowVectorXd m = w.colwise().mean();
    const Eigen::MatrixXd x = w.rowwise() - m;
    const Eigen::RowVectorXd sigma = (x.colwise().squaredNorm() / static_cast<double>(opt.window)).cwiseSqrt();
    for (Eigen::Index j = 0; j < sigma.size(); ++j)
        if (!(sigma(j) > 0.0))
            throw std::invalid_argument("backtest: constant window for asset " + panel.asset_ids[j]);
    const Eigen::RowVectorXd inv = sigma.cwiseInverse();
    const Eigen::MatrixXd xs = x * inv.asDiagonal();
    DateData d{CorrelationMatrix(xs.transpose() * xs / static_cast<double>(opt.window), panel.asset_ids),
               Eigen::VectorXd(), Eigen::MatrixXd()};
    if (opt.predictor == Predictor::Returns) {
        d.g = (panel.values.row(t).cwiseProduct(inv)).transpose();
        const double nrm = d.g.norm();
        if (!(nrm > 0.0)) throw std::invalid_argument("backtest: zero predictor on date " + panel.time_ids[t]);
        d.g /= nrm;
    } else {
        Rng rng(opt.seed, static_cast<std::uint64_t>(t));
        d.g = random_unit_vector(rng, panel.N());
    }
    d.future = panel.values.middleRows(t + 1, opt.horizon) * inv.asDiagonal();
    return d;
}

/// E_α⁻¹ applied to the columns of b.
Eigen::MatrixXd cleaned_solve(const CorrelationMatrix& E, const CleaningScheme& s, const Eigen::MatrixXd& b) {
    if (s.kind == CleaningKind::ConstantCorrShrinkage) {
        const CorrelationMatrix c = shrink_const_corr(E, s.alpha);
        return c.eigenvectors() *
               (c.eigenvalues().cwiseInverse().asDiagonal() * (c.eigenvectors().transpose() * b));
    }
    const Eigen::VectorXd lam = cleaned_spectrum(E, s);
    if (!(lam.minCoeff() > 1e-12))
        throw std::invalid_argument("backtest: cleaned matrix is singular (alpha=" + std::to_string(s.alpha) +
                                    "); increase alpha");
    return E.eigenvectors() * (lam.cwiseInverse().asDiagonal() * (E.eigenvectors().transpose() * b));
}

}  // namespace

std::vector<BacktestRow> backtest(const ReturnPanel& panel, CleaningKind kind,
                                  const std::vector<double>& alphas, const BacktestOptions& opt,
                                  double mu) {
    if (alphas.empty()) throw std::invalid_argument("backtest: no alpha values");
    for (double a : alphas) CleaningScheme{kind, a, mu}.validate();
    const auto dates = rebalance_dates(panel, opt);
    const std::size_t na = alphas.size();
    std::vector<double> in(dates.size() * na), out(dates.size() * na);
    parallel_for(
        dates.size(),
        [&](std::size_t k) {
            const DateData d = prepare(panel, dates[k], opt);
            for (std::size_t a = 0; a < na; ++a) {
                const Eigen::VectorXd eg = cleaned_solve(d.E, {kind, alphas[a], mu}, d.g);
                const double geg = d.g.dot(eg);
                if (!(geg > 0.0)) throw NumericalError("backtest: cleaned matrix is not positive definite");
                const Eigen::VectorXd w = eg / geg;
                in[k * na + a] = 1.0 / geg;
                out[k * na + a] = (d.future * w).squaredNorm() / static_cast<double>(opt.horizon);
            }
        },
        opt.threads);
    std::vector<BacktestRow> rows;
    for (std::size_t a = 0; a < na; ++a) {
        CompensatedSum si, so;
        for (std::size_t k = 0; k < dates.size(); ++k) {
            si.add(in[k * na + a]);
            so.add(out[k * na + a]);
        }
        BacktestRow r;
        r.kind = kind;
        r.alpha = alphas[a];
        r.dates = dates.size();
        r.risk.in_sample = si.value() / static_cast<double>(dates.size());
        r.risk.out_of_sample = so.value() / static_cast<double>(dates.size());
        rows.push_back(r);
    }
    return rows;
}

RiskReport backtest(const ReturnPanel& panel, const CleaningScheme& scheme, const BacktestOptions& opt) {
    return backtest(panel, scheme.kind, {scheme.alpha}, opt, scheme.mu).front().risk;
}

ResidualReport residual_test(const ReturnPanel& panel, const CleaningScheme& scheme,
                             const BacktestOptions& opt) {
    scheme.validate();
    const auto dates = rebalance_dates(panel, opt);
    std::vector<double> in(dates.size()), out(dates.size());
    const Eigen::Index n = panel.N();
    parallel_for(
        dates.size(),
        [&](std::size_t k) {
            const DateData d = prepare(panel, dates[k], opt);
            const Eigen::MatrixXd p = cleaned_solve(d.E, scheme, Eigen::MatrixXd::Identity(n, n));
            const Eigen::VectorXd pd = p.diagonal();
            if (!(pd.minCoeff() > 0.0)) throw NumericalError("residual_test: non-positive precision diagonal");
            // Residual of stock i at t': (P z)_i / P_ii.
            const Eigen::MatrixXd res = (d.future * p) * pd.cwiseInverse().asDiagonal();
            const Eigen::VectorXd realized = res.colwise().squaredNorm().transpose() /
                                             static_cast<double>(opt.horizon);
            in[k] = pd.cwiseInverse().mean();
            out[k] = realized.mean();
        },
        opt.threads);
    CompensatedSum si, so;
    for (std::size_t k = 0; k < dates.size(); ++k) {
        si.add(in[k]);
        so.add(out[k]);
    }
    ResidualReport r;
    r.dates = dates.size();
    r.in_res = si.value() / static_cast<double>(dates.size());
    r.out_res = so.value() / static_cast<double>(dates.size());
    r.ratio = r.out_res / r.in_res;
    return r;
}

}  // namespace rmt
