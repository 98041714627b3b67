#include "rmt/spikes.hpp"

#include <cmath>
#include <stdexcept>

namespace rmt {

namespace {
void check_q(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("q must be positive");
}
}  // namespace

double bbp_map_mp(double Lambda, double q) {
    check_q(q);
    if (!(Lambda > 0.0)) throw std::invalid_argument("Lambda must be positive");
    const double thr = 1.0 + std::sqrt(q);
    if (Lambda <= thr) return thr * thr;
    return Lambda + Lambda * q / (Lambda - 1.0);
}

std::pair<double, double> bbp_map_wigner(double Lambda) {
    if (Lambda <= 1.0) return {2.0, 0.0};
    return {Lambda + 1.0 / Lambda, 1.0 - 1.0 / (Lambda * Lambda)};
}

double invert_spike_mp(double lambda_obs, double q) {
    check_q(q);
    const double thr = 1.0 + std::sqrt(q);
    if (!(lambda_obs > thr * thr))
        throw std::invalid_argument("lambda_obs lies inside the bulk (<= (1+sqrt(q))^2)");
    const double b = 1.0 + lambda_obs - q;
    const double disc = std::max(0.0, b * b - 4.0 * lambda_obs);
    return std::max(thr, 0.5 * (b + std::sqrt(disc)));
}

EdgeScaling edge_scaling_mp(double q, long long N) {
    check_q(q);
    if (N < 1) throw std::invalid_argument("N must be positive");
    EdgeScaling e;
    e.lambda_plus = (1.0 + std::sqrt(q)) * (1.0 + std::sqrt(q));
    e.gamma = std::sqrt(q) * std::pow(e.lambda_plus, 2.0 / 3.0);
    e.N = N;
    return e;
}

EdgeScaling edge_scaling_wigner(long long N) {
    if (N < 1) throw std::invalid_argument("N must be positive");
    EdgeScaling e;
    e.lambda_plus = 2.0;
    e.gamma = 1.0;
    e.N = N;
    return e;
}

std::string to_string(TailRegime r) {
    switch (r) {
        case TailRegime::TracyWidom: return "TracyWidom";
        case TailRegime::Marginal: return "Marginal";
        case TailRegime::Frechet: return "Frechet";
    }
    return "?";
}

HeavyTailRegime heavy_tail_regime(double mu) {
    if (!(mu > 2.0)) throw std::invalid_argument("mu <= 2 (Levy regime) is not supported");
    HeavyTailRegime r;
    if (mu > 4.0) {
        r.regime = TailRegime::TracyWidom;
        r.description = "lambda_max sticks to the edge 2 with Tracy-Widom fluctuations";
    } else if (mu == 4.0) {
        r.regime = TailRegime::Marginal;
        r.description = "delta-peak at 2 plus a transformed Frechet part";
    } else {
        r.regime = TailRegime::Frechet;
        r.exponent = 2.0 / mu - 0.5;
        r.description = "lambda_max grows as N^(2/mu-1/2) with Frechet fluctuations";
    }
    return r;
}

SpikeReport detect_spikes(const Eigen::VectorXd& eigs, double q, double u) {
    SpikeReport rep;
    rep.edge = edge_scaling_mp(q, static_cast<long long>(eigs.size()));
    rep.threshold = rep.edge.lambda_plus + u * rep.edge.scale();
    for (Eigen::Index k = 0; k < eigs.size(); ++k) {
        if (!(eigs(k) > rep.threshold)) continue;
        SpikeOutlier o;
        o.index = k;
        o.lambda = eigs(k);
        o.implied_Lambda = invert_spike_mp(eigs(k), q);
        o.overlap = bbp_map_wigner(o.implied_Lambda).second;
        rep.outliers.push_back(o);
    }
    return rep;
}

SpikeReport detect_spikes(const CorrelationMatrix& E, double q, double u) {
    return detect_spikes(E.eigenvalues(), q, u);
}

}  // namespace rmt
