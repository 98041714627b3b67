#include "rmt/dynamics.hpp"

#include "rmt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmt {

namespace {

Eigen::VectorXd top_eigenvector(const Eigen::MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success) throw NumericalError("track_top: eigendecomposition failed");
    return es.eigenvectors().col(s.rows() - 1);
}

// Warm-started power iteration; false when it does not settle.
bool power_iterate(const Eigen::MatrixXd& s, Eigen::VectorXd& v, double tol, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = s * v;
        const double nrm = w.norm();
        if (!(nrm > 0.0)) return false;
        w /= nrm;
        if (w.dot(v) < 0.0) w = -w;
        const double change = (w - v).norm();
        v = w;
        if (change < tol) return true;
    }
    return false;
}

}  // namespace

EigenTrack track_top(const ReturnPanel& panel, double epsilon, const Eigen::VectorXd& v_ref,
                     const TrackOptions& opt) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    const Eigen::Index n = panel.N();
    if (v_ref.size() != n) throw std::invalid_argument("reference vector has wrong size");
    if (!(v_ref.norm() > 0.0)) throw std::invalid_argument("reference vector must be non-zero");
    if (opt.record_every < 1 || opt.full_refresh < 1) throw std::invalid_argument("bad track options");
    const Eigen::VectorXd ref = v_ref.normalized();
    EigenTrack tr;
    tr.epsilon = epsilon;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    double weight = 0.0;
    Eigen::VectorXd v = ref;
    for (Eigen::Index t = 0; t < panel.T(); ++t) {
        const Eigen::VectorXd r = panel.values.row(t).transpose();
        s *= (1.0 - epsilon);
        s.noalias() += epsilon * r * r.transpose();
        weight = (1.0 - epsilon) * weight + epsilon;
        const Eigen::VectorXd prev = v;
        const bool refresh = (t + 1) % opt.full_refresh == 0;
        if (refresh || !power_iterate(s, v, opt.power_tol, opt.power_max_iter)) {
            v = top_eigenvector(s);
        }
        if (v.dot(prev) < 0.0) v = -v;
        if (t < opt.burn_in || (t - opt.burn_in) % opt.record_every != 0) continue;
        tr.times.push_back(t);
        tr.lambda1.push_back(v.dot(s * v) / weight);
        tr.v1.push_back(v);
        tr.theta.push_back(std::acos(std::clamp(v.dot(ref), -1.0, 1.0)));
    }
    return tr;
}

double default_lambda0(double l1, double lb) {
    if (!(l1 > lb && lb > 0.0)) throw std::invalid_argument("need Lambda1 > Lambda_b > 0");
    const double b = lb / l1;
    const double kappa = l1 * lb / ((l1 - lb) * (l1 - lb));
    const double a = 1.0 / (1.0 + 2.0 / kappa - (1.0 - b) / (2.0 - b));
    return l1 / a;
}

AngleDensity::AngleDensity(double l1, double lb, double eps, std::optional<double> l0)
    : l1_(l1), lb_(lb), eps_(eps), lambda0_(l0 ? *l0 : default_lambda0(l1, lb)) {
    if (!(l1 > lb && lb > 0.0)) throw std::invalid_argument("need Lambda1 > Lambda_b > 0");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    const double a = l1_ / lambda0_;
    if (!(a > 0.0 && a < 2.0))
        throw std::invalid_argument("angle density is not integrable (need 0 < Lambda1/Lambda0 < 2)");
    const std::size_t m = 100001;
    grid_.resize(m);
    std::vector<double> logp(m);
    double top = -INFINITY;
    for (std::size_t i = 0; i < m; ++i) {
        grid_[i] = std::numbers::pi * static_cast<double>(i) / static_cast<double>(m - 1);
        logp[i] = log_unnormalized(grid_[i]);
        top = std::max(top, logp[i]);
    }
    cum_.assign(m, 0.0);
    double c2 = 0.0;
    const double h = grid_[1] - grid_[0];
    for (std::size_t i = 1; i < m; ++i) {
        const double p0 = std::exp(logp[i - 1] - top), p1 = std::exp(logp[i] - top);
        cum_[i] = cum_[i - 1] + 0.5 * h * (p0 + p1);
        c2 += 0.5 * h * (p0 * std::pow(std::cos(grid_[i - 1]), 2) + p1 * std::pow(std::cos(grid_[i]), 2));
    }
    const double total = cum_.back();
    for (auto& c : cum_) c /= total;
    log_norm_ = top + std::log(total);
    mean_cos2_ = c2 / total;
}

double AngleDensity::log_unnormalized(double theta) const {
    const double c2 = std::cos(2.0 * theta);
    const double num = 1.0 + c2 * (1.0 - lb_ / l1_);
    const double den = 1.0 - c2 * (1.0 - l1_ / lambda0_);
    return (std::log(num) - std::log(den)) / (4.0 * eps_);
}

double AngleDensity::pdf(double theta) const {
    if (theta < 0.0 || theta > std::numbers::pi) return 0.0;
    return std::exp(log_unnormalized(theta) - log_norm_);
}

double AngleDensity::cdf(double theta) const {
    if (theta <= 0.0) return 0.0;
    if (theta >= std::numbers::pi) return 1.0;
    const double pos = theta / (grid_[1] - grid_[0]);
    const auto i = std::min(static_cast<std::size_t>(pos), grid_.size() - 2);
    const double f = pos - static_cast<double>(i);
    return cum_[i] + f * (cum_[i + 1] - cum_[i]);
}

std::vector<double> stationary_angle_density(double l1, double lb, double eps,
                                             const std::vector<double>& theta,
                                             std::optional<double> l0) {
    const AngleDensity d(l1, lb, eps, l0);
    std::vector<double> out;
    out.reserve(theta.size());
    for (double t : theta) out.push_back(d.pdf(t));
    return out;
}

Variograms theoretical_variograms(double l1, double lb, double eps, const std::vector<double>& tau) {
    if (!(l1 > 0.0 && lb > 0.0 && eps > 0.0)) throw std::invalid_argument("parameters must be positive");
    Variograms v;
    v.tau = tau;
    for (double t : tau) {
        const double f = -std::expm1(-eps * t);
        v.value.push_back(2.0 * l1 * l1 * eps * f);
        v.vector.push_back(2.0 * eps * (lb / l1) * f);
    }
    return v;
}

Variograms empirical_variogram(const EigenTrack& track, const std::vector<long long>& tau,
                               bool non_overlapping) {
    const auto n = static_cast<long long>(track.size());
    if (!(track.epsilon > 0.0) || static_cast<double>(n) < 10.0 / track.epsilon)
        throw std::invalid_argument("empirical_variogram: track shorter than 10/epsilon");
    Variograms out;
    for (long long t : tau) {
        if (t < 0 || t >= n) throw std::invalid_argument("empirical_variogram: lag out of range");
        CompensatedSum sv, sw;
        long long count = 0;
        const long long stride = non_overlapping ? std::max(1LL, t) : 1;
        for (long long i = 0; i + t < n; i += stride) {
            const double d = track.lambda1[i + t] - track.lambda1[i];
            sv.add(d * d);
            sw.add(2.0 - 2.0 * std::abs(track.v1[i + t].dot(track.v1[i])));
            ++count;
        }
        out.tau.push_back(static_cast<double>(t));
        out.value.push_back(sv.value() / static_cast<double>(count));
        out.vector.push_back(std::max(0.0, sw.value() / static_cast<double>(count)));
    }
    return out;
}

NonStationarityReport detect_nonstationarity(const EigenTrack& track, double threshold) {
    const auto n = static_cast<long long>(track.size());
    const double eps = track.epsilon;
    std::vector<long long> lags;
    for (double t = 5.0 / eps; t <= 0.5 * static_cast<double>(n); t *= 2.0)
        lags.push_back(static_cast<long long>(t));
    if (lags.empty()) throw std::invalid_argument("detect_nonstationarity: track shorter than 10/epsilon");
    const Variograms v = empirical_variogram(track, lags);
    NonStationarityReport r;
    CompensatedSum s;
    for (double x : track.lambda1) s.add(x);
    r.lambda1 = s.value() / static_cast<double>(n);
    r.predicted = 2.0 * r.lambda1 * r.lambda1 * eps;
    r.observed = *std::max_element(v.value.begin(), v.value.end());
    r.ratio = r.observed / r.predicted;
    r.fired = r.ratio > threshold;
    return r;
}

}  // namespace rmt
