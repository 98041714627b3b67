#pragma once

#include <functional>
#include <vector>

namespace rmt {

double mean(const std::vector<double>& x);
/// Unbiased (n−1) sample variance.
double variance(const std::vector<double>& x);
double stddev(const std::vector<double>& x);
/// Sample excess kurtosis m4/m2² − 3 (moments about the mean).
double excess_kurtosis(const std::vector<double>& x);
/// Linear-interpolated quantile, p in [0, 1].
double quantile(std::vector<double> x, double p);
double median(std::vector<double> x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Kolmogorov survival function Q(λ) = 2 Σ (−1)^{k−1} exp(−2k²λ²).
double kolmogorov_q(double lambda);
/// Two-sample Kolmogorov–Smirnov test (asymptotic p-value with the
/// Stephens small-sample correction).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

/// Least-squares slope and intercept of y on x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rmt
