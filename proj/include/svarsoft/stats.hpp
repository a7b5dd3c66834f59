#pragma once

#include <functional>
#include <span>
#include <vector>

namespace svarsoft {

struct KsResult {
    double statistic = 0.0;  ///< D
    double p_value = 1.0;
};

/// Asymptotic Kolmogorov tail probability Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda);

/// One-sample KS test of `sample` against a continuous CDF.
KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);
KsResult ks_test_uniform(std::span<const double> sample, double lo, double hi);

/// Two-sample KS test; the effective size is n m / (n + m).
KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b);

/// Sample quantile by linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> values, double prob);
double quantile_sorted(std::span<const double> sorted, double prob);
double median(std::vector<double> values);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<long> counts;

    double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
};

/// Equal-width bins on [lo, hi]; values outside are ignored and hi falls in the last bin.
Histogram histogram(std::span<const double> values, double lo, double hi, int bins);

}  // namespace svarsoft
