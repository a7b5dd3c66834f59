#include "svarsoft/stats.hpp"

#include <algorithm>
#include <cmath>

#include "svarsoft/error.hpp"

namespace svarsoft {

double kolmogorov_tail(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

namespace {

// Stephens' small-sample correction to the asymptotic argument.
double ks_p_value(double d, double n_eff) {
    const double root = std::sqrt(n_eff);
    return kolmogorov_tail((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw Error(ErrorCode::InsufficientData, "KS test on an empty sample");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, ks_p_value(d, n)};
}

KsResult ks_test_uniform(std::span<const double> sample, double lo, double hi) {
    return ks_test(sample, [lo, hi](double v) { return std::clamp((v - lo) / (hi - lo), 0.0, 1.0); });
}

KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::InsufficientData, "KS test on an empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return {d, ks_p_value(d, n * m / (n + m))};
}

double quantile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw Error(ErrorCode::InsufficientData, "quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw Error(ErrorCode::ConfigError, "quantile level outside [0, 1]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> values, double prob) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, prob);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

Histogram histogram(std::span<const double> values, double lo, double hi, int bins) {
    if (bins < 1 || !(hi > lo)) throw Error(ErrorCode::ConfigError, "histogram needs bins >= 1 and hi > lo");
    Histogram h{lo, hi, std::vector<long>(static_cast<std::size_t>(bins), 0)};
    const double width = h.bin_width();
    for (double v : values) {
        if (v < lo || v > hi) continue;
        const auto k = std::min(static_cast<int>((v - lo) / width), bins - 1);
        ++h.counts[static_cast<std::size_t>(k)];
    }
    return h;
}

}  // namespace svarsoft
