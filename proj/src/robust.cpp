#include "svarsoft/robust.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>

#include "svarsoft/error.hpp"
#include "svarsoft/stats.hpp"

namespace svarsoft {

Bounds identified_set_bounds(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyVerdict, "identified-set bounds: no feasible draws");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::ConfigError, "credible level must lie in (0, 1]");
}

}  // namespace

Interval robust_credible_interval(std::span<const Bounds> bounds, double alpha) {
    check_alpha(alpha);
    if (bounds.size() < 2) throw Error(ErrorCode::InsufficientData, "robust credible interval needs >= 2 draws");
    const std::size_t n = bounds.size();
    // Smallest k with k / n >= alpha.
    auto k = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n)));
    if (k > 1 && static_cast<double>(k - 1) / static_cast<double>(n) >= alpha) --k;
    k = std::clamp<std::size_t>(k, 1, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return bounds[a].lower > bounds[b].lower;
    });

    // Sweep a = lower bound from the right; the heap keeps the k smallest uppers among records
    // with lower >= a, so its top is the shortest feasible right endpoint for that a.
    std::priority_queue<double> heap;
    Interval best{0.0, std::numeric_limits<double>::infinity()};
    for (std::size_t idx = 0; idx < n; ++idx) {
        const auto& r = bounds[order[idx]];
        heap.push(r.upper);
        if (heap.size() > k) heap.pop();
        // Records sharing this lower bound must all be in before a is evaluated.
        if (idx + 1 < n && bounds[order[idx + 1]].lower == r.lower) continue;
        if (heap.size() < k) continue;
        const Interval candidate{r.lower, heap.top()};
        if (candidate.width() < best.width() ||
            (candidate.width() == best.width() && candidate.lo < best.lo))
            best = candidate;
    }
    return best;
}

Interval standard_credible_interval(std::vector<double> values, double alpha) {
    check_alpha(alpha);
    std::sort(values.begin(), values.end());
    const double tail = (1.0 - alpha) / 2.0;
    return {quantile_sorted(values, tail), quantile_sorted(values, 1.0 - tail)};
}

Interval set_of_posterior_medians(std::span<const Bounds> bounds) {
    if (bounds.empty()) throw Error(ErrorCode::InsufficientData, "set of posterior medians needs >= 1 draw");
    std::vector<double> lo, hi;
    for (const auto& b : bounds) {
        lo.push_back(b.lower);
        hi.push_back(b.upper);
    }
    return {median(std::move(lo)), median(std::move(hi))};
}

double prior_informativeness(const Interval& standard, const Interval& robust) {
    if (!(robust.width() > 0.0)) return 0.0;
    return std::clamp(1.0 - standard.width() / robust.width(), 0.0, 1.0);
}

namespace {

double draw_numerator(int d, double delta) {
    if (d < 1) throw Error(ErrorCode::ConfigError, "parameter count must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::ConfigError, "delta must lie in (0, 1)");
    const double two_d = 2.0 * d;
    return std::min(two_d * std::log(two_d / delta), std::numbers::e * (two_d + std::log(1.0 / delta)));
}

}  // namespace

long required_draws(int d, double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::ConfigError, "epsilon must lie in (0, 1)");
    return static_cast<long>(std::ceil(draw_numerator(d, delta) / epsilon));
}

double iso_draw_epsilon(int d, long draws, double delta) {
    if (draws < 1) throw Error(ErrorCode::ConfigError, "draw count must be at least 1");
    return draw_numerator(d, delta) / static_cast<double>(draws);
}

long gross_up_draws(long draws, double ess_percent) {
    if (!(ess_percent > 0.0 && ess_percent <= 100.0))
        throw Error(ErrorCode::ConfigError, "ESS percent must lie in (0, 100]");
    return static_cast<long>(std::ceil(static_cast<double>(draws) / (ess_percent / 100.0)));
}

}  // namespace svarsoft
