#pragma once

#include <span>
#include <vector>

namespace svarsoft {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(const Interval& other, double slack = 0.0) const {
        return other.lo >= lo - slack && other.hi <= hi + slack;
    }
};

/// Identified-set bounds for one phi draw: min and max of the quantity over its feasible Q draws.
struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Throws Error(EmptyVerdict) when there are no values.
Bounds identified_set_bounds(std::span<const double> values);

/** Shortest [a, b] that contains [lower, upper] for at least a fraction alpha of the records.
 *
 * Candidate endpoints are the pooled lower and upper bounds. Equal-width ties go to the leftmost
 * interval. O(N log N).
 */
Interval robust_credible_interval(std::span<const Bounds> bounds, double alpha);

/// Equal-tailed interval of point draws at level alpha (type-7 quantiles).
Interval standard_credible_interval(std::vector<double> values, double alpha);

/// [median of lowers, median of uppers].
Interval set_of_posterior_medians(std::span<const Bounds> bounds);

/// 1 - width(standard) / width(robust), clamped to [0, 1]; 0 when the robust width is 0.
double prior_informativeness(const Interval& standard, const Interval& robust);

/// ceil(min{2d ln(2d / delta), e (2d + ln(1 / delta))} / epsilon).
long required_draws(int d, double epsilon, double delta);

/// The epsilon that `draws` buys at (d, delta): the iso-draw curve.
double iso_draw_epsilon(int d, long draws, double delta);

/// Draw count inflated for importance-sampling loss: ceil(draws / (ess_percent / 100)).
long gross_up_draws(long draws, double ess_percent);

}  // namespace svarsoft
