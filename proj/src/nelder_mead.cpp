#include "svarsoft/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace svarsoft {

NelderMeadResult nelder_mead_minimise(const std::function<double(std::span<const double>)>& objective,
                                      std::vector<double> start, const NelderMeadOptions& options) {
    const std::size_t d = start.size();
    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double v = objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> simplex(d + 1, start);
    std::vector<double> values(d + 1);
    values[0] = eval(start);
    for (std::size_t i = 0; i < d; ++i) {
        auto& v = simplex[i + 1];
        v[i] = v[i] != 0.0 ? (1.0 + options.relative_step) * v[i] : options.zero_step;
        values[i + 1] = eval(v);
    }

    std::vector<std::size_t> order(d + 1);
    std::vector<double> centroid(d), reflected(d), trial(d);
    auto point = [&](double t, const std::vector<double>& worst, std::vector<double>& out) {
        for (std::size_t k = 0; k < d; ++k) out[k] = centroid[k] + t * (worst[k] - centroid[k]);
    };

    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[d > 0 ? d - 1 : 0];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[best][k]));
        if (diameter < options.diameter_tolerance) {
            result.converged = true;
            break;
        }
        if (result.evaluations >= options.max_evaluations || d == 0) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k];
        }
        for (auto& c : centroid) c /= static_cast<double>(d);

        point(-1.0, simplex[worst], reflected);
        const double f_reflected = eval(reflected);
        if (f_reflected < values[best]) {
            point(-2.0, simplex[worst], trial);
            const double f_expanded = eval(trial);
            if (f_expanded < f_reflected) {
                simplex[worst] = trial;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        bool shrink = false;
        if (f_reflected < values[worst]) {
            point(-0.5, simplex[worst], trial);  // outside contraction
            const double f_contracted = eval(trial);
            if (f_contracted <= f_reflected) {
                simplex[worst] = trial;
                values[worst] = f_contracted;
            } else {
                shrink = true;
            }
        } else {
            point(0.5, simplex[worst], trial);  // inside contraction
            const double f_contracted = eval(trial);
            if (f_contracted < values[worst]) {
                simplex[worst] = trial;
                values[worst] = f_contracted;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (std::size_t i = 0; i <= d; ++i) {
                if (i == best) continue;
                for (std::size_t k = 0; k < d; ++k)
                    simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                values[i] = eval(simplex[i]);
            }
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const auto best_index = static_cast<std::size_t>(best_it - values.begin());
    result.x = simplex[best_index];
    result.value = *best_it;
    return result;
}

}  // namespace svarsoft
