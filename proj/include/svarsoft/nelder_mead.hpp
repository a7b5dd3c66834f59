#pragma once

#include <functional>
#include <span>
#include <vector>

namespace svarsoft {

struct NelderMeadOptions {
    /// Stop once every vertex is within this distance (max-norm) of the best vertex.
    double diameter_tolerance = 1e-4;
    int max_evaluations = 1000;
    /// Relative perturbation used to build the initial simplex, and the absolute step for zeros.
    double relative_step = 0.05;
    double zero_step = 0.00025;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimisation (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead_minimise(const std::function<double(std::span<const double>)>& objective,
                                      std::vector<double> start,
                                      const NelderMeadOptions& options = {});

}  // namespace svarsoft
