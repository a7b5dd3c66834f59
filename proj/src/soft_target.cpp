#include "svarsoft/soft_target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svarsoft/error.hpp"

namespace svarsoft {

double logistic(double x, double delta) {
    const double t = x / delta;
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double log_logistic(double x, double delta) {
    const double t = x / delta;
    if (t >= 0.0) return -std::log1p(std::exp(-t));
    if (t < -40.0) return t - std::exp(t);  // log1p(e^t) = e^t to double precision here
    return t - std::log1p(std::exp(t));
}

std::shared_ptr<const Regulariser> default_regulariser() {
    static const auto instance = std::make_shared<const LogisticRegulariser>();
    return instance;
}

SoftTarget::SoftTarget(std::shared_ptr<const CompiledRestrictions> restrictions, double delta,
                       std::shared_ptr<const Regulariser> regulariser)
    : restrictions_(std::move(restrictions)),
      regulariser_(std::move(regulariser)),
      delta_(delta),
      qr_(restrictions_->n()),
      z_(restrictions_->n(), restrictions_->n()),
      q_(restrictions_->n(), restrictions_->n()),
      margins_(restrictions_->size()) {
    if (!(delta > 0.0)) throw Error(ErrorCode::ConfigError, "regularisation delta must be positive");
}

SoftTarget SoftTarget::with_delta(double delta) const {
    return SoftTarget(restrictions_, delta, regulariser_);
}

double SoftTarget::log_density(const SquareMatrix& z) {
    ++evaluations_;
    if (!qr_.orthonormal_factor(z, q_)) return -std::numeric_limits<double>::infinity();
    if (restrictions_->mechanical_normalisation()) restrictions_->normalise(q_);
    restrictions_->evaluate(q_, margins_);
    double log_f = -0.5 * z.squaredNorm();
    for (Eigen::Index l = 0; l < margins_.size(); ++l)
        log_f += regulariser_->log_value(margins_[l], delta_);
    return log_f;
}

double SoftTarget::log_density(std::span<const double> vec_z) {
    const auto n = static_cast<Eigen::Index>(restrictions_->n());
    z_ = Eigen::Map<const Eigen::MatrixXd>(vec_z.data(), n, n);
    return log_density(z_);
}

double SoftTarget::importance_weight(const Eigen::VectorXd& margins) const {
    // A product of factors in [1, 2] rather than exp of a sum: exact at zero margins, never above 2^s.
    double w = 1.0;
    for (Eigen::Index l = 0; l < margins.size(); ++l) {
        if (!(margins[l] >= 0.0)) return 0.0;
        w *= regulariser_->inverse_value(margins[l], delta_);
    }
    return w;
}

double log_f_delta(const SquareMatrix& z, SoftTarget& target) {
    const double v = target.log_density(z);
    if (v == -std::numeric_limits<double>::infinity())
        throw Error(ErrorCode::RankDeficient, "log_f_delta: Z is numerically rank deficient");
    return v;
}

double importance_weight(std::span<const double> margins, double delta) {
    double w = 1.0;
    for (double m : margins) {
        if (!(m >= 0.0)) return 0.0;
        w *= 1.0 + std::exp(-m / delta);
    }
    return w;
}

double importance_weight(const Eigen::VectorXd& margins, double delta) {
    return importance_weight(std::span<const double>(margins.data(), margins.size()), delta);
}

double effective_sample_size(std::span<const double> weights) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double w : weights) {
        sum += w;
        sum_sq += w * w;
    }
    if (weights.empty() || !(sum > 0.0))
        throw Error(ErrorCode::AllInfeasible, "effective sample size: every weight is zero");
    return 100.0 / static_cast<double>(weights.size()) * sum * sum / sum_sq;
}

std::vector<double> WeightedDrawBatch::weights() const {
    std::vector<double> w;
    w.reserve(draws.size());
    for (const auto& d : draws) w.push_back(d.weight);
    return w;
}

void WeightedDrawBatch::finalise() {
    feasible_count = static_cast<int>(
        std::count_if(draws.begin(), draws.end(), [](const WeightedDraw& d) { return d.feasible; }));
    ess_percent = feasible_count > 0 ? effective_sample_size(weights()) : 0.0;
}

std::vector<int> resample_indices(std::span<const double> weights, int count, RngStream& rng) {
    std::vector<double> cumulative(weights.size());
    double total = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        total += weights[i];
        cumulative[i] = total;
        if (weights[i] > 0.0) last_positive = static_cast<int>(i);
    }
    if (last_positive < 0)
        throw Error(ErrorCode::AllInfeasible, "resample: every importance weight is zero");
    std::vector<int> out(static_cast<std::size_t>(count));
    for (auto& idx : out) {
        const double u = rng.uniform() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        idx = std::min(static_cast<int>(it - cumulative.begin()), last_positive);
    }
    return out;
}

std::vector<SquareMatrix> resample(const WeightedDrawBatch& batch, int count, RngStream& rng) {
    const auto w = batch.weights();
    std::vector<SquareMatrix> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int idx : resample_indices(w, count, rng)) out.push_back(batch.draws[static_cast<std::size_t>(idx)].q);
    return out;
}

}  // namespace svarsoft
