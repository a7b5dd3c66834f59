#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "svarsoft/linalg.hpp"
#include "svarsoft/restrictions.hpp"
#include "svarsoft/rng.hpp"

namespace svarsoft {

/// Logistic regulariser 1 / (1 + exp(-x / delta)), evaluated without overflow for any x.
double logistic(double x, double delta);

/// log of the logistic regulariser, -log1p(exp(-x / delta)) in a form that is stable for large |x|.
double log_logistic(double x, double delta);

/** Smooth replacement for the indicator 1(x >= 0).
 *
 * Implementations must map into (0, 1), tend to 1 as x -> inf and to 0 as x -> -inf, and converge to
 * the indicator as delta -> 0.
 */
class Regulariser {
public:
    virtual ~Regulariser() = default;
    virtual double log_value(double x, double delta) const = 0;
    /// 1 / Lambda(x), used for importance weights on the feasible side.
    virtual double inverse_value(double x, double delta) const { return std::exp(-log_value(x, delta)); }
};

class LogisticRegulariser final : public Regulariser {
public:
    double log_value(double x, double delta) const override { return log_logistic(x, delta); }
    double inverse_value(double x, double delta) const override { return 1.0 + std::exp(-x / delta); }
};

std::shared_ptr<const Regulariser> default_regulariser();

/** The smoothed target f_delta(Z) for a fixed phi.
 *
 * log_density returns -|Z|_F^2 / 2 + sum_l log Lambda(m_l(phi, Q(Z)), delta), i.e. the log target up
 * to its normalising constant, or -inf when Z is numerically singular. The object keeps scratch
 * buffers, so one instance belongs to one chain.
 */
class SoftTarget {
public:
    SoftTarget(std::shared_ptr<const CompiledRestrictions> restrictions, double delta,
               std::shared_ptr<const Regulariser> regulariser = default_regulariser());

    double delta() const { return delta_; }
    int n() const { return restrictions_->n(); }
    int restriction_count() const { return restrictions_->size(); }
    const CompiledRestrictions& restrictions() const { return *restrictions_; }
    SoftTarget with_delta(double delta) const;

    double log_density(const SquareMatrix& z);
    /// log_density on a vec(Z) (column-major) coordinate vector.
    double log_density(std::span<const double> vec_z);

    /// Q and margins from the most recent finite log_density call.
    const SquareMatrix& last_q() const { return q_; }
    const Eigen::VectorXd& last_margins() const { return margins_; }

    /// Unnormalised importance weight of a draw with these margins under this regulariser.
    double importance_weight(const Eigen::VectorXd& margins) const;

    /// Counts log_density evaluations, for effort accounting.
    long evaluations() const { return evaluations_; }

private:
    std::shared_ptr<const CompiledRestrictions> restrictions_;
    std::shared_ptr<const Regulariser> regulariser_;
    double delta_;
    QrWorkspace qr_;
    SquareMatrix z_;
    SquareMatrix q_;
    Eigen::VectorXd margins_;
    long evaluations_ = 0;
};

/// Free-function form of SoftTarget::log_density; throws Error(RankDeficient) instead of -inf.
double log_f_delta(const SquareMatrix& z, SoftTarget& target);

/// 0 if any margin is negative, otherwise prod_l 1 / Lambda(m_l, delta) (logistic), which is <= 2^s.
double importance_weight(std::span<const double> margins, double delta);
double importance_weight(const Eigen::VectorXd& margins, double delta);

/// (100 / K) (sum w)^2 / sum w^2. Throws Error(AllInfeasible) if every weight is zero.
double effective_sample_size(std::span<const double> weights);

struct WeightedDraw {
    SquareMatrix z;
    SquareMatrix q;
    Eigen::VectorXd margins;
    double weight = 0.0;
    bool feasible = false;
};

struct WeightedDrawBatch {
    std::vector<WeightedDraw> draws;
    int feasible_count = 0;
    double ess_percent = 0.0;  ///< 0 when no draw is feasible

    std::vector<double> weights() const;
    bool empty_verdict() const { return feasible_count == 0; }
    /// Recomputes feasible_count and ess_percent from the draws.
    void finalise();
};

/// K multinomial draws of indices with probability proportional to weights.
std::vector<int> resample_indices(std::span<const double> weights, int count, RngStream& rng);

/// K multinomial draws of Q. Throws Error(AllInfeasible) when nothing is feasible.
std::vector<SquareMatrix> resample(const WeightedDrawBatch& batch, int count, RngStream& rng);

}  // namespace svarsoft
