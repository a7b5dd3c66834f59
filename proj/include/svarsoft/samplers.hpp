#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "svarsoft/restrictions.hpp"
#include "svarsoft/rng.hpp"
#include "svarsoft/soft_target.hpp"

namespace svarsoft {

enum class SamplerKind { AcceptReject, SoftSign };

std::string_view to_string(SamplerKind kind);
SamplerKind parse_sampler_kind(std::string_view name);

/// Resolves Auto normalisation: mechanical for accept-reject, soft margins for soft-sign.
RestrictionSet resolve_normalisation(const RestrictionSet& set, SamplerKind kind);

struct AcceptRejectConfig {
    /// Attempts allowed before the identified set is declared empty.
    long max_attempts = 1000;
    /// Flip column signs so diag(A0) >= 0 before the feasibility test, whatever the set says.
    bool mechanical_normalisation = false;

    void validate() const;
};

struct AcceptRejectResult {
    std::optional<SquareMatrix> q;  ///< empty means the budget ran out (EmptyVerdict)
    long attempts = 0;
};

/// Draws Haar Q until every margin is >= 0 or the attempt budget is spent.
AcceptRejectResult accept_reject_draw(const CompiledRestrictions& restrictions,
                                      const AcceptRejectConfig& cfg, RngStream& rng);
AcceptRejectResult accept_reject_draw(const ReducedFormParams& phi, const RestrictionSet& set,
                                      const AcceptRejectConfig& cfg, RngStream& rng,
                                      const MarginContext& context = {});

struct AcceptRejectBatch {
    std::vector<SquareMatrix> draws;
    long attempts = 0;
    bool empty_verdict = false;
};

/** `count` accepted draws for one phi.
 *
 * Only the first draw is subject to the emptiness budget. Once a feasible Q has been seen the set
 * has positive Haar measure, so later draws retry without a cap.
 */
AcceptRejectBatch accept_reject_sample(const CompiledRestrictions& restrictions, int count,
                                       const AcceptRejectConfig& cfg, RngStream& rng);

struct SliceConfig {
    int draws = 1000;  ///< M
    double delta = 1e-5;
    double width_small = 2.0;
    double width_large = 6.0;
    double width_mix = 0.95;  ///< probability of the small width
    std::optional<double> init_delta;  ///< defaults to max(0.1, 1000 delta)
    int max_shrink = 1000;
    int burn_in = 0;
    int thin = 0;  ///< extra steps discarded between kept draws
    bool store_z = false;

    double effective_init_delta() const;
    void validate() const;
};

/// Minimises -log f at the initialisation delta from a standard matrix-normal start. Returns vec(Z0).
std::vector<double> initialise_chain(const SoftTarget& target, const SliceConfig& cfg, RngStream& rng);

/** Hyperrectangle slice sampler on vec(Z), holding preallocated buffers for one chain. */
class SliceChain {
public:
    SliceChain(SoftTarget& target, const SliceConfig& cfg, std::vector<double> z0);

    /// One slice update. Throws Error(ShrinkBudgetExceeded) when the box never yields a point.
    void step(RngStream& rng);

    const std::vector<double>& z() const { return z_; }
    double log_density() const { return log_f_; }
    /// Q and margins at the current state.
    const SquareMatrix& q() const { return q_; }
    const Eigen::VectorXd& margins() const { return margins_; }
    long shrink_iterations() const { return shrinks_; }

private:
    SoftTarget& target_;
    SliceConfig cfg_;
    std::vector<double> z_;
    std::vector<double> proposal_;
    std::vector<double> left_;
    std::vector<double> right_;
    SquareMatrix q_;
    Eigen::VectorXd margins_;
    double log_f_;
    long shrinks_ = 0;
};

/// Single slice step from z_prev (allocating convenience wrapper around SliceChain).
std::vector<double> slice_step(const std::vector<double>& z_prev, SoftTarget& target,
                               const SliceConfig& cfg, RngStream& rng);

/// Per-draw callback: Q, margins and unnormalised weight at each kept state.
using DrawSink = std::function<void(const std::vector<double>& z, const SquareMatrix& q,
                                    const Eigen::VectorXd& margins, double weight)>;

/// Initialisation plus burn-in, then cfg.draws kept states passed to `sink`. Returns the chain's
/// log-density evaluation count.
long run_slice_chain(std::shared_ptr<const CompiledRestrictions> restrictions, const SliceConfig& cfg,
                     RngStream& rng, const DrawSink& sink);

/// Soft-sign sampling with importance weights; the batch's empty_verdict() reports no feasible draw.
WeightedDrawBatch soft_sign_sample(std::shared_ptr<const CompiledRestrictions> restrictions,
                                   const SliceConfig& cfg, RngStream& rng);
WeightedDrawBatch soft_sign_sample(const ReducedFormParams& phi, const RestrictionSet& set,
                                   const SliceConfig& cfg, RngStream& rng,
                                   const MarginContext& context = {});

struct EfficiencyReport {
    double wall_seconds = 0.0;
    double effective_draws = 0.0;
    double effective_draws_per_second = 0.0;
    std::optional<double> acceptance_rate;
    std::optional<double> ess_percent;
};

EfficiencyReport accept_reject_efficiency(long accepted, long attempts, double wall_seconds);
EfficiencyReport soft_sign_efficiency(double ess_percent, int draws, double wall_seconds);

}  // namespace svarsoft
