#pragma once

#include <optional>
#include <vector>

#include "svarsoft/restrictions.hpp"
#include "svarsoft/rng.hpp"
#include "svarsoft/samplers.hpp"
#include "svarsoft/stats.hpp"
#include "svarsoft/svar.hpp"

namespace svarsoft {

/** Posterior of (B, Sigma) under the diffuse prior p(B, Sigma) proportional to |Sigma|^{-(n+1)/2}.
 *
 * Sigma | data ~ IW(scale, dof) with dof = T - k, and vec(B') | Sigma ~ N(vec(B_hat'), Sigma x (X'X)^-1).
 */
struct NiwPosterior {
    int n = 0;
    int p = 0;
    bool has_constant = false;
    int t_eff = 0;
    Eigen::MatrixXd b_hat;        ///< n x k
    Eigen::MatrixXd xtx_inv_chol; ///< lower Cholesky factor of (X'X)^-1, k x k
    SquareMatrix scale;           ///< residual scatter S
    double dof = 0.0;

    /// E[Sigma] = S / (dof - n - 1); needs dof > n + 1.
    SquareMatrix sigma_mean() const;
    /// (B_hat, chol(E[Sigma])): the point used for conditional checks.
    ReducedFormParams posterior_mean() const;
};

/// Throws InsufficientData when dof <= n - 1.
NiwPosterior fit_niw(const OlsSuffStats& stats);

/// Sigma by the Bartlett decomposition, then B | Sigma.
ReducedFormParams draw_phi(const NiwPosterior& post, RngStream& rng);

struct JointSamplerConfig {
    SamplerKind sampler = SamplerKind::SoftSign;
    int n_phi_kept = 100;
    SliceConfig slice;                ///< slice.draws is M (= K) for the soft sampler
    AcceptRejectConfig accept_reject; ///< max_attempts is the emptiness budget
    int accept_reject_draws = 1000;   ///< accepted Q per kept phi
    long floor_attempts = 100000;
    double floor_rate = 1e-4;
    int threads = 0;                  ///< 0: SVARSOFT_THREADS, else hardware concurrency
    bool keep_chain = true;           ///< keep every soft chain state (needed for bounds and the draws file)
};

/// One phi attempt. Empty attempts carry no Q draws but are kept for plausibility.
struct JointDrawRecord {
    long attempt = 0;
    ReducedFormParams phi;
    bool empty = false;
    long q_work = 0;     ///< Q attempts (accept-reject) or target evaluations (soft-sign)
    double ess_percent = 100.0;
    std::vector<SquareMatrix> draws;        ///< resampled (soft) or accepted (accept-reject) Q
    std::vector<SquareMatrix> chain;        ///< soft only: every kept chain state before resampling
    std::vector<double> chain_weights;      ///< importance weight of each chain state (0 = infeasible)

    /// Feasible draws for identified-set bounds: the feasible chain states when kept, else `draws`.
    std::vector<const SquareMatrix*> bound_draws() const;
};

struct JointSample {
    std::vector<JointDrawRecord> records;  ///< every attempt up to the last kept phi, in order
    int kept() const;
    double mean_ess() const;
};

/// Number of workers: SVARSOFT_THREADS when set and positive, else hardware concurrency.
int worker_count(int requested = 0);

/** Draws phi, samples Q, discards empty identified sets and stops after n_phi_kept successes.
 *
 * Attempt a uses RngStream(seed, a) for both its phi and its Q draws, and results are consumed in
 * attempt order, so output does not depend on the number of workers. `data` is required when
 * the restrictions are narrative (innovations are recomputed per phi). Throws
 * Error(PlausibilityFloor) once floor_attempts attempts have a success rate below floor_rate.
 */
JointSample run_joint_sampler(const NiwPosterior& post, const RestrictionSet& set,
                              const JointSamplerConfig& cfg, std::uint64_t seed,
                              const VarData* data = nullptr);

/// 100 x nonempty / attempts. Throws InsufficientData for zero attempts.
double posterior_plausibility(const std::vector<JointDrawRecord>& records);

struct ConditionalCheckEntry {
    int variable = 0;
    int shock = 0;
    std::vector<double> accept_reject;
    std::vector<double> soft_sign;
    KsResult ks;
};

struct ConditionalCheckReport {
    std::vector<ConditionalCheckEntry> entries;  ///< impact responses, variable-major
    long accept_reject_attempts = 0;
    double soft_ess = 0.0;
};

/// Both samplers at a fixed phi with `draws` Q each; compares every impact response by two-sample
/// KS. Throws Error(EmptyVerdict) if either sampler finds nothing.
ConditionalCheckReport conditional_posterior_check(const ReducedFormParams& phi, const RestrictionSet& set,
                                                   int draws, const SliceConfig& slice,
                                                   const AcceptRejectConfig& ar, std::uint64_t seed,
                                                   const MarginContext& context = {});

}  // namespace svarsoft
