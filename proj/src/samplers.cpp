#include "svarsoft/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svarsoft/error.hpp"
#include "svarsoft/linalg.hpp"
#include "svarsoft/nelder_mead.hpp"

namespace svarsoft {

std::string_view to_string(SamplerKind kind) {
    return kind == SamplerKind::AcceptReject ? "accept-reject" : "soft-sign";
}

SamplerKind parse_sampler_kind(std::string_view name) {
    if (name == "accept-reject") return SamplerKind::AcceptReject;
    if (name == "soft-sign") return SamplerKind::SoftSign;
    throw Error(ErrorCode::ConfigError,
                "unknown sampler '" + std::string(name) + "' (expected accept-reject or soft-sign)");
}

RestrictionSet resolve_normalisation(const RestrictionSet& set, SamplerKind kind) {
    if (set.normalisation != SignNormalisation::Auto) return set;
    return set.with_normalisation(kind == SamplerKind::AcceptReject ? SignNormalisation::Mechanical
                                                                     : SignNormalisation::Soft);
}

void AcceptRejectConfig::validate() const {
    if (max_attempts < 1) throw Error(ErrorCode::ConfigError, "max_attempts must be at least 1");
}

AcceptRejectResult accept_reject_draw(const CompiledRestrictions& restrictions,
                                      const AcceptRejectConfig& cfg, RngStream& rng) {
    cfg.validate();
    const int n = restrictions.n();
    SquareMatrix z(n, n);
    SquareMatrix q(n, n);
    Eigen::VectorXd m(restrictions.size());
    QrWorkspace qr(n);
    const bool flip = cfg.mechanical_normalisation || restrictions.mechanical_normalisation();

    AcceptRejectResult result;
    while (result.attempts < cfg.max_attempts) {
        ++result.attempts;
        fill_standard_matrix_normal(z, rng);
        if (!qr.orthonormal_factor(z, q)) continue;
        if (flip) restrictions.normalise(q);
        restrictions.evaluate(q, m);
        if (m.size() == 0 || m.minCoeff() >= 0.0) {
            result.q = q;
            break;
        }
    }
    return result;
}

AcceptRejectResult accept_reject_draw(const ReducedFormParams& phi, const RestrictionSet& set,
                                      const AcceptRejectConfig& cfg, RngStream& rng,
                                      const MarginContext& context) {
    const CompiledRestrictions compiled(resolve_normalisation(set, SamplerKind::AcceptReject), phi,
                                        context);
    return accept_reject_draw(compiled, cfg, rng);
}

AcceptRejectBatch accept_reject_sample(const CompiledRestrictions& restrictions, int count,
                                       const AcceptRejectConfig& cfg, RngStream& rng) {
    cfg.validate();
    AcceptRejectBatch batch;
    batch.draws.reserve(static_cast<std::size_t>(std::max(count, 0)));
    AcceptRejectConfig unbounded = cfg;
    for (int k = 0; k < count; ++k) {
        unbounded.max_attempts = k == 0 ? cfg.max_attempts : std::numeric_limits<long>::max();
        auto r = accept_reject_draw(restrictions, unbounded, rng);
        batch.attempts += r.attempts;
        if (!r.q) {
            batch.empty_verdict = true;
            batch.draws.clear();
            return batch;
        }
        batch.draws.push_back(std::move(*r.q));
    }
    return batch;
}

double SliceConfig::effective_init_delta() const {
    return init_delta.value_or(std::max(0.1, 1000.0 * delta));
}

void SliceConfig::validate() const {
    if (draws < 1) throw Error(ErrorCode::ConfigError, "M must be at least 1");
    if (!(delta > 0.0)) throw Error(ErrorCode::ConfigError, "delta must be positive");
    if (!(width_small > 0.0) || !(width_large > 0.0))
        throw Error(ErrorCode::ConfigError, "slice widths must be positive");
    if (!(width_mix > 0.0 && width_mix <= 1.0))
        throw Error(ErrorCode::ConfigError, "width mix probability must lie in (0, 1]");
    if (effective_init_delta() < delta)
        throw Error(ErrorCode::ConfigError, "initialisation delta must be at least delta");
    if (max_shrink < 1) throw Error(ErrorCode::ConfigError, "max_shrink must be at least 1");
    if (burn_in < 0 || thin < 0) throw Error(ErrorCode::ConfigError, "burn_in and thin must be >= 0");
}

namespace {

std::vector<double> vec_of(const SquareMatrix& z) {
    return std::vector<double>(z.data(), z.data() + z.size());
}

}  // namespace

std::vector<double> initialise_chain(const SoftTarget& target, const SliceConfig& cfg, RngStream& rng) {
    const int n = target.n();
    SoftTarget start_target = target.with_delta(cfg.effective_init_delta());
    const auto start = vec_of(draw_standard_matrix_normal(n, rng));
    NelderMeadOptions options;
    options.max_evaluations = 200 * n * n;
    auto result = nelder_mead_minimise(
        [&](std::span<const double> z) { return -start_target.log_density(z); }, start, options);
    // A start the target cannot evaluate (rank deficient) is useless; fall back to the raw draw.
    if (!std::isfinite(result.value)) return start;
    return result.x;
}

SliceChain::SliceChain(SoftTarget& target, const SliceConfig& cfg, std::vector<double> z0)
    : target_(target),
      cfg_(cfg),
      z_(std::move(z0)),
      proposal_(z_.size()),
      left_(z_.size()),
      right_(z_.size()) {
    log_f_ = target_.log_density(z_);
    if (!std::isfinite(log_f_))
        throw Error(ErrorCode::RankDeficient, "slice chain started at a rank-deficient Z");
    q_ = target_.last_q();
    margins_ = target_.last_margins();
}

void SliceChain::step(RngStream& rng) {
    const double log_y = log_f_ - rng.exponential();
    const double w = rng.uniform() < cfg_.width_mix ? cfg_.width_small : cfg_.width_large;
    const std::size_t d = z_.size();
    for (std::size_t i = 0; i < d; ++i) {
        left_[i] = z_[i] - w * rng.uniform();
        right_[i] = left_[i] + w;
    }
    for (int attempt = 0; attempt < cfg_.max_shrink; ++attempt) {
        for (std::size_t i = 0; i < d; ++i)
            proposal_[i] = left_[i] + rng.uniform() * (right_[i] - left_[i]);
        const double log_f = target_.log_density(proposal_);
        if (log_f > log_y) {
            std::swap(z_, proposal_);
            log_f_ = log_f;
            q_ = target_.last_q();
            margins_ = target_.last_margins();
            return;
        }
        ++shrinks_;
        for (std::size_t i = 0; i < d; ++i) {
            if (proposal_[i] < z_[i])
                left_[i] = proposal_[i];
            else if (proposal_[i] > z_[i])
                right_[i] = proposal_[i];
        }
    }
    throw Error(ErrorCode::ShrinkBudgetExceeded,
                "slice step: no acceptable point after " + std::to_string(cfg_.max_shrink) + " shrinks");
}

std::vector<double> slice_step(const std::vector<double>& z_prev, SoftTarget& target,
                               const SliceConfig& cfg, RngStream& rng) {
    SliceChain chain(target, cfg, z_prev);
    chain.step(rng);
    return chain.z();
}

long run_slice_chain(std::shared_ptr<const CompiledRestrictions> restrictions, const SliceConfig& cfg,
                     RngStream& rng, const DrawSink& sink) {
    cfg.validate();
    SoftTarget target(std::move(restrictions), cfg.delta);
    SliceChain chain(target, cfg, initialise_chain(target, cfg, rng));
    for (int b = 0; b < cfg.burn_in; ++b) chain.step(rng);
    for (int k = 0; k < cfg.draws; ++k) {
        for (int t = 0; t <= cfg.thin; ++t) chain.step(rng);
        sink(chain.z(), chain.q(), chain.margins(), target.importance_weight(chain.margins()));
    }
    return target.evaluations();
}

WeightedDrawBatch soft_sign_sample(std::shared_ptr<const CompiledRestrictions> restrictions,
                                   const SliceConfig& cfg, RngStream& rng) {
    const int n = restrictions->n();
    WeightedDrawBatch batch;
    batch.draws.reserve(static_cast<std::size_t>(cfg.draws));
    run_slice_chain(std::move(restrictions), cfg, rng,
                    [&](const std::vector<double>& z, const SquareMatrix& q, const Eigen::VectorXd& m,
                        double weight) {
                        WeightedDraw d;
                        if (cfg.store_z) d.z = Eigen::Map<const SquareMatrix>(z.data(), n, n);
                        d.q = q;
                        d.margins = m;
                        d.weight = weight;
                        d.feasible = weight > 0.0;
                        batch.draws.push_back(std::move(d));
                    });
    batch.finalise();
    return batch;
}

WeightedDrawBatch soft_sign_sample(const ReducedFormParams& phi, const RestrictionSet& set,
                                   const SliceConfig& cfg, RngStream& rng, const MarginContext& context) {
    auto compiled = std::make_shared<const CompiledRestrictions>(
        resolve_normalisation(set, SamplerKind::SoftSign), phi, context);
    return soft_sign_sample(std::move(compiled), cfg, rng);
}

EfficiencyReport accept_reject_efficiency(long accepted, long attempts, double wall_seconds) {
    EfficiencyReport r;
    r.wall_seconds = wall_seconds;
    r.effective_draws = static_cast<double>(accepted);
    r.effective_draws_per_second = wall_seconds > 0.0 ? r.effective_draws / wall_seconds : 0.0;
    r.acceptance_rate = attempts > 0 ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0;
    return r;
}

EfficiencyReport soft_sign_efficiency(double ess_percent, int draws, double wall_seconds) {
    EfficiencyReport r;
    r.wall_seconds = wall_seconds;
    r.effective_draws = ess_percent * draws / 100.0;
    r.effective_draws_per_second = wall_seconds > 0.0 ? r.effective_draws / wall_seconds : 0.0;
    r.ess_percent = ess_percent;
    return r;
}

}  // namespace svarsoft
