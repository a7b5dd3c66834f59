#include "svarsoft/posterior.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <boost/random/chi_squared_distribution.hpp>

#include "svarsoft/error.hpp"
#include "svarsoft/linalg.hpp"

namespace svarsoft {

SquareMatrix NiwPosterior::sigma_mean() const {
    if (!(dof > n + 1.0))
        throw Error(ErrorCode::InsufficientData, "inverse-Wishart mean needs dof > n + 1");
    return scale / (dof - n - 1.0);
}

ReducedFormParams NiwPosterior::posterior_mean() const {
    ReducedFormParams phi;
    phi.n = n;
    phi.p = p;
    phi.has_constant = has_constant;
    phi.b = b_hat;
    phi.sigma_tr = cholesky_lower(sigma_mean());
    return phi;
}

NiwPosterior fit_niw(const OlsSuffStats& stats) {
    NiwPosterior post;
    post.n = stats.n;
    post.p = stats.p;
    post.has_constant = stats.has_constant;
    post.t_eff = stats.t_eff;
    post.b_hat = stats.b_hat;
    post.scale = stats.scatter;
    const auto k = static_cast<int>(stats.xtx.rows());
    post.dof = static_cast<double>(stats.t_eff - k);
    if (!(post.dof > stats.n - 1.0))
        throw Error(ErrorCode::InsufficientData,
                    "posterior degrees of freedom " + std::to_string(post.dof) + " must exceed n - 1");
    if (k > 0) {
        const Eigen::MatrixXd inv = stats.xtx.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
        post.xtx_inv_chol = cholesky_lower(0.5 * (inv + inv.transpose()));
    } else {
        post.xtx_inv_chol.resize(0, 0);
    }
    cholesky_lower(post.scale);  // positive-definiteness check
    return post;
}

ReducedFormParams draw_phi(const NiwPosterior& post, RngStream& rng) {
    const int n = post.n;
    // W = L A A' L' ~ Wishart(S^-1, dof) with L = chol(S^-1); Sigma = W^-1.
    const SquareMatrix s_inv = post.scale.llt().solve(SquareMatrix::Identity(n, n));
    const SquareMatrix l = cholesky_lower(0.5 * (s_inv + s_inv.transpose()));
    SquareMatrix a = SquareMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        boost::random::chi_squared_distribution<double> chi2(post.dof - i);
        a(i, i) = std::sqrt(chi2(rng));
        for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
    }
    const SquareMatrix g = l * a;
    const SquareMatrix g_inv = g.triangularView<Eigen::Lower>().solve(SquareMatrix::Identity(n, n));
    SquareMatrix sigma = g_inv.transpose() * g_inv;
    sigma = 0.5 * (sigma + sigma.transpose());

    ReducedFormParams phi;
    phi.n = n;
    phi.p = post.p;
    phi.has_constant = post.has_constant;
    phi.sigma_tr = cholesky_lower(sigma);
    const auto k = post.b_hat.cols();
    if (k > 0) {
        Eigen::MatrixXd z(k, n);
        for (Eigen::Index r = 0; r < k; ++r)
            for (int c = 0; c < n; ++c) z(r, c) = rng.normal();
        // B' = B_hat' + chol((X'X)^-1) Z chol(Sigma)'
        phi.b = post.b_hat + (post.xtx_inv_chol * z * phi.sigma_tr.transpose()).transpose();
    } else {
        phi.b.resize(n, 0);
    }
    return phi;
}

std::vector<const SquareMatrix*> JointDrawRecord::bound_draws() const {
    std::vector<const SquareMatrix*> out;
    if (chain.empty()) {
        for (const auto& q : draws) out.push_back(&q);
        return out;
    }
    for (std::size_t k = 0; k < chain.size(); ++k)
        if (chain_weights[k] > 0.0) out.push_back(&chain[k]);
    return out;
}

int JointSample::kept() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(),
                                          [](const JointDrawRecord& r) { return !r.empty; }));
}

double JointSample::mean_ess() const {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : records) {
        if (r.empty) continue;
        sum += r.ess_percent;
        ++count;
    }
    return count > 0 ? sum / count : 0.0;
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SVARSOFT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

JointDrawRecord run_attempt(const NiwPosterior& post, const RestrictionSet& set,
                            const JointSamplerConfig& cfg, std::uint64_t seed, long attempt,
                            const VarData* data) {
    RngStream rng(seed, static_cast<std::uint64_t>(attempt));
    JointDrawRecord rec;
    rec.attempt = attempt;
    rec.phi = draw_phi(post, rng);

    InnovationSeries innovations;
    MarginContext context;
    if (set.needs_innovations()) {
        if (data == nullptr)
            throw Error(ErrorCode::MissingContext, "narrative restrictions need the estimation data");
        innovations = compute_innovations(rec.phi, *data);
        context.innovations = &innovations;
    }
    auto compiled = std::make_shared<const CompiledRestrictions>(set, rec.phi, context);

    if (cfg.sampler == SamplerKind::AcceptReject) {
        auto batch = accept_reject_sample(*compiled, cfg.accept_reject_draws, cfg.accept_reject, rng);
        rec.q_work = batch.attempts;
        rec.empty = batch.empty_verdict;
        rec.draws = std::move(batch.draws);
        return rec;
    }

    WeightedDrawBatch batch;
    batch.draws.reserve(static_cast<std::size_t>(cfg.slice.draws));
    rec.q_work = run_slice_chain(compiled, cfg.slice, rng,
                                 [&](const std::vector<double>&, const SquareMatrix& q,
                                     const Eigen::VectorXd&, double weight) {
                                     WeightedDraw d;
                                     d.q = q;
                                     d.weight = weight;
                                     d.feasible = weight > 0.0;
                                     batch.draws.push_back(std::move(d));
                                 });
    batch.finalise();
    if (batch.empty_verdict()) {
        rec.empty = true;
        rec.ess_percent = 0.0;
        return rec;
    }
    rec.ess_percent = batch.ess_percent;
    rec.draws = resample(batch, cfg.slice.draws, rng);
    if (cfg.keep_chain) {
        rec.chain.reserve(batch.draws.size());
        rec.chain_weights.reserve(batch.draws.size());
        for (auto& d : batch.draws) {
            rec.chain_weights.push_back(d.weight);
            rec.chain.push_back(std::move(d.q));
        }
    }
    return rec;
}

}  // namespace

JointSample run_joint_sampler(const NiwPosterior& post, const RestrictionSet& set_in,
                              const JointSamplerConfig& cfg, std::uint64_t seed, const VarData* data) {
    if (cfg.n_phi_kept < 1) throw Error(ErrorCode::ConfigError, "n_phi_kept must be at least 1");
    if (cfg.sampler == SamplerKind::SoftSign) cfg.slice.validate();
    cfg.accept_reject.validate();
    const RestrictionSet set = resolve_normalisation(set_in, cfg.sampler);
    const int workers = worker_count(cfg.threads);
    const long batch_size = workers == 1 ? 1 : 4L * workers;

    JointSample out;
    int kept = 0;
    long next = 0;
    std::vector<std::optional<JointDrawRecord>> slots;
    while (kept < cfg.n_phi_kept) {
        slots.assign(static_cast<std::size_t>(batch_size), std::nullopt);
        if (workers == 1) {
            slots[0] = run_attempt(post, set, cfg, seed, next, data);
        } else {
            std::atomic<long> cursor{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (long i = cursor++; i < batch_size; i = cursor++) {
                        try {
                            slots[static_cast<std::size_t>(i)] = run_attempt(post, set, cfg, seed, next + i, data);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                });
            }
            for (auto& t : pool) t.join();
            if (failure) std::rethrow_exception(failure);
        }
        for (auto& slot : slots) {
            if (!slot) break;
            if (!slot->empty) ++kept;
            out.records.push_back(std::move(*slot));
            const auto attempts = static_cast<long>(out.records.size());
            if (attempts >= cfg.floor_attempts &&
                static_cast<double>(kept) / static_cast<double>(attempts) < cfg.floor_rate)
                throw Error(ErrorCode::PlausibilityFloor,
                            "only " + std::to_string(kept) + " of " + std::to_string(attempts) +
                                " phi draws have a nonempty identified set; the restrictions look "
                                "incompatible with the data");
            if (kept == cfg.n_phi_kept) break;
        }
        next += batch_size;
    }
    return out;
}

double posterior_plausibility(const std::vector<JointDrawRecord>& records) {
    if (records.empty()) throw Error(ErrorCode::InsufficientData, "plausibility needs at least one phi attempt");
    const auto nonempty = std::count_if(records.begin(), records.end(),
                                        [](const JointDrawRecord& r) { return !r.empty; });
    return 100.0 * static_cast<double>(nonempty) / static_cast<double>(records.size());
}

ConditionalCheckReport conditional_posterior_check(const ReducedFormParams& phi, const RestrictionSet& set,
                                                   int draws, const SliceConfig& slice,
                                                   const AcceptRejectConfig& ar, std::uint64_t seed,
                                                   const MarginContext& context) {
    ConditionalCheckReport report;
    const CompiledRestrictions hard(resolve_normalisation(set, SamplerKind::AcceptReject), phi, context);
    RngStream ar_rng(seed, 0);
    auto accepted = accept_reject_sample(hard, draws, ar, ar_rng);
    if (accepted.empty_verdict)
        throw Error(ErrorCode::EmptyVerdict, "conditional check: accept-reject found no feasible Q");
    report.accept_reject_attempts = accepted.attempts;

    auto soft = std::make_shared<const CompiledRestrictions>(resolve_normalisation(set, SamplerKind::SoftSign),
                                                             phi, context);
    SliceConfig cfg = slice;
    cfg.draws = draws;
    RngStream soft_rng(seed, 1);
    auto batch = soft_sign_sample(soft, cfg, soft_rng);
    if (batch.empty_verdict())
        throw Error(ErrorCode::EmptyVerdict, "conditional check: soft-sign sampler found no feasible Q");
    report.soft_ess = batch.ess_percent;
    const auto resampled = resample(batch, draws, soft_rng);

    const int n = phi.n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ConditionalCheckEntry e;
            e.variable = i;
            e.shock = j;
            const Eigen::VectorXd c = phi.sigma_tr.row(i).transpose();
            for (const auto& q : accepted.draws) e.accept_reject.push_back(c.dot(q.col(j)));
            for (const auto& q : resampled) e.soft_sign.push_back(c.dot(q.col(j)));
            e.ks = ks_test_two_sample(e.accept_reject, e.soft_sign);
            report.entries.push_back(std::move(e));
        }
    }
    return report;
}

}  // namespace svarsoft
