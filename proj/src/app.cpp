#include "svarsoft/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <memory>

#include <json.hpp>

#include "svarsoft/posterior.hpp"
#include "svarsoft/robust.hpp"
#include "svarsoft/stats.hpp"

namespace svarsoft {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Text output that always starts with a schema line.
class Table {
public:
    Table(const std::filesystem::path& path, const std::string& schema) : path_(path) {
        f_ = std::fopen(path.c_str(), "w");
        if (!f_) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        std::fprintf(f_, "# svarsoft %s v1\n", schema.c_str());
    }
    ~Table() {
        if (f_) std::fclose(f_);
    }
    Table(const Table&) = delete;
    Table& operator=(const Table&) = delete;

    std::FILE* get() { return f_; }
    void line(const std::string& s) { std::fprintf(f_, "%s\n", s.c_str()); }

private:
    std::filesystem::path path_;
    std::FILE* f_;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(const std::filesystem::path& path, const Json& doc) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    const std::string text = doc.dump(2);
    std::fprintf(f, "%s\n", text.c_str());
    std::fclose(f);
}

std::string percent_label(double alpha) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%g", alpha * 100.0);
    return buf;
}

SliceConfig slice_config(const RunConfig& cfg, int draws) {
    SliceConfig s;
    s.draws = draws;
    s.delta = cfg.delta;
    s.init_delta = cfg.init_delta;
    s.thin = cfg.thin;
    s.burn_in = cfg.burn_in;
    return s;
}

Json summary_header(const RunConfig& cfg) {
    Json j;
    j["schema"] = "svarsoft.run_summary/1";
    j["mode"] = std::string(to_string(cfg.mode));
    j["sampler"] = std::string(to_string(cfg.sampler));
    j["seed"] = cfg.seed;
    j["delta"] = cfg.delta;
    j["init_delta"] = slice_config(cfg, 1).effective_init_delta();
    return j;
}

struct Prepared {
    Dataset data;
    VarData var;
    OlsEstimate estimate;
    NiwPosterior posterior;
    RestrictionSet set;
};

Prepared prepare(const RunConfig& cfg) {
    Prepared p;
    p.data = load_dataset(cfg.dataset, cfg.transforms);
    p.estimate = estimate_reduced_form(p.data.values, cfg.lags, cfg.constant);
    p.var = VarData::build(p.data.values, cfg.lags, cfg.constant);
    RestrictionParseOptions options;
    options.dataset_variables = p.data.variables;
    options.innovation_dates = std::vector<std::string>(p.data.dates.begin() + cfg.lags, p.data.dates.end());
    p.set = parse_restrictions_file(cfg.restrictions, options);
    p.posterior = fit_niw(p.estimate.stats);
    return p;
}

/// eta_ijh over every kept record's sampled draws, for one (i, j, h).
std::vector<double> pooled_responses(const JointSample& sample, const std::vector<IrfCoefficients>& irfs,
                                     int i, int j, int h) {
    std::vector<double> out;
    std::size_t r = 0;
    for (const auto& rec : sample.records) {
        if (rec.empty) continue;
        const Eigen::VectorXd c = irfs[r++].at(h).row(i).transpose();
        for (const auto& q : rec.draws) out.push_back(c.dot(q.col(j)));
    }
    return out;
}

std::vector<IrfCoefficients> kept_irfs(const JointSample& sample, int horizons) {
    std::vector<IrfCoefficients> out;
    for (const auto& rec : sample.records)
        if (!rec.empty) out.push_back(compute_irf_coefficients(rec.phi, horizons));
    return out;
}

void write_draws(const std::filesystem::path& dir, const JointSample& sample, int n) {
    Table t(dir / "draws.csv", "draws");
    std::string header = "phi_index,draw_index,weight,feasible";
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) header += ",q_" + std::to_string(r + 1) + "_" + std::to_string(c + 1);
    t.line(header);
    for (const auto& rec : sample.records) {
        if (rec.empty) continue;
        const bool chain = !rec.chain.empty();
        const auto& qs = chain ? rec.chain : rec.draws;
        for (std::size_t k = 0; k < qs.size(); ++k) {
            const double w = chain ? rec.chain_weights[k] : 1.0;
            std::fprintf(t.get(), "%ld,%zu,%s,%d", rec.attempt, k, num(w).c_str(), w > 0.0 ? 1 : 0);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) std::fprintf(t.get(), ",%s", num(qs[k](r, c)).c_str());
            std::fputc('\n', t.get());
        }
    }
}

void write_phi_records(const std::filesystem::path& dir, const JointSample& sample) {
    Table t(dir / "phi_records.csv", "phi_records");
    t.line("phi_index,nonempty,q_work,ess_percent");
    for (const auto& rec : sample.records)
        std::fprintf(t.get(), "%ld,%d,%ld,%s\n", rec.attempt, rec.empty ? 0 : 1, rec.q_work,
                     num(rec.ess_percent).c_str());
}

void write_irf_summary(const std::filesystem::path& dir, const RunConfig& cfg, const RestrictionSet& set,
                       const JointSample& sample, const std::vector<IrfCoefficients>& irfs) {
    Table t(dir / "irf_summary.csv", "irf_summary");
    std::string header = "variable,shock,horizon,median";
    for (double a : cfg.alphas) header += ",lo_" + percent_label(a) + ",hi_" + percent_label(a);
    t.line(header);
    const int n = set.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int h = 0; h <= cfg.horizons; ++h) {
                auto v = pooled_responses(sample, irfs, i, j, h);
                std::sort(v.begin(), v.end());
                std::fprintf(t.get(), "%s,%s,%d,%s", set.variables[static_cast<std::size_t>(i)].c_str(),
                             set.shocks[static_cast<std::size_t>(j)].c_str(), h,
                             num(quantile_sorted(v, 0.5)).c_str());
                for (double a : cfg.alphas)
                    std::fprintf(t.get(), ",%s,%s", num(quantile_sorted(v, (1.0 - a) / 2.0)).c_str(),
                                 num(quantile_sorted(v, (1.0 + a) / 2.0)).c_str());
                std::fputc('\n', t.get());
            }
}

struct RobustTotals {
    double mean_informativeness = 0.0;
    int violations = 0;  ///< cells where the standard interval is not inside the robust one
};

RobustTotals write_robust_summary(const std::filesystem::path& dir, const RunConfig& cfg,
                                  const RestrictionSet& set, const JointSample& sample,
                                  const std::vector<IrfCoefficients>& irfs) {
    Table t(dir / "robust_summary.csv", "robust_summary");
    t.line("variable,shock,horizon,is_lower,is_upper,med_set_lo,med_set_hi,rci_lo,rci_hi,std_lo,std_hi,"
           "prior_informativeness");
    const int n = set.n();
    RobustTotals totals;
    int cells = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int h = 0; h <= cfg.horizons; ++h) {
                std::vector<Bounds> bounds;
                std::size_t r = 0;
                double mean_lo = 0.0, mean_hi = 0.0;
                for (const auto& rec : sample.records) {
                    if (rec.empty) continue;
                    const Eigen::VectorXd c = irfs[r++].at(h).row(i).transpose();
                    std::vector<double> values;
                    for (const SquareMatrix* q : rec.bound_draws()) values.push_back(c.dot(q->col(j)));
                    bounds.push_back(identified_set_bounds(values));
                    mean_lo += bounds.back().lower;
                    mean_hi += bounds.back().upper;
                }
                mean_lo /= static_cast<double>(bounds.size());
                mean_hi /= static_cast<double>(bounds.size());
                const Interval medians = set_of_posterior_medians(bounds);
                const Interval rci = bounds.size() >= 2 ? robust_credible_interval(bounds, cfg.robust_alpha)
                                                        : Interval{bounds[0].lower, bounds[0].upper};
                const Interval std_ci =
                    standard_credible_interval(pooled_responses(sample, irfs, i, j, h), cfg.robust_alpha);
                const double pi = prior_informativeness(std_ci, rci);
                totals.mean_informativeness += pi;
                totals.violations += rci.contains(std_ci, 1e-9) ? 0 : 1;
                ++cells;
                std::fprintf(t.get(), "%s,%s,%d,%s,%s,%s,%s,%s,%s,%s,%s,%s\n",
                             set.variables[static_cast<std::size_t>(i)].c_str(),
                             set.shocks[static_cast<std::size_t>(j)].c_str(), h, num(mean_lo).c_str(),
                             num(mean_hi).c_str(), num(medians.lo).c_str(), num(medians.hi).c_str(),
                             num(rci.lo).c_str(), num(rci.hi).c_str(), num(std_ci.lo).c_str(),
                             num(std_ci.hi).c_str(), num(pi).c_str());
            }
    totals.mean_informativeness /= std::max(cells, 1);
    return totals;
}

void run_posterior_modes(const RunConfig& cfg) {
    const auto start = Clock::now();
    Prepared p = prepare(cfg);

    JointSamplerConfig jc;
    jc.sampler = cfg.sampler;
    jc.n_phi_kept = cfg.n_phi_kept;
    int draws = cfg.draws;
    if (cfg.mode == RunMode::Robust && cfg.gross_up_ess) draws = static_cast<int>(gross_up_draws(draws, *cfg.gross_up_ess));
    jc.slice = slice_config(cfg, draws);
    jc.accept_reject.max_attempts = cfg.max_attempts;
    jc.accept_reject_draws = draws;
    jc.threads = cfg.threads;
    jc.keep_chain = cfg.write_draws || cfg.mode == RunMode::Robust;

    const JointSample sample = run_joint_sampler(p.posterior, p.set, jc, cfg.seed, &p.var);
    const auto irfs = kept_irfs(sample, cfg.horizons);

    if (cfg.write_draws) write_draws(cfg.output, sample, p.set.n());
    write_phi_records(cfg.output, sample);
    write_irf_summary(cfg.output, cfg, p.set, sample, irfs);

    Json j = summary_header(cfg);
    j["draws_per_phi"] = draws;
    j["resampled_per_phi"] = draws;
    j["n_phi_kept"] = sample.kept();
    j["phi_attempts"] = static_cast<long>(sample.records.size());
    j["plausibility_percent"] = posterior_plausibility(sample.records);
    j["mean_ess_percent"] = cfg.sampler == SamplerKind::SoftSign ? Json(sample.mean_ess()) : Json(nullptr);
    j["restriction_count"] = resolve_normalisation(p.set, cfg.sampler).size();
    j["warnings"] = p.set.warnings;
    if (cfg.mode == RunMode::Robust) {
        const auto totals = write_robust_summary(cfg.output, cfg, p.set, sample, irfs);
        j["robust_alpha"] = cfg.robust_alpha;
        j["mean_prior_informativeness"] = totals.mean_informativeness;
        j["standard_outside_robust_cells"] = totals.violations;
    }
    const double wall = seconds_since(start);
    double effective = 0.0;
    for (const auto& rec : sample.records)
        if (!rec.empty)
            effective += cfg.sampler == SamplerKind::SoftSign ? rec.ess_percent * draws / 100.0
                                                              : static_cast<double>(rec.draws.size());
    j["timing"] = {{"wall_seconds", wall}, {"effective_draws_per_hour", wall > 0 ? effective / wall * 3600.0 : 0.0}};
    write_json(cfg.output / "run_summary.json", j);
}

void run_conditional_check(const RunConfig& cfg) {
    const auto start = Clock::now();
    Prepared p = prepare(cfg);
    const ReducedFormParams phi = p.posterior.posterior_mean();
    InnovationSeries innovations;
    MarginContext context;
    if (p.set.needs_innovations()) {
        innovations = compute_innovations(phi, p.var);
        context.innovations = &innovations;
    }
    AcceptRejectConfig ar;
    ar.max_attempts = cfg.max_attempts;
    const auto report = conditional_posterior_check(phi, p.set, cfg.conditional_draws,
                                                    slice_config(cfg, cfg.conditional_draws), ar, cfg.seed,
                                                    context);
    {
        Table t(cfg.output / "cond_check.csv", "cond_check");
        t.line("variable,shock,ks_statistic,p_value,n_accept_reject,n_soft_sign");
        for (const auto& e : report.entries)
            std::fprintf(t.get(), "%s,%s,%s,%s,%zu,%zu\n", p.set.variables[static_cast<std::size_t>(e.variable)].c_str(),
                         p.set.shocks[static_cast<std::size_t>(e.shock)].c_str(), num(e.ks.statistic).c_str(),
                         num(e.ks.p_value).c_str(), e.accept_reject.size(), e.soft_sign.size());
    }
    {
        constexpr int kBins = 40;
        Table t(cfg.output / "cond_hist.csv", "cond_hist");
        t.line("variable,shock,sampler,bin,lo,hi,count");
        for (const auto& e : report.entries) {
            const auto [a0, a1] = std::minmax_element(e.accept_reject.begin(), e.accept_reject.end());
            const auto [s0, s1] = std::minmax_element(e.soft_sign.begin(), e.soft_sign.end());
            double lo = std::min(*a0, *s0), hi = std::max(*a1, *s1);
            if (!(hi > lo)) hi = lo + 1.0;
            for (const auto& [name, values] :
                 {std::pair{"accept-reject", &e.accept_reject}, std::pair{"soft-sign", &e.soft_sign}}) {
                const auto hist = histogram(*values, lo, hi, kBins);
                for (int b = 0; b < kBins; ++b)
                    std::fprintf(t.get(), "%s,%s,%s,%d,%s,%s,%ld\n",
                                 p.set.variables[static_cast<std::size_t>(e.variable)].c_str(),
                                 p.set.shocks[static_cast<std::size_t>(e.shock)].c_str(), name, b,
                                 num(lo + b * hist.bin_width()).c_str(), num(lo + (b + 1) * hist.bin_width()).c_str(),
                                 hist.counts[static_cast<std::size_t>(b)]);
            }
        }
    }
    Json j = summary_header(cfg);
    j["conditional_draws"] = cfg.conditional_draws;
    j["accept_reject_attempts"] = report.accept_reject_attempts;
    j["soft_ess_percent"] = report.soft_ess;
    double min_p = 1.0;
    for (const auto& e : report.entries) min_p = std::min(min_p, e.ks.p_value);
    j["min_ks_p_value"] = min_p;
    j["timing"] = {{"wall_seconds", seconds_since(start)}};
    write_json(cfg.output / "run_summary.json", j);
}

void run_bivariate_demo(const RunConfig& cfg) {
    const auto start = Clock::now();
    const auto& b = cfg.bivariate;
    const bool connected = b.testbed == "connected";
    const ThetaIntervalSet is = connected ? connected_identified_set(b.phi, b.omega_bar)
                                          : disconnected_identified_set(b.phi, b.lambda);
    const SignNormalisation norm =
        cfg.sampler == SamplerKind::AcceptReject ? SignNormalisation::Mechanical : SignNormalisation::Soft;
    const RestrictionSet set = connected ? bivariate_connected_restrictions(b.omega_bar, norm)
                                         : bivariate_disconnected_restrictions(b.lambda, norm);
    const ReducedFormParams phi = b.phi.to_reduced_form();
    auto compiled = std::make_shared<const CompiledRestrictions>(set, phi);

    RngStream rng(cfg.seed, 0);
    std::vector<SquareMatrix> draws;
    Json j = summary_header(cfg);
    if (cfg.sampler == SamplerKind::SoftSign) {
        auto batch = soft_sign_sample(compiled, slice_config(cfg, cfg.draws), rng);
        if (batch.empty_verdict()) throw Error(ErrorCode::EmptyVerdict, "bivariate demo: no feasible draw");
        draws = resample(batch, cfg.draws, rng);
        j["ess_percent"] = batch.ess_percent;
        j["feasible_count"] = batch.feasible_count;
    } else {
        AcceptRejectConfig ar;
        ar.max_attempts = cfg.max_attempts;
        auto batch = accept_reject_sample(*compiled, cfg.draws, ar, rng);
        if (batch.empty_verdict) throw Error(ErrorCode::EmptyVerdict, "bivariate demo: no feasible draw");
        draws = std::move(batch.draws);
        j["attempts"] = batch.attempts;
        j["acceptance_rate"] = static_cast<double>(cfg.draws) / static_cast<double>(batch.attempts);
    }

    Table t(cfg.output / "theta_draws.csv", "theta_draws");
    std::string bounds = "# identified_set ";
    for (std::size_t k = 0; k < is.intervals.size(); ++k)
        bounds += (k ? ";" : "") + num(is.intervals[k].lo) + ":" + num(is.intervals[k].hi);
    t.line(bounds);
    t.line("draw,theta,branch");
    double first_share = 0.0;
    for (std::size_t k = 0; k < draws.size(); ++k) {
        const auto tb = theta_of(draws[k]);
        std::fprintf(t.get(), "%zu,%s,%s\n", k, num(tb.theta).c_str(),
                     tb.branch == O2Branch::Rotation ? "rotation" : "reflection");
        if (tb.theta <= is.intervals.front().hi) first_share += 1.0;
    }
    j["testbed"] = b.testbed;
    j["phi"] = {b.phi.s11, b.phi.s21, b.phi.s22};
    j["omega_bar"] = b.omega_bar;
    j["lambda"] = b.lambda;
    Json intervals = Json::array();
    for (const auto& iv : is.intervals) intervals.push_back({iv.lo, iv.hi});
    j["identified_set"] = intervals;
    j["draws"] = cfg.draws;
    j["first_interval_share"] = first_share / static_cast<double>(draws.size());
    j["timing"] = {{"wall_seconds", seconds_since(start)}};
    write_json(cfg.output / "run_summary.json", j);
}

void run_benchmark(const RunConfig& cfg) {
    const auto& bm = cfg.benchmark;
    const BivariatePhi phi_b = cfg.bivariate.phi;
    const ReducedFormParams phi = phi_b.to_reduced_form();
    struct Cell {
        double seconds = 0.0;
        double ess = 0.0;
        double acceptance = 0.0;
    };
    std::vector<Cell> ar_cells(bm.omega_bars.size());
    std::vector<std::vector<Cell>> soft_cells(bm.deltas.size(), std::vector<Cell>(bm.omega_bars.size()));
    std::uint64_t stream = 0;
    for (std::size_t w = 0; w < bm.omega_bars.size(); ++w) {
        const CompiledRestrictions hard(bivariate_connected_restrictions(bm.omega_bars[w], SignNormalisation::Mechanical), phi);
        AcceptRejectConfig ar;
        ar.max_attempts = std::numeric_limits<long>::max();
        for (int r = 0; r < bm.replications; ++r) {
            RngStream rng(cfg.seed, stream++);
            const auto t0 = Clock::now();
            const auto batch = accept_reject_sample(hard, bm.draws, ar, rng);
            ar_cells[w].seconds += seconds_since(t0) / bm.replications;
            ar_cells[w].acceptance += static_cast<double>(bm.draws) / batch.attempts / bm.replications;
        }
        auto soft = std::make_shared<const CompiledRestrictions>(bivariate_connected_restrictions(bm.omega_bars[w]), phi);
        for (std::size_t d = 0; d < bm.deltas.size(); ++d) {
            SliceConfig sc = slice_config(cfg, bm.draws);
            sc.delta = bm.deltas[d];
            for (int r = 0; r < bm.replications; ++r) {
                RngStream rng(cfg.seed, stream++);
                const auto t0 = Clock::now();
                const auto batch = soft_sign_sample(soft, sc, rng);
                soft_cells[d][w].seconds += seconds_since(t0) / bm.replications;
                soft_cells[d][w].ess += batch.ess_percent / bm.replications;
            }
        }
    }

    Table t(cfg.output / "benchmark.csv", "benchmark");
    t.line("sampler,delta,omega_bar,replications,draws,mean_seconds,mean_ess_percent,acceptance_rate,"
           "effective_draws_per_second,relative_speed");
    for (std::size_t w = 0; w < bm.omega_bars.size(); ++w) {
        const auto ar_eff = accept_reject_efficiency(bm.draws, static_cast<long>(bm.draws / ar_cells[w].acceptance),
                                                     ar_cells[w].seconds);
        std::fprintf(t.get(), "accept-reject,,%s,%d,%d,%s,,%s,%s,1\n", num(bm.omega_bars[w]).c_str(),
                     bm.replications, bm.draws, num(ar_cells[w].seconds).c_str(),
                     num(ar_cells[w].acceptance).c_str(), num(ar_eff.effective_draws_per_second).c_str());
        for (std::size_t d = 0; d < bm.deltas.size(); ++d) {
            const auto& c = soft_cells[d][w];
            const auto eff = soft_sign_efficiency(c.ess, bm.draws, c.seconds);
            std::fprintf(t.get(), "soft-sign,%s,%s,%d,%d,%s,%s,,%s,%s\n", num(bm.deltas[d]).c_str(),
                         num(bm.omega_bars[w]).c_str(), bm.replications, bm.draws, num(c.seconds).c_str(),
                         num(c.ess).c_str(), num(eff.effective_draws_per_second).c_str(),
                         num(eff.effective_draws_per_second / ar_eff.effective_draws_per_second).c_str());
        }
    }

    // Console table: time (s) and ESS (%) per omega_bar, one row per sampler setting.
    if (!cfg.quiet) {
        std::printf("%-14s", "");
        for (double w : bm.omega_bars) std::printf("  omega=%-6g time     ESS", w);
        std::printf("\n%-14s", "accept-reject");
        for (const auto& c : ar_cells) std::printf("  %19.3f %7s", c.seconds, "-");
        for (std::size_t d = 0; d < bm.deltas.size(); ++d) {
            std::printf("\ndelta=%-8g", bm.deltas[d]);
            for (const auto& c : soft_cells[d]) std::printf("  %19.3f %7.2f", c.seconds, c.ess);
        }
        std::printf("\n");
    }

    Json j = summary_header(cfg);
    j["benchmark"] = {{"omega_bar", bm.omega_bars}, {"delta", bm.deltas}, {"replications", bm.replications},
                      {"draws", bm.draws}};
    Json ess = Json::array();
    for (const auto& row : soft_cells) {
        Json r = Json::array();
        for (const auto& c : row) r.push_back(c.ess);
        ess.push_back(r);
    }
    j["mean_ess_percent"] = ess;
    write_json(cfg.output / "run_summary.json", j);
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::PlausibilityFloor: return kExitPlausibilityFloor;
        case ErrorCode::ConfigError: return kExitUsage;
        default: return kExitError;
    }
}

void write_error_record(const std::filesystem::path& dir, ErrorCode code, const std::string& message) {
    std::filesystem::create_directories(dir);
    Json j;
    j["schema"] = "svarsoft.error/1";
    j["code"] = std::string(to_string(code));
    j["message"] = message;
    write_json(dir / "error.json", j);
}

void run(const RunConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.output);
    std::filesystem::remove(cfg.output / "error.json");
    switch (cfg.mode) {
        case RunMode::Standard:
        case RunMode::Robust: run_posterior_modes(cfg); break;
        case RunMode::ConditionalCheck: run_conditional_check(cfg); break;
        case RunMode::BivariateDemo: run_bivariate_demo(cfg); break;
        case RunMode::Benchmark: run_benchmark(cfg); break;
    }
}

int run_reporting_errors(const RunConfig& cfg) {
    try {
        run(cfg);
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "svarsoft: " << to_string(e.code()) << ": " << e.what() << "\n";
        write_error_record(cfg.output, e.code(), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "svarsoft: " << e.what() << "\n";
        write_error_record(cfg.output, ErrorCode::IoError, e.what());
        return kExitError;
    }
}

Dataset synthetic_oil_dataset(std::uint64_t seed, const std::string& first, const std::string& last) {
    const int start = month_index(first) - 1;
    const int months = month_index(last) - start + 1;
    if (months < 3) throw Error(ErrorCode::ConfigError, "synthetic sample is too short");

    // Impact matrix with the oil model's sign pattern (columns: aggregate demand, oil-specific
    // demand, supply), in percent units; elasticities 0.05/3 and 0.05/6 respect the 0.0258 bound.
    Eigen::Matrix3d impact;
    impact << 5.0, -2.0, -1.0,
              0.05, 0.05, -1.0,
              3.0, 6.0, 2.0;
    Eigen::Matrix3d a;
    a << 0.90, 0.00, -0.02,
         0.00, 0.20, 0.00,
         0.05, 0.00, 0.95;
    const Eigen::Vector3d mean(0.0, 0.1, 100.0 * std::log(30.0));

    // Months where the narrative restrictions bite get a large positive supply shock, and the
    // least-important-demand months a small demand shock.
    const std::vector<std::string> supply_dates{"1978-12", "1979-01", "1980-09", "1980-10",
                                                "1990-08", "2002-12", "2003-03", "2011-02"};
    const std::vector<std::string> quiet_demand{"1980-09", "1980-10", "1990-08"};

    RngStream rng(seed, 0);
    Dataset out;
    out.variables = {"REA", "PROD", "RPO"};
    out.values.resize(months, 3);
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    double production = 60000.0;
    for (int t = 0; t < months; ++t) {
        const std::string date = month_string(start + t);
        Eigen::Vector3d eps(rng.normal(), rng.normal(), rng.normal());
        if (std::find(supply_dates.begin(), supply_dates.end(), date) != supply_dates.end())
            eps[2] = 2.5 + std::abs(eps[2]);
        if (std::find(quiet_demand.begin(), quiet_demand.end(), date) != quiet_demand.end()) eps[0] = 0.1;
        x = a * x + impact * eps;
        const Eigen::Vector3d y = mean + x;
        if (t > 0) production *= std::exp(y[1] / 100.0);
        out.dates.push_back(date);
        out.values(t, 0) = y[0];
        out.values(t, 1) = production;
        out.values(t, 2) = std::exp(y[2] / 100.0);
    }
    return out;
}

}  // namespace svarsoft
