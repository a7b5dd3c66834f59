// Acceptance report: one line per criterion, tolerances pinned below.
//
// Exit status is nonzero when a criterion fails unexpectedly. A8 is listed in kKnownFailures: the
// formula it checks evaluates to 20713.0755..., so its ceiling is 20714 rather than the stated
// 20713, and the line still prints FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "svarsoft/app.hpp"
#include "svarsoft/posterior.hpp"
#include "svarsoft/samplers.hpp"
#include "svarsoft/soft_target.hpp"
#include "svarsoft/stats.hpp"

namespace fs = std::filesystem;
using namespace svarsoft;

namespace {

constexpr std::uint64_t kSeed = 20240917;

const std::set<std::string> kKnownFailures{"A8"};

struct Line {
    std::string id;
    enum { Pass, Fail, Skipped } status = Fail;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::shared_ptr<const CompiledRestrictions> connected(double omega_bar, SignNormalisation mode) {
    const BivariatePhi b;
    return std::make_shared<const CompiledRestrictions>(bivariate_connected_restrictions(omega_bar, mode),
                                                        b.to_reduced_form());
}

std::shared_ptr<const CompiledRestrictions> disconnected(double lambda) {
    const BivariatePhi b;
    return std::make_shared<const CompiledRestrictions>(
        bivariate_disconnected_restrictions(lambda, SignNormalisation::Soft), b.to_reduced_form());
}

/// Chain theta values and weights, without keeping the matrices.
struct ThetaChain {
    std::vector<double> theta;
    std::vector<double> weight;
};

ThetaChain theta_chain(std::shared_ptr<const CompiledRestrictions> r, const SliceConfig& cfg, RngStream& rng) {
    ThetaChain out;
    out.theta.reserve(static_cast<std::size_t>(cfg.draws));
    out.weight.reserve(static_cast<std::size_t>(cfg.draws));
    run_slice_chain(std::move(r), cfg, rng,
                    [&](const std::vector<double>&, const SquareMatrix& q, const Eigen::VectorXd&, double w) {
                        out.theta.push_back(theta_of(q).theta);
                        out.weight.push_back(w);
                    });
    return out;
}

std::vector<double> resampled_theta(const ThetaChain& c, int k, RngStream& rng) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i : resample_indices(c.weight, k, rng)) out.push_back(c.theta[static_cast<std::size_t>(i)]);
    return out;
}

// ---------------------------------------------------------------------------------------------

Line a1() {
    // 10^6 chain states thinned by 4 (5 x 10^6 slice steps) resampled to 10^5, so that the KS
    // test is not fooled by the chain's autocorrelation.
    const BivariatePhi b;
    const auto is = connected_identified_set(b, 1.0);
    Line line{"A1"};
    bool ok = true;
    std::string detail;
    int stream = 0;
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto t0 = Clock::now();
        SliceConfig cfg;
        cfg.delta = delta;
        cfg.draws = 1'000'000;
        cfg.thin = 4;
        RngStream rng(kSeed, static_cast<std::uint64_t>(stream++));
        const auto chain = theta_chain(connected(1.0, SignNormalisation::Soft), cfg, rng);
        const auto theta = resampled_theta(chain, 100'000, rng);
        const auto ks = ks_test_uniform(theta, is.lower(), is.upper());
        const double secs = seconds_since(t0);
        ok = ok && ks.p_value > 0.01 && secs < 60.0;
        detail += fmt(" d=%g:p=%.3f,%.1fs", delta, ks.p_value, secs);
    }
    line.status = ok ? Line::Pass : Line::Fail;
    line.detail = fmt("KS vs U[%.5f, %.5f]", is.lower(), is.upper()) + detail;
    return line;
}

Line a2() {
    const double expected[4][3] = {{78.36, 22.32, 2.17}, {96.52, 80.62, 22.72}, {99.65, 97.27, 80.92}, {99.95, 99.67, 97.26}};
    const double deltas[4] = {1e-1, 1e-2, 1e-3, 1e-4};
    const double omegas[3] = {1.0, 0.1, 0.01};
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::string where;
    std::uint64_t stream = 1000;
    for (int d = 0; d < 4; ++d) {
        for (int w = 0; w < 3; ++w) {
            const auto compiled = connected(omegas[w], SignNormalisation::Soft);
            double sum = 0.0;
            for (int rep = 0; rep < 20; ++rep) {
                SliceConfig cfg;
                cfg.delta = deltas[d];
                cfg.draws = 10'000;
                RngStream rng(kSeed, stream++);
                const auto c = theta_chain(compiled, cfg, rng);
                sum += effective_sample_size(c.weight);
            }
            const double gap = std::abs(sum / 20.0 - expected[d][w]);
            if (gap > worst) {
                worst = gap;
                where = fmt("(w=%g, d=%g: %.2f vs %.2f)", omegas[w], deltas[d], sum / 20.0, expected[d][w]);
            }
        }
    }
    const double secs = seconds_since(t0);
    return {"A2", worst <= 3.0 && secs < 600.0 ? Line::Pass : Line::Fail,
            fmt("max |ESS - table| = %.2fpp ", worst) + where + fmt(", %.1fs", secs)};
}

Line a3() {
    const int draws = 10'000;
    const int reps = 5;
    auto hard = connected(0.01, SignNormalisation::Mechanical);
    auto soft = connected(0.01, SignNormalisation::Soft);
    AcceptRejectConfig ar;
    ar.max_attempts = std::numeric_limits<long>::max();
    double ar_secs = 0.0, soft_secs = 0.0, ess = 0.0;
    long attempts = 0;
    for (int r = 0; r < reps; ++r) {
        RngStream rng_ar(kSeed, 2000 + static_cast<std::uint64_t>(r));
        auto t0 = Clock::now();
        const auto batch = accept_reject_sample(*hard, draws, ar, rng_ar);
        ar_secs += seconds_since(t0);
        attempts += batch.attempts;

        RngStream rng_soft(kSeed, 3000 + static_cast<std::uint64_t>(r));
        SliceConfig cfg;
        cfg.delta = 1e-4;
        cfg.draws = draws;
        t0 = Clock::now();
        const auto s = soft_sign_sample(soft, cfg, rng_soft);
        soft_secs += seconds_since(t0);
        ess += s.ess_percent;
    }
    const auto ar_eff = accept_reject_efficiency(static_cast<long>(draws) * reps, attempts, ar_secs);
    const auto soft_eff = soft_sign_efficiency(ess / reps, draws * reps, soft_secs);
    const double ratio = soft_eff.effective_draws_per_second / ar_eff.effective_draws_per_second;
    return {"A3", ratio >= 10.0 ? Line::Pass : Line::Fail,
            fmt("soft/AR effective draws per second = %.1fx (AR %.0f/s at rate %.5f, soft %.0f/s at ESS %.2f%%)",
                ratio, ar_eff.effective_draws_per_second, *ar_eff.acceptance_rate,
                soft_eff.effective_draws_per_second, ess / reps)};
}

Line a4() {
    const BivariatePhi b;
    const auto is = disconnected_identified_set(b, 0.5);
    const double cut = is.intervals.front().hi;
    const double theory = is.intervals.front().length() / is.total_length();

    auto share_of = [&](int thin, std::uint64_t stream, std::vector<double>* keep) {
        SliceConfig cfg;
        cfg.delta = 1e-4;
        cfg.draws = 1'000'000;
        cfg.thin = thin;
        RngStream rng(kSeed, stream);
        const auto chain = theta_chain(disconnected(0.5), cfg, rng);
        auto theta = resampled_theta(chain, cfg.draws, rng);
        const double share = static_cast<double>(std::count_if(theta.begin(), theta.end(),
                                                               [&](double t) { return t <= cut; })) /
                             static_cast<double>(theta.size());
        if (keep) *keep = std::move(theta);
        return share;
    };

    std::vector<double> theta;
    const double share = share_of(4, 4000, &theta);
    const double share_unthinned = share_of(0, 4001, nullptr);
    bool covered = true;
    for (const auto& iv : is.intervals)
        for (double end : {iv.lo, iv.hi})
            covered = covered && std::any_of(theta.begin(), theta.end(),
                                             [&](double t) { return std::abs(t - end) <= 0.01; });
    const bool ok = std::abs(share - 0.557) <= 0.01 && covered;
    return {"A4", ok ? Line::Pass : Line::Fail,
            fmt("first-interval share %.2f%% (theory %.2f%%, unthinned chain %.2f%%), endpoints covered: %s",
                100 * share, 100 * theory, 100 * share_unthinned, covered ? "yes" : "no")};
}

Line a5() {
    RngStream rng(kSeed, 5000);
    long violations = 0;
    double max_ratio = 0.0;
    const int cases = 100'000;
    for (int c = 0; c < cases; ++c) {
        const int n = 2 + static_cast<int>(rng.uniform() * 3);
        SquareMatrix l = SquareMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            l(i, i) = 0.1 + std::abs(rng.normal());
            for (int j = 0; j < i; ++j) l(i, j) = rng.normal();
        }
        RestrictionSet set;
        for (int i = 0; i < n; ++i) {
            set.variables.push_back("v" + std::to_string(i));
            set.shocks.push_back("s" + std::to_string(i));
        }
        const int s = 1 + static_cast<int>(rng.uniform() * 6);
        for (int k = 0; k < s; ++k) {
            Restriction r;
            r.kind = rng.uniform() < 0.7 ? RestrictionKind::IrfSign : RestrictionKind::StructuralSign;
            r.variable = static_cast<int>(rng.uniform() * n);
            r.shock = static_cast<int>(rng.uniform() * n);
            r.sign = rng.uniform() < 0.5 ? -1 : 1;
            if (r.kind == RestrictionKind::IrfSign) r.bound = 0.3 * rng.normal();
            set.restrictions.push_back(r);
        }
        set = set.with_normalisation(rng.uniform() < 0.5 ? SignNormalisation::Soft : SignNormalisation::None);
        const double delta = std::pow(10.0, -6.0 * rng.uniform());
        const CompiledRestrictions compiled(set, ReducedFormParams::impact_only(l));
        const SquareMatrix q = qr_positive_diag(draw_standard_matrix_normal(n, rng)).q;
        const Eigen::VectorXd m = compiled.evaluate(q);
        const double w = importance_weight(m, delta);
        const double cap = std::ldexp(1.0, compiled.size());
        const bool feasible = m.minCoeff() >= 0.0;
        if (!(w >= 0.0 && w <= cap) || (!feasible && w != 0.0)) ++violations;
        max_ratio = std::max(max_ratio, w / cap);
    }
    const std::vector<double> boundary{0.0};
    const double edge = importance_weight(std::span<const double>(boundary), 0.37);
    return {"A5", violations == 0 && edge == 2.0 ? Line::Pass : Line::Fail,
            fmt("%d cases, %ld outside [0, 2^s], max w/2^s = %.4f; s=1 margin 0 gives %.17g", cases, violations,
                max_ratio, edge)};
}

Line a6() {
    const auto compiled = connected(1.0, SignNormalisation::Soft);
    std::vector<double> gaps;
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto q = theta_quadrature(*compiled, delta);
        gaps.push_back(std::abs(q.soft_mean_theta - q.feasible_mean_theta));
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < gaps.size(); ++k) decreasing = decreasing && gaps[k] < gaps[k - 1];
    return {"A6", decreasing && gaps.back() < 1e-3 ? Line::Pass : Line::Fail,
            fmt("|E_d[theta] - E_f[theta]| = %.3e, %.3e, %.3e, %.3e", gaps[0], gaps[1], gaps[2], gaps[3])};
}

Line a7() {
    RngStream rng(kSeed, 7000);
    std::vector<double> theta(100'000);
    for (auto& t : theta) t = theta_of(qr_positive_diag(draw_standard_matrix_normal(2, rng)).q).theta;
    const auto ks = ks_test_uniform(theta, -std::numbers::pi, std::numbers::pi);

    QrWorkspace ws(3);
    SquareMatrix z(3, 3), q(3, 3);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, 3), sq = Eigen::MatrixXd::Zero(3, 3);
    const int draws = 1'000'000;
    for (int k = 0; k < draws; ++k) {
        fill_standard_matrix_normal(z, rng);
        ws.orthonormal_factor(z, q);
        sum += q;
        sq += q.cwiseProduct(q);
    }
    const double mean_err = (sum / draws).cwiseAbs().maxCoeff();
    const double second_err = ((sq / draws).array() - 1.0 / 3.0).abs().maxCoeff();
    const bool ok = ks.p_value > 0.01 && mean_err <= 0.01 && second_err <= 0.01;
    return {"A7", ok ? Line::Pass : Line::Fail,
            fmt("n=2 theta KS p=%.3f; n=3 max |E q_ij| = %.4f, max |E q_ij^2 - 1/3| = %.4f", ks.p_value, mean_err,
                second_err)};
}

Line a8() {
    const int d = 189;
    const double eps = 0.05, delta = 0.05;
    const double raw = std::min(2.0 * d * std::log(2.0 * d / delta), std::numbers::e * (2.0 * d + std::log(1.0 / delta))) / eps;
    const long got = required_draws(d, eps, delta);
    return {"A8", got == 20713 ? Line::Pass : Line::Fail,
            fmt("required_draws(189, 0.05, 0.05) = %ld, expected 20713; the bound evaluates to %.4f", got, raw)};
}

Line a9() {
    const BivariatePhi b;
    const auto is = disconnected_identified_set(b, 0.5);
    const auto truth = oracle::eta12_extrema(is, b.s11);
    const ReducedFormParams phi = b.to_reduced_form();
    SliceConfig cfg;
    cfg.delta = 1e-4;
    cfg.draws = 100'000;
    RngStream rng(kSeed, 9000);
    std::vector<double> eta;
    run_slice_chain(disconnected(0.5), cfg, rng,
                    [&](const std::vector<double>&, const SquareMatrix& q, const Eigen::VectorXd&, double w) {
                        if (w > 0.0) eta.push_back(phi.sigma_tr.row(0).dot(q.col(1)));
                    });
    const auto got = identified_set_bounds(eta);
    const double bound_err = std::max(std::abs(got.lower - truth.lower), std::abs(got.upper - truth.upper));

    int mismatches = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        RngStream r(kSeed, 9100 + s);
        std::vector<Bounds> records(200);
        for (auto& x : records) {
            const double c = r.normal(), w = std::abs(r.normal());
            x = {c - w, c + w};
        }
        for (double alpha : {0.68, 0.9}) {
            const auto fast = robust_credible_interval(records, alpha);
            const auto slow = oracle::brute_force_rci(records, alpha);
            if (fast.lo != slow.lo || fast.hi != slow.hi) ++mismatches;
        }
    }
    return {"A9", bound_err <= 1e-3 && mismatches == 0 ? Line::Pass : Line::Fail,
            fmt("eta_12,0 bounds [%.5f, %.5f] vs analytic [%.5f, %.5f] (max err %.2e); RCI mismatches %d/20",
                got.lower, got.upper, truth.lower, truth.upper, bound_err, mismatches)};
}

Line a10() {
    const char* path = std::getenv("SVARSOFT_OIL_DATA");
    if (path == nullptr || *path == '\0')
        return {"A10", Line::Skipped, "set SVARSOFT_OIL_DATA to the converted oil-market CSV to run this gate"};
    const auto data = load_dataset(path, {{"PROD", Transform::Growth}, {"RPO", Transform::Log100}});
    const int lags = 24;
    const auto est = estimate_reduced_form(data.values, lags, true);
    const auto var = VarData::build(data.values, lags, true);
    RestrictionParseOptions opts;
    opts.dataset_variables = data.variables;
    opts.innovation_dates = std::vector<std::string>(data.dates.begin() + lags, data.dates.end());
    const auto set = parse_restrictions_file(fs::path(SVARSOFT_CONFIG_DIR) / "oil_arr18.cfg", opts);
    const auto post = fit_niw(est.stats);

    JointSamplerConfig soft;
    soft.n_phi_kept = 100;
    soft.slice.draws = 1000;
    soft.slice.delta = 1e-5;
    soft.keep_chain = false;
    const auto s = run_joint_sampler(post, set, soft, kSeed, &var);

    // Plausibility depends only on the first-draw emptiness test, so one accepted Q per phi is enough.
    JointSamplerConfig ar = soft;
    ar.sampler = SamplerKind::AcceptReject;
    ar.accept_reject.max_attempts = 1000;
    ar.accept_reject_draws = 1;
    const auto a = run_joint_sampler(post, set, ar, kSeed, &var);

    const double ps = posterior_plausibility(s.records), pa = posterior_plausibility(a.records);
    const double ess = s.mean_ess();

    SliceConfig cond;
    cond.delta = 1e-5;
    cond.thin = 49;
    AcceptRejectConfig car;
    car.max_attempts = 1'000'000;
    const auto phi_star = post.posterior_mean();
    const auto innovations = compute_innovations(phi_star, var);
    MarginContext ctx;
    ctx.innovations = &innovations;
    double min_p = 1.0;
    std::string cond_note;
    try {
        const auto report = conditional_posterior_check(phi_star, set, 5000, cond, car, kSeed, ctx);
        for (const auto& e : report.entries) min_p = std::min(min_p, e.ks.p_value);
    } catch (const Error& e) {
        min_p = 0.0;
        cond_note = std::string(" (") + e.what() + ")";
    }
    const bool ok = ps >= 10.0 * pa && ess >= 80.0 && ess <= 95.0 && min_p > 0.01;
    return {"A10", ok ? Line::Pass : Line::Fail,
            fmt("plausibility soft %.2f%% vs AR %.2f%%, mean ESS %.2f%%, conditional min KS p %.3g", ps, pa, ess,
                min_p) + cond_note};
}

// A11 ----------------------------------------------------------------------------------------

/// File contents with wall-clock fields removed: the JSON "timing" object and CSV time columns.
std::string canonical_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (p.extension() == ".json") {
        auto j = nlohmann::ordered_json::parse(text);
        j.erase("timing");
        return j.dump();
    }
    if (p.filename() != "benchmark.csv") return text;
    static const std::set<std::string> timed{"mean_seconds", "effective_draws_per_second", "relative_speed"};
    std::istringstream lines(text);
    std::string line, out;
    std::vector<bool> keep;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') {
            out += line + "\n";
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream cs(line);
        for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
        if (keep.empty())
            for (const auto& c : cells) keep.push_back(!timed.count(c));
        for (std::size_t k = 0; k < cells.size(); ++k)
            if (k >= keep.size() || keep[k]) out += cells[k] + ",";
        out += "\n";
    }
    return out;
}

Line a11() {
    const fs::path root = fs::temp_directory_path() / "svarsoft_acceptance_a11";
    fs::remove_all(root);
    fs::create_directories(root);
    save_dataset(synthetic_oil_dataset(3, "1971-01", "2015-12"), root / "oil.csv");

    auto base = [&](RunMode mode) {
        RunConfig c;
        c.mode = mode;
        c.seed = 77;
        c.dataset = root / "oil.csv";
        c.transforms = {{"PROD", Transform::Growth}, {"RPO", Transform::Log100}};
        c.restrictions = fs::path(SVARSOFT_CONFIG_DIR) / "oil_arr18.cfg";
        c.lags = 12;
        c.horizons = 8;
        c.draws = 200;
        c.n_phi_kept = 4;
        c.threads = 2;
        c.quiet = true;
        return c;
    };
    std::vector<std::pair<std::string, RunConfig>> runs;
    {
        auto c = base(RunMode::BivariateDemo);
        c.draws = 20000;
        c.delta = 1e-3;
        c.bivariate.testbed = "disconnected";
        runs.emplace_back("bivariate-demo", c);
    }
    runs.emplace_back("standard", base(RunMode::Standard));
    {
        auto c = base(RunMode::Standard);
        c.sampler = SamplerKind::AcceptReject;
        c.draws = 5;
        c.max_attempts = 20000;
        runs.emplace_back("standard-ar", c);
    }
    runs.emplace_back("robust", base(RunMode::Robust));
    {
        auto c = base(RunMode::ConditionalCheck);
        c.conditional_draws = 300;
        c.max_attempts = 10'000'000;
        c.thin = 4;
        c.seed = 2;
        runs.emplace_back("conditional-check", c);
    }
    {
        auto c = base(RunMode::Benchmark);
        c.benchmark.omega_bars = {1.0, 0.1};
        c.benchmark.deltas = {1e-2, 1e-4};
        c.benchmark.replications = 2;
        c.benchmark.draws = 2000;
        runs.emplace_back("benchmark", c);
    }

    int files = 0;
    std::vector<std::string> differing;
    for (auto& [name, cfg] : runs) {
        std::map<std::string, std::string> first;
        for (int rep = 0; rep < 2; ++rep) {
            cfg.output = root / (name + "_" + std::to_string(rep));
            run(cfg);
            for (const auto& e : fs::directory_iterator(cfg.output)) {
                const auto key = e.path().filename().string();
                const auto text = canonical_text(e.path());
                if (rep == 0) {
                    first[key] = text;
                } else {
                    ++files;
                    if (!first.count(key) || first[key] != text) differing.push_back(name + "/" + key);
                }
            }
        }
    }
    std::string detail = fmt("%d files over 6 modes compared after dropping wall-clock fields", files);
    for (const auto& d : differing) detail += "; differs: " + d;
    return {"A11", differing.empty() && files > 0 ? Line::Pass : Line::Fail, detail};
}

}  // namespace

int main(int argc, char** argv) {
    // Optional arguments pick criteria by id, e.g. `svarsoft_acceptance A4 A11`.
    const std::set<std::string> only(argv + 1, argv + argc);
    const std::vector<std::function<Line()>> criteria{a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11};
    int unexpected = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto& run_one = criteria[k];
        Line line{"A" + std::to_string(k + 1)};
        if (!only.empty() && !only.count(line.id)) continue;
        const auto t0 = Clock::now();
        try {
            line = run_one();
        } catch (const std::exception& e) {
            line.status = Line::Fail;
            line.detail = std::string("threw: ") + e.what();
        }
        const char* status = line.status == Line::Pass ? "PASS" : line.status == Line::Skipped ? "SKIPPED" : "FAIL";
        const bool known = line.status == Line::Fail && kKnownFailures.count(line.id);
        std::printf("%-4s %-7s %s%s [%.1fs]\n", line.id.c_str(), status, line.detail.c_str(),
                    known ? " (known failure)" : "", seconds_since(t0));
        std::fflush(stdout);
        if (line.status == Line::Fail && !known) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
