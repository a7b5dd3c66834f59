#include <algorithm>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "svarsoft/app.hpp"

namespace svarsoft {

std::string_view to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Standard: return "standard";
        case RunMode::Robust: return "robust";
        case RunMode::ConditionalCheck: return "conditional-check";
        case RunMode::BivariateDemo: return "bivariate-demo";
        case RunMode::Benchmark: return "benchmark";
    }
    return "?";
}

RunMode parse_run_mode(std::string_view name) {
    for (auto m : {RunMode::Standard, RunMode::Robust, RunMode::ConditionalCheck, RunMode::BivariateDemo,
                   RunMode::Benchmark})
        if (to_string(m) == name) return m;
    throw Error(ErrorCode::ConfigError, "unknown mode '" + std::string(name) + "'");
}

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
    throw Error(ErrorCode::ConfigError, "run config: " + key + ": " + what);
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
    if (const YAML::Node v = node[key]) {
        try {
            out = v.as<T>();
        } catch (const YAML::Exception&) {
            config_error(key, "has the wrong type");
        }
    }
}

std::vector<double> read_list(const YAML::Node& node, const char* key, std::vector<double> fallback) {
    const YAML::Node v = node[key];
    if (!v) return fallback;
    if (v.IsScalar()) return {v.as<double>()};
    if (!v.IsSequence() || v.size() == 0) config_error(key, "expected a number or a list");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(x.as<double>());
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

void RunConfig::validate() const {
    if (!(delta > 0.0)) config_error("delta", "must be positive");
    if (init_delta && !(*init_delta >= delta)) config_error("init_delta", "must be at least delta");
    if (draws < 1) config_error("draws", "must be at least 1");
    if (n_phi_kept < 1) config_error("n_phi_kept", "must be at least 1");
    if (max_attempts < 1) config_error("max_attempts", "must be at least 1");
    if (lags < 0) config_error("lags", "must be nonnegative");
    if (horizons < 0) config_error("horizons", "must be nonnegative");
    if (thin < 0 || burn_in < 0) config_error("thin/burn_in", "must be nonnegative");
    if (alphas.empty()) config_error("alpha", "needs at least one level");
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0)) config_error("alpha", "levels must lie in (0, 1)");
    if (!(robust_alpha > 0.0 && robust_alpha <= 1.0)) config_error("robust_alpha", "must lie in (0, 1]");
    if (gross_up_ess && !(*gross_up_ess > 0.0 && *gross_up_ess <= 100.0))
        config_error("gross_up_ess", "must lie in (0, 100]");
    if (conditional_draws < 2) config_error("conditional_draws", "must be at least 2");
    if (mode == RunMode::Standard || mode == RunMode::Robust || mode == RunMode::ConditionalCheck) {
        if (dataset.empty()) config_error("dataset", "is required in mode " + std::string(to_string(mode)));
        if (restrictions.empty())
            config_error("restrictions", "is required in mode " + std::string(to_string(mode)));
        if (!std::filesystem::exists(dataset)) config_error("dataset", dataset.string() + " does not exist");
        if (!std::filesystem::exists(restrictions))
            config_error("restrictions", restrictions.string() + " does not exist");
    }
    if (mode == RunMode::BivariateDemo) {
        bivariate.phi.validate();
        if (bivariate.testbed != "connected" && bivariate.testbed != "disconnected")
            config_error("bivariate.testbed", "expected connected or disconnected");
        if (!(bivariate.omega_bar >= 0.0)) config_error("bivariate.omega_bar", "must be nonnegative");
        if (!(bivariate.lambda >= 0.0)) config_error("bivariate.lambda", "must be nonnegative");
    }
    if (mode == RunMode::Benchmark) {
        if (benchmark.replications < 1) config_error("benchmark.replications", "must be at least 1");
        if (benchmark.draws < 1) config_error("benchmark.draws", "must be at least 1");
        for (double d : benchmark.deltas)
            if (!(d > 0.0)) config_error("benchmark.delta", "must be positive");
        for (double w : benchmark.omega_bars)
            if (!(w >= 0.0)) config_error("benchmark.omega_bar", "must be nonnegative");
    }
}

namespace {

// A misspelt key would otherwise fall back to its default without a word.
void reject_unknown_keys(const YAML::Node& map, std::initializer_list<std::string_view> known, const std::string& where) {
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (std::find(known.begin(), known.end(), key) == known.end())
            config_error(where.empty() ? key : where + "." + key, "unknown key");
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& yaml_text, const std::filesystem::path& base_dir) {
    YAML::Node doc;
    try {
        doc = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("run config: ") + e.what());
    }
    if (!doc.IsMap()) throw Error(ErrorCode::ConfigError, "run config: expected a mapping");

    RunConfig cfg;
    try {
        reject_unknown_keys(doc,
                            {"mode", "dataset", "restrictions", "transforms", "lags", "constant", "horizons",
                             "sampler", "delta", "init_delta", "draws", "n_phi_kept", "max_attempts", "alpha",
                             "robust_alpha", "gross_up_ess", "conditional_draws", "thin", "burn_in", "seed",
                             "output", "threads", "write_draws", "bivariate", "benchmark"},
                            "");
        if (doc["mode"]) cfg.mode = parse_run_mode(doc["mode"].as<std::string>());
        if (doc["dataset"]) cfg.dataset = resolve(base_dir, doc["dataset"].as<std::string>());
        if (doc["restrictions"]) cfg.restrictions = resolve(base_dir, doc["restrictions"].as<std::string>());
        if (const YAML::Node t = doc["transforms"]) {
            if (!t.IsMap()) config_error("transforms", "expected a mapping of variable to transform");
            for (const auto& kv : t)
                cfg.transforms[kv.first.as<std::string>()] = parse_transform(kv.second.as<std::string>());
        }
        read(doc, "lags", cfg.lags);
        read(doc, "constant", cfg.constant);
        read(doc, "horizons", cfg.horizons);
        if (doc["sampler"]) cfg.sampler = parse_sampler_kind(doc["sampler"].as<std::string>());
        read(doc, "delta", cfg.delta);
        if (doc["init_delta"]) cfg.init_delta = doc["init_delta"].as<double>();
        read(doc, "draws", cfg.draws);
        read(doc, "n_phi_kept", cfg.n_phi_kept);
        read(doc, "max_attempts", cfg.max_attempts);
        cfg.alphas = read_list(doc, "alpha", cfg.alphas);
        read(doc, "robust_alpha", cfg.robust_alpha);
        if (doc["gross_up_ess"]) cfg.gross_up_ess = doc["gross_up_ess"].as<double>();
        read(doc, "conditional_draws", cfg.conditional_draws);
        read(doc, "thin", cfg.thin);
        read(doc, "burn_in", cfg.burn_in);
        read(doc, "seed", cfg.seed);
        if (doc["output"]) cfg.output = resolve(base_dir, doc["output"].as<std::string>());
        read(doc, "threads", cfg.threads);
        read(doc, "write_draws", cfg.write_draws);
        if (const YAML::Node b = doc["bivariate"]) {
            reject_unknown_keys(b, {"s11", "s21", "s22", "testbed", "omega_bar", "lambda"}, "bivariate");
            read(b, "s11", cfg.bivariate.phi.s11);
            read(b, "s21", cfg.bivariate.phi.s21);
            read(b, "s22", cfg.bivariate.phi.s22);
            read(b, "testbed", cfg.bivariate.testbed);
            read(b, "omega_bar", cfg.bivariate.omega_bar);
            read(b, "lambda", cfg.bivariate.lambda);
        }
        if (const YAML::Node b = doc["benchmark"]) {
            reject_unknown_keys(b, {"omega_bar", "delta", "replications", "draws"}, "benchmark");
            cfg.benchmark.omega_bars = read_list(b, "omega_bar", cfg.benchmark.omega_bars);
            cfg.benchmark.deltas = read_list(b, "delta", cfg.benchmark.deltas);
            read(b, "replications", cfg.benchmark.replications);
            read(b, "draws", cfg.benchmark.draws);
        }
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("run config: ") + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open run config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str(), path.parent_path());
}

}  // namespace svarsoft
