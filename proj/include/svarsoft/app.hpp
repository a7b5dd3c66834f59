#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svarsoft/bivariate.hpp"
#include "svarsoft/dataset.hpp"
#include "svarsoft/error.hpp"
#include "svarsoft/samplers.hpp"

namespace svarsoft {

enum class RunMode { Standard, Robust, ConditionalCheck, BivariateDemo, Benchmark };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view name);

struct BivariateSettings {
    BivariatePhi phi;
    std::string testbed = "connected";  ///< connected | disconnected
    double omega_bar = 1.0;
    double lambda = 0.5;
};

struct BenchmarkSettings {
    std::vector<double> omega_bars{1.0, 0.1, 0.01};
    std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4};
    int replications = 20;
    int draws = 10000;
};

/// Every path is resolved against the directory of the config file.
struct RunConfig {
    RunMode mode = RunMode::Standard;
    std::filesystem::path dataset;
    TransformSpec transforms;
    std::filesystem::path restrictions;
    int lags = 24;
    bool constant = true;
    int horizons = 20;
    SamplerKind sampler = SamplerKind::SoftSign;
    double delta = 1e-5;
    std::optional<double> init_delta;
    int draws = 1000;  ///< M; K = M
    int n_phi_kept = 100;
    long max_attempts = 1000;
    std::vector<double> alphas{0.68};
    double robust_alpha = 0.68;
    std::optional<double> gross_up_ess;  ///< robust mode: M becomes ceil(M / (ess / 100))
    int conditional_draws = 100000;
    int thin = 0;
    int burn_in = 0;
    std::uint64_t seed = 1;
    std::filesystem::path output = "out";
    int threads = 0;
    bool write_draws = true;
    bool quiet = false;  ///< suppress the benchmark console table
    BivariateSettings bivariate;
    BenchmarkSettings benchmark;

    /// Range checks; throws ConfigError before any computation.
    void validate() const;
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& yaml_text, const std::filesystem::path& base_dir);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPlausibilityFloor = 3;

int exit_code_for(ErrorCode code);

/// Executes the configured mode and writes its output files. Throws Error on failure.
void run(const RunConfig& cfg);

/// run() that converts failures into an error.json record in the output directory and an exit code.
int run_reporting_errors(const RunConfig& cfg);

/// Writes {schema, code, message} to dir/error.json.
void write_error_record(const std::filesystem::path& dir, ErrorCode code, const std::string& message);

/** Synthetic monthly levels with the sign pattern of the oil model.
 *
 * Columns REA (level), PROD (production level, use the growth transform) and RPO (real price
 * level, use log100), from one month before `first` to `last` so the transformed sample spans
 * [first, last].
 */
Dataset synthetic_oil_dataset(std::uint64_t seed, const std::string& first = "1971-01",
                              const std::string& last = "2015-12");

}  // namespace svarsoft
