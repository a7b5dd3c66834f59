#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "svarsoft/app.hpp"

using namespace svarsoft;

int main(int argc, char** argv) {
    CLI::App app{"Bayesian SVAR sampling under sign restrictions"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run a configured exercise");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> sampler, mode, out;
    std::optional<double> delta;
    run_cmd->add_option("--config", config_path, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", seed, "Override the seed");
    run_cmd->add_option("--sampler", sampler, "accept-reject or soft-sign");
    run_cmd->add_option("--delta", delta, "Regularisation parameter");
    run_cmd->add_option("--mode", mode, "standard, robust, conditional-check, bivariate-demo or benchmark");
    run_cmd->add_option("--out", out, "Output directory");

    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic oil-market dataset");
    std::string synth_out;
    std::uint64_t synth_seed = 1;
    std::string first = "1971-01", last = "2015-12";
    synth_cmd->add_option("--out", synth_out, "CSV path")->required();
    synth_cmd->add_option("--seed", synth_seed, "Generator seed");
    synth_cmd->add_option("--first", first, "First month after transformation (YYYY-MM)");
    synth_cmd->add_option("--last", last, "Last month (YYYY-MM)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version requests exit 0; every other parse failure is a usage error.
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    if (*synth_cmd) {
        try {
            save_dataset(synthetic_oil_dataset(synth_seed, first, last), synth_out);
        } catch (const Error& e) {
            std::cerr << "svarsoft: " << to_string(e.code()) << ": " << e.what() << "\n";
            return exit_code_for(e.code());
        }
        return kExitOk;
    }

    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
        if (seed) cfg.seed = *seed;
        if (sampler) cfg.sampler = parse_sampler_kind(*sampler);
        if (delta) cfg.delta = *delta;
        if (mode) cfg.mode = parse_run_mode(*mode);
        if (out) cfg.output = *out;
    } catch (const Error& e) {
        std::cerr << "svarsoft: " << to_string(e.code()) << ": " << e.what() << "\n";
        write_error_record(out ? std::filesystem::path(*out) : cfg.output, e.code(), e.what());
        return exit_code_for(e.code());
    }
    return run_reporting_errors(cfg);
}
