// Scenario runner: configures an experiment from a JSON file, executes
// the enabled analyses and writes machine-readable results and plots.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "nwlab/cli/config.hpp"
#include "nwlab/cli/scenario.hpp"
#include "nwlab/simd/kernels.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_numerical = 2;
constexpr int exit_io = 3;

void print_report(const nwlab::cli::RunReport& rep) {
    std::printf("scenario   %s\n", rep.scenario.c_str());
    std::printf("config     %s\n", rep.config_hash.c_str());
    std::printf("seed       %llu\n", static_cast<unsigned long long>(rep.seed));
    for (const auto& m : rep.metrics) {
        if (m.comparator.empty()) {
            std::printf("  info  %-34s %.10g\n", m.name.c_str(), m.value);
        } else {
            std::printf("  %s  %-34s %.10g %s %.10g\n", m.pass ? "PASS" : "FAIL",
                        m.name.c_str(), m.value, m.comparator.c_str(), m.threshold);
        }
    }
    for (const auto& w : rep.warnings) std::printf("  warn  %s\n", w.c_str());
    std::printf("result     %s\n", rep.all_pass() ? "all metrics pass" : "METRIC FAILURES");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nwlab: stochastic-mechanics / phase-space quantum laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::uint64_t seed_override = 0;
    unsigned threads = 1;
    bool no_plots = false;

    auto* run = app.add_subcommand("run", "execute a scenario configuration");
    run->add_option("config", config_path, "path to the scenario JSON")->required();
    run->add_option("--output-dir", output_dir, "override the configured output directory");
    auto* seed_opt = run->add_option("--seed", seed_override, "override the ensemble seed");
    run->add_option("--threads", threads, "worker threads for the ensemble stepping");
    run->add_flag("--no-plots", no_plots, "skip the SVG plots");

    auto* list = app.add_subcommand("list-scenarios", "print the known scenario names");

    auto* validate = app.add_subcommand("validate", "parse and schema-check a configuration");
    validate->add_option("config", config_path, "path to the scenario JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_config;
    }

    try {
        if (list->parsed()) {
            for (const auto& name : nwlab::cli::ScenarioConfig::known_scenarios())
                std::printf("%s\n", name.c_str());
            return exit_ok;
        }
        if (validate->parsed()) {
            const auto cfg = nwlab::cli::ScenarioConfig::from_file(config_path);
            std::printf("valid: %s (hash %s)\n", cfg.scenario.c_str(),
                        cfg.content_hash().c_str());
            return exit_ok;
        }
        // run
        auto cfg = nwlab::cli::ScenarioConfig::from_file(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (seed_opt->count() > 0) cfg.ensemble.seed = seed_override;
        nwlab::simd::set_threads(threads);
        nwlab::cli::RunOptions opts;
        opts.plots = !no_plots;
        const auto rep = nwlab::cli::run_scenario(cfg, opts);
        print_report(rep);
        std::printf("outputs in %s\n", cfg.output_dir.c_str());
        return exit_ok;
    } catch (const nwlab::cli::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const nwlab::cli::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_io;
    } catch (const nwlab::cli::StageError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return exit_numerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return exit_numerical;
    }
}
