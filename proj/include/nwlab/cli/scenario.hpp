#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nwlab/cli/config.hpp"

namespace nwlab::cli {

inline constexpr const char* version_string = "nwlab 1.0.0";

/// Numerical failure inside a named pipeline stage; maps to exit code 2.
struct StageError : std::runtime_error {
    StageError(const std::string& stage_, const std::string& what_)
        : std::runtime_error("stage '" + stage_ + "': " + what_), stage(stage_) {}
    std::string stage;
};

/// I/O failure with path context; maps to exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Metric {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string comparator;  // "<=", ">=", "=="
    bool pass = false;
};

struct RunReport {
    std::string scenario;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<Metric> metrics;
    std::vector<std::string> warnings;
    std::vector<std::string> outputs;  // file names relative to the output dir

    bool all_pass() const;
    std::string to_json_text() const;
    const Metric* find(const std::string& name) const;
};

struct RunOptions {
    bool plots = true;
};

/// Executes the enabled analyses in dependency order, writes tables and
/// plots into config.output_dir, and returns the report. Partial outputs
/// survive a failed stage; the MANIFEST names the failing stage.
RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Writes report.json and the MANIFEST for a finished report.
void emit_outputs(const RunReport& report, const std::filesystem::path& dir);

}  // namespace nwlab::cli
