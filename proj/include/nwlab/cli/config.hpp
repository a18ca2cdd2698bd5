#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nwlab/core/grid.hpp"
#include "nwlab/core/potential.hpp"
#include "nwlab/core/units.hpp"

namespace nwlab::cli {

/// Configuration errors (bad file, schema violation, unknown key)
/// surface as this type and map to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnsembleSpec {
    std::size_t particles = 100000;
    double dt = 0.01;
    std::size_t steps = 628;
    std::uint64_t seed = 20240801;
    std::size_t lag = 1;
};

struct AnalysisToggles {
    bool wigner = true;
    bool dispersion = true;
    bool force_balance = true;
    bool hydro = false;
    bool parabolic = false;
};

/// The reproducibility contract of a run: JSON on disk, schema-validated
/// with unknown keys rejected, lossless round trip, content-hashed.
struct ScenarioConfig {
    std::string scenario = "oscillator-stationary";
    core::SpatialGrid grid{-16.0, 16.0, 512};
    core::SimUnits units;
    core::Potential potential = core::Potential::harmonic(1.0);
    EnsembleSpec ensemble;
    AnalysisToggles analyses;
    std::string output_dir = "out";

    static const std::vector<std::string>& known_scenarios();

    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig from_file(const std::filesystem::path& path);
    std::string to_json_text() const;  // canonical (sorted keys, 2-space indent)

    /// FNV-1a hash of the canonical serialisation, hex-encoded.
    std::string content_hash() const;
};

}  // namespace nwlab::cli
