#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nwlab/cli/config.hpp"
#include "nwlab/cli/scenario.hpp"
#include "nwlab/simd/kernels.hpp"

using namespace nwlab;
namespace fs = std::filesystem;

namespace {

std::string small_config(const std::string& out_dir, std::uint64_t seed = 7,
                         const std::string& toggles =
                             "\"wigner\": true, \"dispersion\": true, \"force_balance\": true, "
                             "\"hydro\": false, \"parabolic\": false") {
    std::ostringstream os;
    os << R"({
  "scenario": "oscillator-stationary",
  "grid": {"x_min": -12.0, "x_max": 12.0, "n": 128},
  "units": {"hbar": 1.0, "mass": 1.0},
  "potential": {"type": "harmonic", "omega": 1.0},
  "ensemble": {"particles": 20000, "dt": 0.01, "steps": 100, "seed": )"
       << seed << R"(, "lag": 1},
  "analyses": {)"
       << toggles << R"(},
  "output_dir": ")"
       << out_dir << R"("
})";
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config round-trips losslessly and hashes canonically") {
    const auto cfg = cli::ScenarioConfig::from_json_text(small_config("x"));
    const auto text = cfg.to_json_text();
    const auto cfg2 = cli::ScenarioConfig::from_json_text(text);
    CHECK(cfg2.to_json_text() == text);
    CHECK(cfg2.content_hash() == cfg.content_hash());
    CHECK(cfg.grid.n == 128);
    CHECK(cfg.ensemble.particles == 20000);
}

TEST_CASE("config rejects unknown keys at every level") {
    auto bad_top = small_config("x");
    bad_top.insert(bad_top.rfind('}'), ", \"extra\": 1");
    CHECK_THROWS_AS(cli::ScenarioConfig::from_json_text(bad_top), cli::ConfigError);

    auto bad_grid = small_config("x");
    bad_grid.replace(bad_grid.find("\"n\": 128"), 8, "\"n\": 128, \"m\": 2");
    CHECK_THROWS_AS(cli::ScenarioConfig::from_json_text(bad_grid), cli::ConfigError);

    auto bad_pot = small_config("x");
    bad_pot.replace(bad_pot.find("\"omega\": 1.0"), 12, "\"omega\": 1.0, \"phase\": 0");
    CHECK_THROWS_AS(cli::ScenarioConfig::from_json_text(bad_pot), cli::ConfigError);
}

TEST_CASE("config errors carry useful types and messages") {
    CHECK_THROWS_AS(cli::ScenarioConfig::from_json_text("{ not json"), cli::ConfigError);

    auto bad_scenario = small_config("x");
    bad_scenario.replace(bad_scenario.find("oscillator-stationary"), 21, "no-such-thing-abc");
    CHECK_THROWS_AS(cli::ScenarioConfig::from_json_text(bad_scenario), cli::ConfigError);

    // invalid grid surfaces the core validator by name
    auto bad_grid = small_config("x");
    bad_grid.replace(bad_grid.find("\"n\": 128"), 8, "\"n\": 7");
    try {
        cli::ScenarioConfig::from_json_text(bad_grid);
        FAIL("expected a grid error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("make_grid") != std::string::npos);
    }
}

TEST_CASE("scenario run: toggles control outputs, report is reproducible") {
    const fs::path dir = fs::temp_directory_path() / "nwlab_cli_test";
    fs::remove_all(dir);

    const auto cfg = cli::ScenarioConfig::from_json_text(small_config(dir.string()));
    cli::RunOptions opts;
    opts.plots = false;
    const auto rep = cli::run_scenario(cfg, opts);

    CHECK(rep.all_pass());
    CHECK(fs::exists(dir / "density.tsv"));
    CHECK(fs::exists(dir / "drift.tsv"));
    CHECK(fs::exists(dir / "wigner.tsv"));
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "MANIFEST"));
    CHECK(slurp(dir / "MANIFEST").find("status: complete") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "density_overlay.svg"));  // plots off

    SUBCASE("wigner off means no phase-space files") {
        const fs::path dir2 = fs::temp_directory_path() / "nwlab_cli_test_nowigner";
        fs::remove_all(dir2);
        const auto cfg2 = cli::ScenarioConfig::from_json_text(small_config(
            dir2.string(), 7,
            "\"wigner\": false, \"dispersion\": true, \"force_balance\": true, "
            "\"hydro\": false, \"parabolic\": false"));
        const auto rep2 = cli::run_scenario(cfg2, opts);
        CHECK_FALSE(fs::exists(dir2 / "wigner.tsv"));
        CHECK(rep2.find("wigner_two_route_max_diff") == nullptr);
        fs::remove_all(dir2);
    }

    SUBCASE("fixed seed reproduces tables byte-for-byte across thread counts") {
        const std::string density_one = slurp(dir / "density.tsv");
        const std::string drift_one = slurp(dir / "drift.tsv");
        const std::string report_one = slurp(dir / "report.json");

        const fs::path dir4 = fs::temp_directory_path() / "nwlab_cli_test_t4";
        fs::remove_all(dir4);
        simd::set_threads(4);
        const auto cfg4 = cli::ScenarioConfig::from_json_text(small_config(dir4.string()));
        auto rep4 = cli::run_scenario(cfg4, opts);
        simd::set_threads(1);

        // output location is excluded from the content hash, so the
        // files match byte for byte
        CHECK(slurp(dir4 / "density.tsv") == density_one);
        CHECK(slurp(dir4 / "drift.tsv") == drift_one);
        CHECK(slurp(dir4 / "report.json") == report_one);
        fs::remove_all(dir4);
    }

    SUBCASE("a different seed changes the Monte Carlo tables") {
        const fs::path dir9 = fs::temp_directory_path() / "nwlab_cli_test_seed9";
        fs::remove_all(dir9);
        const auto cfg9 = cli::ScenarioConfig::from_json_text(small_config(dir9.string(), 9));
        cli::run_scenario(cfg9, opts);
        CHECK(slurp(dir9 / "density.tsv") != slurp(dir / "density.tsv"));
        fs::remove_all(dir9);
    }

    fs::remove_all(dir);
}

TEST_CASE("failed stage leaves a MANIFEST naming it") {
    const fs::path dir = fs::temp_directory_path() / "nwlab_cli_fail";
    fs::remove_all(dir);
    // coherent-slosh demands a harmonic potential; free triggers the
    // config check after the directory exists
    auto cfg = cli::ScenarioConfig::from_json_text(small_config(dir.string()));
    cfg.scenario = "coherent-slosh";
    cfg.potential = core::Potential::free();
    CHECK_THROWS_AS(cli::run_scenario(cfg, {}), cli::ConfigError);
    CHECK(fs::exists(dir / "MANIFEST"));
    CHECK(slurp(dir / "MANIFEST").find("failed at") != std::string::npos);
    fs::remove_all(dir);
}
