#include "nwlab/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nwlab::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            throw ConfigError(std::string("config: unknown key '") + key + "' in " + where);
    }
}

double need_number(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ConfigError(std::string("config: ") + where + " needs numeric '" + key + "'");
    return obj[key].get<double>();
}

std::uint64_t need_uint(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number_unsigned())
        throw ConfigError(std::string("config: ") + where + " needs unsigned '" + key + "'");
    return obj[key].get<std::uint64_t>();
}

bool need_bool(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key) || !obj[key].is_boolean())
        throw ConfigError(std::string("config: ") + where + " needs boolean '" + key + "'");
    return obj[key].get<bool>();
}

core::Potential parse_potential(const json& p) {
    reject_unknown(p, "potential", {"type", "omega", "width", "coefficients", "samples"});
    if (!p.contains("type") || !p["type"].is_string())
        throw ConfigError("config: potential needs a string 'type'");
    const std::string type = p["type"].get<std::string>();
    if (type == "free") return core::Potential::free();
    if (type == "harmonic") return core::Potential::harmonic(need_number(p, "potential", "omega"));
    if (type == "box") return core::Potential::box(need_number(p, "potential", "width"));
    if (type == "polynomial") {
        if (!p.contains("coefficients") || !p["coefficients"].is_array())
            throw ConfigError("config: polynomial potential needs 'coefficients'");
        return core::Potential::polynomial(p["coefficients"].get<std::vector<double>>());
    }
    if (type == "tabulated") {
        if (!p.contains("samples") || !p["samples"].is_array())
            throw ConfigError("config: tabulated potential needs 'samples'");
        return core::Potential::tabulated(p["samples"].get<std::vector<double>>());
    }
    throw ConfigError("config: unknown potential type '" + type + "'");
}

json potential_to_json(const core::Potential& pot) {
    json out;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, core::FreePotential>) {
                out["type"] = "free";
            } else if constexpr (std::is_same_v<T, core::HarmonicPotential>) {
                out["type"] = "harmonic";
                out["omega"] = p.omega;
            } else if constexpr (std::is_same_v<T, core::BoxPotential>) {
                out["type"] = "box";
                out["width"] = p.width;
            } else if constexpr (std::is_same_v<T, core::PolynomialPotential>) {
                out["type"] = "polynomial";
                out["coefficients"] = p.coeffs;
            } else {
                out["type"] = "tabulated";
                out["samples"] = p.samples;
            }
        },
        pot.raw());
    return out;
}

}  // namespace

const std::vector<std::string>& ScenarioConfig::known_scenarios() {
    static const std::vector<std::string> names = {
        "oscillator-stationary", "oscillator-excited", "free-packet", "coherent-slosh",
        "custom"};
    return names;
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j, "top level",
                   {"scenario", "grid", "units", "potential", "ensemble", "analyses",
                    "output_dir"});

    ScenarioConfig cfg;
    if (!j.contains("scenario") || !j["scenario"].is_string())
        throw ConfigError("config: needs string 'scenario'");
    cfg.scenario = j["scenario"].get<std::string>();
    const auto& names = known_scenarios();
    if (std::find(names.begin(), names.end(), cfg.scenario) == names.end())
        throw ConfigError("config: unknown scenario '" + cfg.scenario + "'");

    if (!j.contains("grid") || !j["grid"].is_object())
        throw ConfigError("config: needs object 'grid'");
    reject_unknown(j["grid"], "grid", {"x_min", "x_max", "n"});
    cfg.grid = core::make_grid(need_number(j["grid"], "grid", "x_min"),
                               need_number(j["grid"], "grid", "x_max"),
                               static_cast<std::size_t>(need_uint(j["grid"], "grid", "n")));

    if (!j.contains("units") || !j["units"].is_object())
        throw ConfigError("config: needs object 'units'");
    reject_unknown(j["units"], "units", {"hbar", "mass"});
    cfg.units = core::SimUnits(need_number(j["units"], "units", "hbar"),
                               need_number(j["units"], "units", "mass"));

    if (!j.contains("potential") || !j["potential"].is_object())
        throw ConfigError("config: needs object 'potential'");
    cfg.potential = parse_potential(j["potential"]);

    if (!j.contains("ensemble") || !j["ensemble"].is_object())
        throw ConfigError("config: needs object 'ensemble'");
    reject_unknown(j["ensemble"], "ensemble", {"particles", "dt", "steps", "seed", "lag"});
    cfg.ensemble.particles =
        static_cast<std::size_t>(need_uint(j["ensemble"], "ensemble", "particles"));
    cfg.ensemble.dt = need_number(j["ensemble"], "ensemble", "dt");
    cfg.ensemble.steps = static_cast<std::size_t>(need_uint(j["ensemble"], "ensemble", "steps"));
    cfg.ensemble.seed = need_uint(j["ensemble"], "ensemble", "seed");
    cfg.ensemble.lag = static_cast<std::size_t>(need_uint(j["ensemble"], "ensemble", "lag"));
    if (!(cfg.ensemble.dt > 0.0)) throw ConfigError("config: ensemble.dt must be positive");
    if (cfg.ensemble.lag < 1) throw ConfigError("config: ensemble.lag must be >= 1");

    if (!j.contains("analyses") || !j["analyses"].is_object())
        throw ConfigError("config: needs object 'analyses'");
    reject_unknown(j["analyses"], "analyses",
                   {"wigner", "dispersion", "force_balance", "hydro", "parabolic"});
    cfg.analyses.wigner = need_bool(j["analyses"], "analyses", "wigner");
    cfg.analyses.dispersion = need_bool(j["analyses"], "analyses", "dispersion");
    cfg.analyses.force_balance = need_bool(j["analyses"], "analyses", "force_balance");
    cfg.analyses.hydro = need_bool(j["analyses"], "analyses", "hydro");
    cfg.analyses.parabolic = need_bool(j["analyses"], "analyses", "parabolic");

    if (!j.contains("output_dir") || !j["output_dir"].is_string())
        throw ConfigError("config: needs string 'output_dir'");
    cfg.output_dir = j["output_dir"].get<std::string>();
    return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ScenarioConfig::to_json_text() const {
    json j;
    j["scenario"] = scenario;
    j["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"n", grid.n}};
    j["units"] = {{"hbar", units.hbar}, {"mass", units.mass}};
    j["potential"] = potential_to_json(potential);
    j["ensemble"] = {{"particles", ensemble.particles},
                     {"dt", ensemble.dt},
                     {"steps", ensemble.steps},
                     {"seed", ensemble.seed},
                     {"lag", ensemble.lag}};
    j["analyses"] = {{"wigner", analyses.wigner},
                     {"dispersion", analyses.dispersion},
                     {"force_balance", analyses.force_balance},
                     {"hydro", analyses.hydro},
                     {"parabolic", analyses.parabolic}};
    j["output_dir"] = output_dir;
    return j.dump(2);  // nlohmann sorts object keys: canonical
}

std::string ScenarioConfig::content_hash() const {
    // Hash of the physics content; output_dir only says where results
    // land, so relocated reruns keep the same provenance hash.
    ScenarioConfig canonical = *this;
    canonical.output_dir = "";
    const std::string text = canonical.to_json_text();
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace nwlab::cli
