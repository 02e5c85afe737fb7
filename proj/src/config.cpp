#include "tilekmc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tilekmc {

using nlohmann::json;

long SweepConfig::max_tiles() const {
    const double sites = static_cast<double>(lattice_side) * lattice_side;
    return static_cast<long>(std::floor(max_coverage * sites + 1e-9));
}

long SweepConfig::resolved_steps() const {
    return steps > 0 ? steps : 40 * max_tiles();
}

bool SweepConfig::single_point() const {
    return E_s.size() == 1 && E_11.size() == 1 && E_22.size() == 1 && E_12.size() == 1;
}

namespace {

std::vector<double> parse_range(const json& value, const std::string& key) {
    std::vector<double> out;
    if (value.is_array()) {
        for (const auto& v : value) {
            if (!v.is_number()) raise(Errc::bad_config, key + " entries must be numbers");
            out.push_back(v.get<double>());
        }
    } else if (value.is_object()) {
        for (const auto& [k, _] : value.items())
            if (k != "from" && k != "to" && k != "step")
                raise(Errc::bad_config, key + " range has unknown key '" + k + "'");
        if (!value.contains("from") || !value.contains("to") || !value.contains("step"))
            raise(Errc::bad_config, key + " range needs from/to/step");
        const double from = value["from"].get<double>();
        const double to = value["to"].get<double>();
        const double step = value["step"].get<double>();
        if (step <= 0.0) raise(Errc::bad_config, key + " range step must be > 0");
        for (double v = from; v <= to + 1e-12; v += step) out.push_back(v);
    } else if (value.is_number()) {
        out.push_back(value.get<double>());
    } else {
        raise(Errc::bad_config, key + " must be a number, array or from/to/step range");
    }
    if (out.empty()) raise(Errc::empty_range, key + " expands to no values");
    return out;
}

void validate(const SweepConfig& c) {
    if (c.lattice_side < 2) raise(Errc::bad_config, "lattice_side must be >= 2");
    if (c.max_coverage <= 0.0 || c.max_coverage > 1.0)
        raise(Errc::bad_config, "max_coverage must be in (0,1]");
    if (c.E_r < 0.0 || c.TT0 <= 0.0 || c.R_Dep < 0.0)
        raise(Errc::bad_config, "E_r >= 0, TT0 > 0 and R_Dep >= 0 required");
    if (c.steps < 0) raise(Errc::bad_config, "steps must be >= 0");
    for (const auto* range : {&c.E_s, &c.E_11, &c.E_22, &c.E_12}) {
        if (range->empty()) raise(Errc::empty_range, "energy range is empty");
        for (double v : *range)
            if (v < 0.0) raise(Errc::bad_config, "binding energies must be >= 0");
    }
    if (c.seeds.empty()) raise(Errc::empty_range, "seed list is empty");
    std::set<std::uint64_t> unique(c.seeds.begin(), c.seeds.end());
    if (unique.size() != c.seeds.size())
        raise(Errc::bad_config, "seed list contains duplicates");
    const double total = c.concentrations[0] + c.concentrations[1];
    if (c.concentrations[0] < 0.0 || c.concentrations[1] < 0.0 || std::abs(total - 1.0) > 1e-9)
        raise(Errc::bad_config, "concentrations must be >= 0 and sum to 1");
}

} // namespace

SweepConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        raise(Errc::bad_config, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) raise(Errc::bad_config, "config must be a JSON object");
    if (!doc.contains("version") || doc["version"] != kConfigVersion)
        raise(Errc::bad_config, std::string("config version must be \"") + kConfigVersion + "\"");

    static const std::set<std::string> known = {
        "version", "lattice_side", "max_coverage", "E_r",   "TT0",  "R_Dep",
        "steps",   "E_s",          "E_11",         "E_22",  "E_12", "seeds",
        "concentrations"};
    for (const auto& [key, _] : doc.items())
        if (!known.contains(key)) raise(Errc::bad_config, "unknown config key '" + key + "'");

    SweepConfig c;
    if (doc.contains("lattice_side")) c.lattice_side = doc["lattice_side"].get<int>();
    if (doc.contains("max_coverage")) c.max_coverage = doc["max_coverage"].get<double>();
    if (doc.contains("E_r")) c.E_r = doc["E_r"].get<double>();
    if (doc.contains("TT0")) c.TT0 = doc["TT0"].get<double>();
    if (doc.contains("R_Dep")) c.R_Dep = doc["R_Dep"].get<double>();
    if (doc.contains("steps")) c.steps = doc["steps"].get<long>();
    if (doc.contains("E_s")) c.E_s = parse_range(doc["E_s"], "E_s");
    if (doc.contains("E_11")) c.E_11 = parse_range(doc["E_11"], "E_11");
    if (doc.contains("E_22")) c.E_22 = parse_range(doc["E_22"], "E_22");
    if (doc.contains("E_12")) c.E_12 = parse_range(doc["E_12"], "E_12");
    if (doc.contains("seeds")) {
        c.seeds.clear();
        for (const auto& s : doc["seeds"]) c.seeds.push_back(s.get<std::uint64_t>());
    }
    if (doc.contains("concentrations")) {
        const auto& arr = doc["concentrations"];
        if (!arr.is_array() || arr.size() != 2)
            raise(Errc::bad_config, "concentrations must be a 2-element array");
        c.concentrations = {arr[0].get<double>(), arr[1].get<double>()};
    }
    validate(c);
    return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_failure, "cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const SweepConfig& c) {
    json doc;
    doc["version"] = kConfigVersion;
    doc["lattice_side"] = c.lattice_side;
    doc["max_coverage"] = c.max_coverage;
    doc["E_r"] = c.E_r;
    doc["TT0"] = c.TT0;
    doc["R_Dep"] = c.R_Dep;
    doc["steps"] = c.resolved_steps();
    doc["E_s"] = c.E_s;
    doc["E_11"] = c.E_11;
    doc["E_22"] = c.E_22;
    doc["E_12"] = c.E_12;
    doc["seeds"] = c.seeds;
    doc["concentrations"] = c.concentrations;
    return doc.dump();
}

std::string make_run_id(const ParamPoint& point, std::uint64_t seed) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "es%.3f_e11_%.3f_e22_%.3f_e12_%.3f_s%llu", point.E_s,
                  point.E_11, point.E_22, point.E_12,
                  static_cast<unsigned long long>(seed));
    return buf;
}

std::vector<RunSpec> expand(const SweepConfig& config) {
    validate(config);
    std::vector<RunSpec> out;
    out.reserve(config.E_s.size() * config.E_11.size() * config.E_22.size() *
                config.E_12.size() * config.seeds.size());
    for (double es : config.E_s)
        for (double e11 : config.E_11)
            for (double e22 : config.E_22)
                for (double e12 : config.E_12)
                    for (std::uint64_t seed : config.seeds) {
                        const ParamPoint p{es, e11, e22, e12};
                        out.push_back({p, seed, make_run_id(p, seed)});
                    }
    return out;
}

SimConfig make_sim_config(const SweepConfig& config, const RunSpec& spec) {
    std::vector<SpeciesDescriptor> species = {
        {1, {0, 0, 0, 0}, config.concentrations[0]},
        {2, {1, 1, 1, 1}, config.concentrations[1]},
    };
    return SimConfig{
        config.lattice_side,
        SpeciesSet(std::move(species), 2),
        EnergyModel::two_species(spec.point.E_11, spec.point.E_22, spec.point.E_12,
                                 spec.point.E_s, config.E_r, config.TT0, config.R_Dep),
        config.max_coverage,
        config.resolved_steps(),
        spec.seed,
    };
}

} // namespace tilekmc
