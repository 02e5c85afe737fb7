#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tilekmc/complexity.hpp"
#include "tilekmc/engine.hpp"

namespace tilekmc {

inline constexpr const char* kConfigVersion = "tilekmc-config/1";

/// Experiment configuration: the four binding-energy ranges that are
/// swept, plus the fixed run parameters. A single simulation is the
/// degenerate case where every range holds one value.
///
/// JSON schema (version "tilekmc-config/1"): each energy range is either
/// an array of values or {"from": a, "to": b, "step": s}; unknown keys
/// are rejected.
struct SweepConfig {
    int lattice_side = 256;
    double max_coverage = 0.25;
    double E_r = 1.3;
    double TT0 = 0.028;
    double R_Dep = 5e-5;
    long steps = 0; // 0 -> default of 40 deposition-scale events per admissible tile
    std::vector<double> E_s{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> E_11{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> E_22{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> E_12{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<std::uint64_t> seeds{1};
    std::array<double, 2> concentrations{0.5, 0.5};

    long max_tiles() const;
    long resolved_steps() const;

    /// True when every energy range is a single value.
    bool single_point() const;
};

SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const SweepConfig& config);

/// One grid point with its seed and stable identifier.
struct RunSpec {
    ParamPoint point;
    std::uint64_t seed = 0;
    std::string run_id;
};

std::string make_run_id(const ParamPoint& point, std::uint64_t seed);

/// Cartesian product of the four ranges and the seed list, in fixed
/// order (E_s, E_11, E_22, E_12 outer to inner, then seeds).
/// Errors: empty_range.
std::vector<RunSpec> expand(const SweepConfig& config);

/// Simulation configuration for one grid point: two iso-functionalised
/// species with labels 0 and 1 and the point's binding energies.
SimConfig make_sim_config(const SweepConfig& config, const RunSpec& spec);

} // namespace tilekmc
