#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tilekmc/config.hpp"

namespace tilekmc {

/// One simulation's inputs and measured outputs; a manifest is one JSON
/// record per line. File paths are stored relative to the manifest.
struct RunRecord {
    std::string run_id;
    ParamPoint point;
    std::uint64_t seed = 0;
    std::string png_path;
    std::string raw_path;
    std::int64_t raw_len = 0;
    std::int64_t c_bits = 0;
    double ratio = 0.0;
    double dist = 0.0;
    int aggregate_count = 0;
    int singletons = 0;
    double hetero_bond_fraction = 0.0;
    RunCounters counters;
};

std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& line);

/// Simulates one grid point and writes <run_id>.png and <run_id>.raw
/// into out_dir. A non-empty events_path receives the tab-separated
/// event log (step, kind, row, col, activation).
RunRecord run_one(const SweepConfig& config, const RunSpec& spec,
                  const std::filesystem::path& out_dir,
                  const std::filesystem::path& events_path = {});

struct ExecuteOptions {
    int jobs = 1;
    bool resume = false;
    /// Called after each completed run with (done, total).
    std::function<void(std::size_t, std::size_t)> progress;
    /// Test hook: stop claiming work after this many claims, simulating
    /// an interrupted sweep. < 0 means no limit.
    long stop_after = -1;
};

struct SweepOutcome {
    std::vector<RunRecord> records;          // all completed runs, expand order
    std::size_t executed = 0;                // freshly simulated this call
    std::size_t skipped = 0;                 // satisfied from the manifest (resume)
    std::vector<std::string> failed_run_ids; // per-run failures, sweep continued
};

/// Runs every expanded point over a bounded worker pool. The manifest
/// (out_dir / "manifest.jsonl") is the single serialization point:
/// records are appended atomically one line at a time. With resume,
/// run_ids already present are not recomputed; without it the manifest
/// is started afresh. Errors: io_failure.
SweepOutcome execute(const SweepConfig& config, const std::filesystem::path& out_dir,
                     const ExecuteOptions& options = {});

std::vector<RunRecord> load_manifest(const std::filesystem::path& manifest_path);

enum class OrthoClass { increasing, reversed, flat };
const char* ortho_class_name(OrthoClass c) noexcept;

/// Single-parameter sensitivity group: three parameters fixed, one
/// varied in ascending order, with the compressed-length deltas between
/// consecutive points.
struct OrthoGroup {
    ParamPoint fixed;             // varied field is 0 here
    std::vector<double> varied;   // ascending parameter values
    std::vector<double> c_bits;   // mean C at each value
    std::vector<double> deltas;   // consecutive differences of c_bits
    OrthoClass classification = OrthoClass::flat;
    bool incomplete = false;      // group missing grid values; flagged, not fatal
};

struct OrthoReport {
    std::string varied_param;
    double tau = 0.02; // flat threshold on |delta C| / max C in the group
    std::vector<OrthoGroup> groups;
};

/// Groups records by the three non-varied parameters and classifies the
/// C-vs-parameter trend of each group: flat when every |delta| is
/// within tau * max C, reversed when any delta falls below -tau * max C
/// (C decreases while the parameter increases), increasing otherwise.
/// varied_param is one of "E_s", "E_11", "E_22", "E_12".
OrthoReport orthogonality_report(const std::vector<RunRecord>& records,
                                 const std::string& varied_param, double tau = 0.02);

} // namespace tilekmc
