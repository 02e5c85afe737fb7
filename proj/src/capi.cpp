#include "tilekmc.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>

#include "tilekmc/analysis.hpp"
#include "tilekmc/config.hpp"
#include "tilekmc/sweep.hpp"

namespace {

thread_local std::string g_last_error;

tkmc_status status_of(const tilekmc::Error& e) {
    using tilekmc::Errc;
    switch (e.code()) {
        case Errc::bad_config:
        case Errc::empty_range:
            return TKMC_EBADCONFIG;
        case Errc::io_failure:
            return TKMC_EIO;
        case Errc::invalid_argument:
        case Errc::unknown_label:
        case Errc::bad_k:
        case Errc::too_few_points:
        case Errc::empty_input:
        case Errc::zero_length:
            return TKMC_EINVAL;
        default:
            return TKMC_ERUNTIME;
    }
}

template <typename Fn>
tkmc_status guarded(Fn&& fn) {
    try {
        fn();
        return TKMC_OK;
    } catch (const tilekmc::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TKMC_ERUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return TKMC_ERUNTIME;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

tkmc_status require(bool ok, const char* message) {
    if (ok) return TKMC_OK;
    g_last_error = message;
    return TKMC_EINVAL;
}

} // namespace

struct tkmc_config {
    tilekmc::SweepConfig config;
};

struct tkmc_result {
    tilekmc::RunRecord record;
};

extern "C" {

const char* tkmc_version(void) { return "0.1.0"; }

const char* tkmc_last_error(void) { return g_last_error.c_str(); }

tkmc_status tkmc_config_load(const char* path, tkmc_config** out) {
    if (require(path && out, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] { *out = new tkmc_config{tilekmc::load_config(path)}; });
}

tkmc_status tkmc_config_parse(const char* json_text, tkmc_config** out) {
    if (require(json_text && out, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] { *out = new tkmc_config{tilekmc::parse_config(json_text)}; });
}

void tkmc_config_free(tkmc_config* config) { delete config; }

tkmc_status tkmc_config_to_json(const tkmc_config* config, char** out) {
    if (require(config && out, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] { *out = dup_string(tilekmc::config_to_json(config->config)); });
}

void tkmc_string_free(char* s) { delete[] s; }

tkmc_status tkmc_config_run_count(const tkmc_config* config, size_t* out) {
    if (require(config && out, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] { *out = tilekmc::expand(config->config).size(); });
}

tkmc_status tkmc_config_first_seed(const tkmc_config* config, uint64_t* out) {
    if (require(config && out, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] { *out = config->config.seeds.front(); });
}

tkmc_status tkmc_simulate(const tkmc_config* config, uint64_t seed, const char* out_dir,
                          const char* events_path, tkmc_result** out) {
    if (require(config && out_dir && out, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] {
        const tilekmc::SweepConfig& c = config->config;
        if (!c.single_point())
            tilekmc::raise(tilekmc::Errc::bad_config,
                           "simulate requires a single-point config (every energy range "
                           "must hold exactly one value)");
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);

        tilekmc::RunSpec spec{
            {c.E_s[0], c.E_11[0], c.E_22[0], c.E_12[0]},
            seed,
            tilekmc::make_run_id({c.E_s[0], c.E_11[0], c.E_22[0], c.E_12[0]}, seed)};
        tilekmc::RunRecord record = tilekmc::run_one(
            c, spec, dir, events_path ? std::filesystem::path(events_path) : std::filesystem::path());

        std::ofstream manifest(dir / "manifest.jsonl", std::ios::app);
        if (!manifest)
            tilekmc::raise(tilekmc::Errc::io_failure, "cannot append to manifest");
        manifest << tilekmc::record_to_json(record) << '\n';

        *out = new tkmc_result{std::move(record)};
    });
}

void tkmc_result_free(tkmc_result* result) { delete result; }

const char* tkmc_result_run_id(const tkmc_result* result) {
    return result ? result->record.run_id.c_str() : "";
}

tkmc_status tkmc_result_to_json(const tkmc_result* result, char** out) {
    if (require(result && out, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] { *out = dup_string(tilekmc::record_to_json(result->record)); });
}

double tkmc_result_ratio(const tkmc_result* result) {
    return result ? result->record.ratio : 0.0;
}

int64_t tkmc_result_c_bits(const tkmc_result* result) {
    return result ? result->record.c_bits : 0;
}

int tkmc_result_aggregates(const tkmc_result* result) {
    return result ? result->record.aggregate_count : 0;
}

double tkmc_result_hetero_bond_fraction(const tkmc_result* result) {
    return result ? result->record.hetero_bond_fraction : 0.0;
}

tkmc_status tkmc_sweep(const tkmc_config* config, const char* out_dir, int jobs, int resume,
                       size_t* executed, size_t* skipped) {
    if (require(config && out_dir, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] {
        tilekmc::ExecuteOptions options;
        options.jobs = jobs;
        options.resume = resume != 0;
        const tilekmc::SweepOutcome outcome =
            tilekmc::execute(config->config, out_dir, options);
        if (!outcome.failed_run_ids.empty())
            tilekmc::raise(tilekmc::Errc::io_failure,
                           std::to_string(outcome.failed_run_ids.size()) +
                               " run(s) failed, first: " + outcome.failed_run_ids.front());
        if (executed) *executed = outcome.executed;
        if (skipped) *skipped = outcome.skipped;
    });
}

tkmc_status tkmc_manifest_check(const char* manifest_path, size_t* records) {
    if (require(manifest_path, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] {
        const auto loaded = tilekmc::load_manifest(manifest_path);
        if (records) *records = loaded.size();
    });
}

tkmc_status tkmc_analyze(const char* manifest_path, const char* mode, const char* varied,
                         const char* out_dir) {
    if (require(manifest_path && mode && out_dir, "null argument") != TKMC_OK)
        return TKMC_EINVAL;
    return guarded([&] {
        const std::filesystem::path manifest(manifest_path);
        const std::filesystem::path manifest_dir = manifest.parent_path();
        const auto records = tilekmc::load_manifest(manifest);
        const std::string m(mode);
        if (m == "ratio")
            tilekmc::analyze_ratio(records, manifest_dir, out_dir, /*gallery=*/true);
        else if (m == "ncd")
            tilekmc::analyze_ncd(records, manifest_dir, out_dir, /*on_png=*/false);
        else if (m == "correlation")
            tilekmc::analyze_correlation(records, out_dir);
        else if (m == "transition")
            tilekmc::analyze_transition(records, out_dir);
        else if (m == "ortho")
            tilekmc::analyze_ortho(records, varied ? varied : "E_12", 0.02, out_dir);
        else
            tilekmc::raise(tilekmc::Errc::invalid_argument,
                           "unknown analyze mode '" + m + "'");
    });
}

tkmc_status tkmc_cluster(const char* manifest_path, const char* metric, int k, uint64_t seed,
                         const char* out_dir) {
    if (require(manifest_path && metric && out_dir, "null argument") != TKMC_OK)
        return TKMC_EINVAL;
    return guarded([&] {
        const std::filesystem::path manifest(manifest_path);
        const auto records = tilekmc::load_manifest(manifest);
        tilekmc::cluster_records(records, manifest.parent_path(), metric, k, seed, out_dir);
    });
}

tkmc_status tkmc_report(const char* manifest_path, const char* sort_key, int columns,
                        const char* out_dir) {
    if (require(manifest_path && sort_key && out_dir, "null argument") != TKMC_OK)
        return TKMC_EINVAL;
    return guarded([&] {
        const std::filesystem::path manifest(manifest_path);
        const auto records = tilekmc::load_manifest(manifest);
        tilekmc::report_gallery(records, manifest.parent_path(), sort_key, columns, out_dir);
    });
}

tkmc_status tkmc_compress_len(const uint8_t* data, size_t len, int64_t* bits) {
    if (require(data && bits, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] { *bits = tilekmc::compress_len_bits({data, len}); });
}

tkmc_status tkmc_ncd(const uint8_t* a, size_t a_len, const uint8_t* b, size_t b_len,
                     double* out) {
    if (require(a && b && out, "null argument") != TKMC_OK) return TKMC_EINVAL;
    return guarded([&] { *out = tilekmc::ncd({a, a_len}, {b, b_len}); });
}

} // extern "C"
