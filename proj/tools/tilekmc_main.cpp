// tilekmc: kinetic Monte Carlo tile self-assembly simulations and
// compression-based analysis of their results. The CLI is a thin front
// end over the tilekmc C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "tilekmc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;  // bad configuration, flags or input files
constexpr int kExitRuntime = 2; // execution failure

int exit_code_for(tkmc_status status) {
    switch (status) {
        case TKMC_OK: return kExitOk;
        case TKMC_EBADCONFIG:
        case TKMC_EINVAL: return kExitConfig;
        default: return kExitRuntime;
    }
}

int fail(tkmc_status status) {
    std::fprintf(stderr, "tilekmc: error: %s\n", tkmc_last_error());
    return exit_code_for(status);
}

// --out default: $TILEKMC_OUT (or ./out) plus the config/manifest stem.
std::string default_out(const std::string& input_path) {
    const char* root = std::getenv("TILEKMC_OUT");
    const std::filesystem::path base = root && *root ? root : "out";
    return (base / std::filesystem::path(input_path).stem()).string();
}

struct ConfigHandle {
    tkmc_config* ptr = nullptr;
    ~ConfigHandle() { tkmc_config_free(ptr); }
};

int load_config_or_fail(const std::string& path, ConfigHandle& handle) {
    const tkmc_status rc = tkmc_config_load(path.c_str(), &handle.ptr);
    if (rc != TKMC_OK) {
        std::fprintf(stderr, "tilekmc: config error: %s\n", tkmc_last_error());
        return kExitConfig;
    }
    return kExitOk;
}

void print_resolved_config(const tkmc_config* config) {
    char* json = nullptr;
    if (tkmc_config_to_json(config, &json) == TKMC_OK) {
        std::printf("config: %s\n", json);
        tkmc_string_free(json);
    }
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, bool seed_given,
                 std::string out_dir, const std::string& events_path) {
    ConfigHandle config;
    if (int rc = load_config_or_fail(config_path, config)) return rc;
    if (out_dir.empty()) out_dir = default_out(config_path);

    if (!seed_given) tkmc_config_first_seed(config.ptr, &seed); // first configured seed

    print_resolved_config(config.ptr);
    std::printf("seed: %llu\n", static_cast<unsigned long long>(seed));

    tkmc_result* result = nullptr;
    const tkmc_status rc =
        tkmc_simulate(config.ptr, seed, out_dir.c_str(),
                      events_path.empty() ? nullptr : events_path.c_str(), &result);
    if (rc != TKMC_OK) return fail(rc);

    char* record = nullptr;
    tkmc_result_to_json(result, &record);
    std::printf("%s\n", record ? record : "{}");
    tkmc_string_free(record);
    tkmc_result_free(result);
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::string out_dir, int jobs, bool resume) {
    ConfigHandle config;
    if (int rc = load_config_or_fail(config_path, config)) return rc;
    if (out_dir.empty()) out_dir = default_out(config_path);

    print_resolved_config(config.ptr);
    size_t total = 0;
    tkmc_config_run_count(config.ptr, &total);
    std::printf("runs: %zu, jobs: %d, out: %s\n", total, jobs, out_dir.c_str());

    size_t executed = 0, skipped = 0;
    const tkmc_status rc =
        tkmc_sweep(config.ptr, out_dir.c_str(), jobs, resume ? 1 : 0, &executed, &skipped);
    if (rc != TKMC_OK) return fail(rc);
    std::printf("completed: %zu new, %zu resumed\n", executed, skipped);
    return kExitOk;
}

int check_manifest(const std::string& manifest) {
    size_t records = 0;
    if (tkmc_manifest_check(manifest.c_str(), &records) != TKMC_OK) {
        std::fprintf(stderr, "tilekmc: manifest error: %s\n", tkmc_last_error());
        return kExitConfig;
    }
    std::printf("manifest: %s (%zu records)\n", manifest.c_str(), records);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Programmable tile self-assembly kMC simulator and complexity analyses"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config, sim_out, sim_events;
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "Run one simulation");
    simulate->add_option("--config", sim_config, "Config file (tilekmc-config/1)")->required();
    auto* seed_opt = simulate->add_option("--seed", sim_seed, "Override the run seed");
    simulate->add_option("--out", sim_out, "Output directory (default $TILEKMC_OUT/<stem>)");
    simulate->add_option("--events", sim_events, "Write the per-event log to this file");

    // sweep
    std::string sweep_config, sweep_out;
    int sweep_jobs = 1;
    bool sweep_resume = false;
    auto* sweep = app.add_subcommand("sweep", "Run the full parameter grid");
    sweep->add_option("--config", sweep_config, "Config file (tilekmc-config/1)")->required();
    sweep->add_option("--out", sweep_out, "Output directory (default $TILEKMC_OUT/<stem>)");
    sweep->add_option("--jobs", sweep_jobs, "Parallel workers")->check(CLI::PositiveNumber);
    sweep->add_flag("--resume", sweep_resume, "Skip runs already in the manifest");

    // analyze
    std::string an_manifest, an_mode, an_varied = "E_12", an_out;
    auto* analyze = app.add_subcommand("analyze", "Analyze a sweep manifest");
    analyze->add_option("--manifest", an_manifest, "manifest.jsonl from a sweep")->required();
    analyze->add_option("--mode", an_mode, "ratio|ncd|correlation|transition|ortho")
        ->required()
        ->check(CLI::IsMember({"ratio", "ncd", "correlation", "transition", "ortho"}));
    analyze->add_option("--varied", an_varied, "Varied parameter for --mode ortho");
    analyze->add_option("--out", an_out, "Output directory (default $TILEKMC_OUT/<stem>)");

    // cluster
    std::string cl_manifest, cl_metric, cl_out;
    int cl_k = 2;
    std::uint64_t cl_seed = 1;
    auto* cluster = app.add_subcommand("cluster", "Cluster runs by ratio or NCD");
    cluster->add_option("--manifest", cl_manifest, "manifest.jsonl from a sweep")->required();
    cluster->add_option("--metric", cl_metric, "ncd|ratio")
        ->required()
        ->check(CLI::IsMember({"ncd", "ratio"}));
    cluster->add_option("--k", cl_k, "Number of clusters")->required();
    cluster->add_option("--seed", cl_seed, "Seed for representative selection");
    cluster->add_option("--out", cl_out, "Output directory (default $TILEKMC_OUT/<stem>)");

    // report
    std::string rp_manifest, rp_sort = "ratio", rp_out;
    int rp_columns = 8;
    auto* report = app.add_subcommand("report", "Contact-sheet gallery of run rasters");
    report->add_option("--manifest", rp_manifest, "manifest.jsonl from a sweep")->required();
    report->add_option("--sort", rp_sort, "ratio|dist|C")
        ->check(CLI::IsMember({"ratio", "dist", "C"}));
    report->add_option("--columns", rp_columns, "Gallery columns")->check(CLI::PositiveNumber);
    report->add_option("--out", rp_out, "Output directory (default $TILEKMC_OUT/<stem>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (simulate->parsed())
        return cmd_simulate(sim_config, sim_seed, seed_opt->count() > 0, sim_out, sim_events);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_jobs, sweep_resume);

    if (analyze->parsed()) {
        if (int rc = check_manifest(an_manifest)) return rc;
        if (an_out.empty()) an_out = default_out(an_manifest);
        const tkmc_status rc = tkmc_analyze(an_manifest.c_str(), an_mode.c_str(),
                                            an_varied.c_str(), an_out.c_str());
        if (rc != TKMC_OK) return fail(rc);
        std::printf("reports written to %s\n", an_out.c_str());
        return kExitOk;
    }
    if (cluster->parsed()) {
        if (int rc = check_manifest(cl_manifest)) return rc;
        if (cl_out.empty()) cl_out = default_out(cl_manifest);
        const tkmc_status rc =
            tkmc_cluster(cl_manifest.c_str(), cl_metric.c_str(), cl_k, cl_seed, cl_out.c_str());
        if (rc != TKMC_OK) return fail(rc);
        std::printf("cluster outputs written to %s\n", cl_out.c_str());
        return kExitOk;
    }
    if (report->parsed()) {
        if (int rc = check_manifest(rp_manifest)) return rc;
        if (rp_out.empty()) rp_out = default_out(rp_manifest);
        const tkmc_status rc =
            tkmc_report(rp_manifest.c_str(), rp_sort.c_str(), rp_columns, rp_out.c_str());
        if (rc != TKMC_OK) return fail(rc);
        std::printf("gallery written to %s\n", rp_out.c_str());
        return kExitOk;
    }
    return kExitConfig;
}
