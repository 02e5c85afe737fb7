#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tilekmc.h"

namespace fs = std::filesystem;

namespace {

const char* kTinyConfig = R"({
  "version": "tilekmc-config/1",
  "lattice_side": 16,
  "steps": 600,
  "E_s": [0.5], "E_11": [0.4], "E_22": [0.4], "E_12": [0.4],
  "seeds": [5]
})";

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() /
               ("tilekmc_capi_" + tag + "_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<unsigned char> slurp_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Config {
    tkmc_config* ptr = nullptr;
    ~Config() { tkmc_config_free(ptr); }
};

} // namespace

TEST_CASE("version and error plumbing") {
    CHECK(std::strlen(tkmc_version()) > 0);
    tkmc_config* cfg = nullptr;
    CHECK(tkmc_config_parse("{", &cfg) == TKMC_EBADCONFIG);
    CHECK(std::strlen(tkmc_last_error()) > 0);
    CHECK(tkmc_config_parse(nullptr, &cfg) == TKMC_EINVAL);
    CHECK(tkmc_config_load("/no/such/file.json", &cfg) == TKMC_EIO);
}

TEST_CASE("config parse, dump and run count") {
    Config cfg;
    REQUIRE(tkmc_config_parse(kTinyConfig, &cfg.ptr) == TKMC_OK);

    char* json = nullptr;
    REQUIRE(tkmc_config_to_json(cfg.ptr, &json) == TKMC_OK);
    CHECK(std::string(json).find("tilekmc-config/1") != std::string::npos);
    tkmc_string_free(json);

    size_t runs = 0;
    CHECK(tkmc_config_run_count(cfg.ptr, &runs) == TKMC_OK);
    CHECK(runs == 1);

    uint64_t seed = 0;
    CHECK(tkmc_config_first_seed(cfg.ptr, &seed) == TKMC_OK);
    CHECK(seed == 5);
}

TEST_CASE("simulate produces deterministic artifacts and a record") {
    const TempDir dir_a("sim_a");
    const TempDir dir_b("sim_b");
    Config cfg;
    REQUIRE(tkmc_config_parse(kTinyConfig, &cfg.ptr) == TKMC_OK);

    tkmc_result* result = nullptr;
    REQUIRE(tkmc_simulate(cfg.ptr, 5, dir_a.path.c_str(), nullptr, &result) == TKMC_OK);
    const std::string run_id = tkmc_result_run_id(result);
    CHECK(run_id.find("es0.500") == 0);
    CHECK(tkmc_result_c_bits(result) > 0);
    CHECK(tkmc_result_ratio(result) > 0.0);
    CHECK(tkmc_result_aggregates(result) >= 0);

    char* record_json = nullptr;
    REQUIRE(tkmc_result_to_json(result, &record_json) == TKMC_OK);
    CHECK(std::string(record_json).find("\"run_id\"") != std::string::npos);
    tkmc_string_free(record_json);
    tkmc_result_free(result);

    CHECK(fs::exists(dir_a.path / (run_id + ".png")));
    CHECK(fs::exists(dir_a.path / (run_id + ".raw")));
    CHECK(fs::exists(dir_a.path / "manifest.jsonl"));

    // Same seed elsewhere: byte-identical PNG.
    tkmc_result* again = nullptr;
    REQUIRE(tkmc_simulate(cfg.ptr, 5, dir_b.path.c_str(), nullptr, &again) == TKMC_OK);
    tkmc_result_free(again);
    CHECK(slurp_bytes(dir_a.path / (run_id + ".png")) ==
          slurp_bytes(dir_b.path / (run_id + ".png")));
}

TEST_CASE("simulate writes an event log on request") {
    const TempDir dir("sim_events");
    Config cfg;
    REQUIRE(tkmc_config_parse(kTinyConfig, &cfg.ptr) == TKMC_OK);
    const fs::path events = dir.path / "events.tsv";

    tkmc_result* result = nullptr;
    REQUIRE(tkmc_simulate(cfg.ptr, 5, dir.path.c_str(), events.c_str(), &result) == TKMC_OK);
    tkmc_result_free(result);

    std::ifstream in(events);
    REQUIRE(in);
    std::string header;
    std::getline(in, header);
    CHECK(header == "step\tkind\trow\tcol\tactivation");
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 600);
}

TEST_CASE("simulate rejects multi-point configs") {
    Config cfg;
    REQUIRE(tkmc_config_parse(R"({
      "version": "tilekmc-config/1", "lattice_side": 16, "steps": 100,
      "E_s": [0.5, 0.6], "E_11": [0.4], "E_22": [0.4], "E_12": [0.4]
    })",
                              &cfg.ptr) == TKMC_OK);
    const TempDir dir("multi");
    tkmc_result* result = nullptr;
    CHECK(tkmc_simulate(cfg.ptr, 1, dir.path.c_str(), nullptr, &result) == TKMC_EBADCONFIG);
}

TEST_CASE("sweep, manifest check and the analysis entry points") {
    const TempDir sweep_dir("sweep");
    const TempDir analysis_dir("analysis");
    Config cfg;
    REQUIRE(tkmc_config_parse(R"({
      "version": "tilekmc-config/1", "lattice_side": 16, "steps": 800,
      "E_s": [0.5, 1.0], "E_11": [0.5], "E_22": [0.5], "E_12": [0.1, 0.9],
      "seeds": [2]
    })",
                              &cfg.ptr) == TKMC_OK);

    size_t executed = 0, skipped = 0;
    REQUIRE(tkmc_sweep(cfg.ptr, sweep_dir.path.c_str(), 2, 0, &executed, &skipped) == TKMC_OK);
    CHECK(executed == 4);
    CHECK(skipped == 0);

    REQUIRE(tkmc_sweep(cfg.ptr, sweep_dir.path.c_str(), 2, 1, &executed, &skipped) == TKMC_OK);
    CHECK(executed == 0);
    CHECK(skipped == 4);

    const fs::path manifest = sweep_dir.path / "manifest.jsonl";
    size_t records = 0;
    REQUIRE(tkmc_manifest_check(manifest.c_str(), &records) == TKMC_OK);
    CHECK(records == 4);
    CHECK(tkmc_manifest_check("/no/such/manifest.jsonl", &records) == TKMC_EIO);

    CHECK(tkmc_analyze(manifest.c_str(), "ratio", nullptr,
                       (analysis_dir.path / "ratio").c_str()) == TKMC_OK);
    CHECK(fs::exists(analysis_dir.path / "ratio" / "ratio_report.tsv"));
    CHECK(tkmc_analyze(manifest.c_str(), "correlation", nullptr,
                       (analysis_dir.path / "corr").c_str()) == TKMC_OK);
    CHECK(tkmc_analyze(manifest.c_str(), "transition", nullptr,
                       (analysis_dir.path / "trans").c_str()) == TKMC_OK);
    CHECK(tkmc_analyze(manifest.c_str(), "ncd", nullptr,
                       (analysis_dir.path / "ncd").c_str()) == TKMC_OK);
    CHECK(tkmc_analyze(manifest.c_str(), "ortho", "E_12",
                       (analysis_dir.path / "ortho").c_str()) == TKMC_OK);
    CHECK(fs::exists(analysis_dir.path / "ortho" / "ortho_E_12.tsv"));
    CHECK(tkmc_analyze(manifest.c_str(), "bogus", nullptr,
                       (analysis_dir.path / "x").c_str()) == TKMC_EINVAL);

    CHECK(tkmc_cluster(manifest.c_str(), "ratio", 2, 1,
                       (analysis_dir.path / "cluster").c_str()) == TKMC_OK);
    CHECK(fs::exists(analysis_dir.path / "cluster" / "assignments.tsv"));
    CHECK(fs::exists(analysis_dir.path / "cluster" / "representatives.jsonl"));
    CHECK(tkmc_cluster(manifest.c_str(), "ratio", 99, 1,
                       (analysis_dir.path / "cluster_bad").c_str()) == TKMC_EINVAL);

    CHECK(tkmc_report(manifest.c_str(), "ratio", 2,
                      (analysis_dir.path / "gallery").c_str()) == TKMC_OK);
    CHECK(fs::exists(analysis_dir.path / "gallery" / "gallery.png"));
}

TEST_CASE("compression primitives") {
    std::vector<uint8_t> constant(2048, 7);
    int64_t bits = 0;
    REQUIRE(tkmc_compress_len(constant.data(), constant.size(), &bits) == TKMC_OK);
    CHECK(bits < 400);
    CHECK(tkmc_compress_len(constant.data(), 0, &bits) == TKMC_EINVAL);

    std::vector<uint8_t> pattern;
    for (int i = 0; i < 4096; ++i) pattern.push_back(static_cast<uint8_t>(i % 3));
    double d = 0.0;
    REQUIRE(tkmc_ncd(pattern.data(), pattern.size(), pattern.data(), pattern.size(), &d) ==
            TKMC_OK);
    CHECK(d >= 0.0);
    CHECK(d <= 1.1);
    CHECK(tkmc_ncd(nullptr, 0, pattern.data(), pattern.size(), &d) == TKMC_EINVAL);
}
