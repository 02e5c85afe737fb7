// End-to-end CLI checks: spawns the tilekmc binary (path in $TILEKMC_CLI)
// and asserts on exit codes and produced files.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tilekmc/sweep.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const char* cli = std::getenv("TILEKMC_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "TILEKMC_CLI must point at the tilekmc binary");
    const std::string command = std::string(cli) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buffer[512];
    while (std::fgets(buffer, sizeof buffer, pipe)) output += buffer;
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, output};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() /
               ("tilekmc_cli_" + tag + "_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream out(p);
    out << body;
    return p;
}

const char* kSingleConfig = R"({
  "version": "tilekmc-config/1",
  "lattice_side": 16,
  "steps": 600,
  "E_s": [0.5], "E_11": [0.4], "E_22": [0.4], "E_12": [0.4],
  "seeds": [9]
})";

const char* kGridConfig = R"({
  "version": "tilekmc-config/1",
  "lattice_side": 16,
  "steps": 600,
  "E_s": [0.5, 1.0], "E_11": [0.5], "E_22": [0.5], "E_12": [0.1, 0.9],
  "seeds": [2, 3]
})";

std::vector<unsigned char> slurp_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::set<std::string> manifest_ids(const fs::path& manifest) {
    std::set<std::string> ids;
    for (const auto& rec : tilekmc::load_manifest(manifest)) ids.insert(rec.run_id);
    return ids;
}

} // namespace

TEST_CASE("simulate: valid config runs, prints its resolved config and seed") {
    const TempDir dir("simulate");
    const fs::path config = write_config(dir.path, kSingleConfig);
    const fs::path out = dir.path / "out";

    const CliResult result =
        run_cli("simulate --config " + config.string() + " --out " + out.string());
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("config: {") != std::string::npos);
    CHECK(result.output.find("seed: 9") != std::string::npos);
    CHECK(fs::exists(out / "manifest.jsonl"));

    bool has_png = false;
    for (const auto& entry : fs::directory_iterator(out))
        if (entry.path().extension() == ".png") has_png = true;
    CHECK(has_png);
}

TEST_CASE("simulate: missing config exits 1") {
    const CliResult result = run_cli("simulate --config /no/such/config.json");
    CHECK(result.exit_code == 1);
}

TEST_CASE("simulate: unknown flags are rejected") {
    const TempDir dir("badflag");
    const fs::path config = write_config(dir.path, kSingleConfig);
    const CliResult result =
        run_cli("simulate --config " + config.string() + " --frobnicate 3");
    CHECK(result.exit_code == 1);
}

TEST_CASE("simulate: same seed twice gives identical PNG bytes") {
    const TempDir dir("determinism");
    const fs::path config = write_config(dir.path, kSingleConfig);
    const fs::path out_a = dir.path / "a";
    const fs::path out_b = dir.path / "b";
    REQUIRE(run_cli("simulate --config " + config.string() + " --seed 4 --out " +
                    out_a.string())
                .exit_code == 0);
    REQUIRE(run_cli("simulate --config " + config.string() + " --seed 4 --out " +
                    out_b.string())
                .exit_code == 0);

    fs::path png_a, png_b;
    for (const auto& e : fs::directory_iterator(out_a))
        if (e.path().extension() == ".png") png_a = e.path();
    for (const auto& e : fs::directory_iterator(out_b))
        if (e.path().extension() == ".png") png_b = e.path();
    CHECK(slurp_bytes(png_a) == slurp_bytes(png_b));
}

TEST_CASE("sweep: full grid, resume and parallel equivalence") {
    const TempDir dir("sweep");
    const fs::path config = write_config(dir.path, kGridConfig);
    const fs::path out = dir.path / "grid";

    const CliResult first =
        run_cli("sweep --config " + config.string() + " --out " + out.string() + " --jobs 1");
    CHECK(first.exit_code == 0);
    CHECK(first.output.find("completed: 8 new") != std::string::npos);
    CHECK(manifest_ids(out / "manifest.jsonl").size() == 8);

    const CliResult resumed = run_cli("sweep --config " + config.string() + " --out " +
                                      out.string() + " --jobs 1 --resume");
    CHECK(resumed.exit_code == 0);
    CHECK(resumed.output.find("completed: 0 new, 8 resumed") != std::string::npos);

    const fs::path out4 = dir.path / "grid4";
    const CliResult parallel =
        run_cli("sweep --config " + config.string() + " --out " + out4.string() + " --jobs 4");
    CHECK(parallel.exit_code == 0);

    // Identical record sets modulo manifest line order.
    auto load_sorted = [](const fs::path& manifest) {
        auto records = tilekmc::load_manifest(manifest);
        std::vector<std::string> lines;
        for (const auto& r : records) lines.push_back(tilekmc::record_to_json(r));
        std::sort(lines.begin(), lines.end());
        return lines;
    };
    CHECK(load_sorted(out / "manifest.jsonl") == load_sorted(out4 / "manifest.jsonl"));
}

TEST_CASE("analyze: correlation on a monotone synthetic manifest reports rho = 1") {
    const TempDir dir("analyze_corr");
    const fs::path manifest = dir.path / "manifest.jsonl";
    {
        std::ofstream out(manifest);
        for (int i = 1; i <= 5; ++i) {
            tilekmc::RunRecord r;
            r.point = {0.2 * i, 0.1 * i, 0.1 * i, 0.1 * i};
            r.run_id = tilekmc::make_run_id(r.point, 1);
            r.seed = 1;
            r.raw_len = 256;
            r.c_bits = 500 * i;
            r.ratio = r.c_bits / (8.0 * 256);
            r.dist = tilekmc::param_distance(r.point);
            out << tilekmc::record_to_json(r) << '\n';
        }
    }
    const fs::path out = dir.path / "reports";
    const CliResult result = run_cli("analyze --manifest " + manifest.string() +
                                     " --mode correlation --out " + out.string());
    CHECK(result.exit_code == 0);

    std::ifstream report(out / "correlation_report.tsv");
    REQUIRE(report);
    std::string header, row;
    std::getline(report, header);
    std::getline(report, row);
    CHECK(row == "5\t1");
}

TEST_CASE("analyze: transition on a constant synthetic manifest reports none") {
    const TempDir dir("analyze_trans");
    const fs::path manifest = dir.path / "manifest.jsonl";
    {
        std::ofstream out(manifest);
        for (int i = 0; i < 6; ++i) {
            tilekmc::RunRecord r;
            r.point = {0.5, 0.1, 0.1, 0.1 + 0.1 * i};
            r.run_id = tilekmc::make_run_id(r.point, 1);
            r.raw_len = 256;
            r.c_bits = 4096;
            r.ratio = 2.0;
            out << tilekmc::record_to_json(r) << '\n';
        }
    }
    const fs::path out = dir.path / "reports";
    const CliResult result = run_cli("analyze --manifest " + manifest.string() +
                                     " --mode transition --out " + out.string());
    CHECK(result.exit_code == 0);
    std::ifstream report(out / "transition_report.tsv");
    std::string header, row;
    std::getline(report, header);
    std::getline(report, row);
    CHECK(row.substr(0, 3) == "no\t");
}

TEST_CASE("analyze: malformed manifest exits 1") {
    const TempDir dir("analyze_bad");
    const fs::path manifest = dir.path / "manifest.jsonl";
    std::ofstream(manifest) << "this is not json\n";
    const CliResult result = run_cli("analyze --manifest " + manifest.string() +
                                     " --mode ratio --out " + (dir.path / "x").string());
    CHECK(result.exit_code == 1);
}

TEST_CASE("cluster: invalid k exits 1, representative pipeline runs end to end") {
    const TempDir dir("cluster");
    const fs::path config = write_config(dir.path, kGridConfig);
    const fs::path sweep_out = dir.path / "runs";
    REQUIRE(run_cli("sweep --config " + config.string() + " --out " + sweep_out.string() +
                    " --jobs 4")
                .exit_code == 0);
    const fs::path manifest = sweep_out / "manifest.jsonl";

    const CliResult bad = run_cli("cluster --manifest " + manifest.string() +
                                  " --metric ratio --k 99 --out " +
                                  (dir.path / "bad").string());
    CHECK(bad.exit_code == 1);

    // Representative workflow at desk scale: ratio clustering picks k
    // representatives, the NCD pass splits them into 2 groups.
    const fs::path stage1 = dir.path / "stage1";
    const CliResult ratio_pass = run_cli("cluster --manifest " + manifest.string() +
                                         " --metric ratio --k 4 --out " + stage1.string());
    CHECK(ratio_pass.exit_code == 0);
    const fs::path reps = stage1 / "representatives.jsonl";
    REQUIRE(fs::exists(reps));
    CHECK(tilekmc::load_manifest(reps).size() == 4);

    const fs::path stage2 = dir.path / "stage2";
    const CliResult ncd_pass = run_cli("cluster --manifest " + reps.string() +
                                       " --metric ncd --k 2 --out " + stage2.string());
    CHECK(ncd_pass.exit_code == 0);
    CHECK(fs::exists(stage2 / "assignments.tsv"));
}

TEST_CASE("report: gallery emits a contact sheet") {
    const TempDir dir("report");
    const fs::path config = write_config(dir.path, kGridConfig);
    const fs::path sweep_out = dir.path / "runs";
    REQUIRE(run_cli("sweep --config " + config.string() + " --out " + sweep_out.string() +
                    " --jobs 4")
                .exit_code == 0);

    const fs::path out = dir.path / "gallery";
    const CliResult result = run_cli("report --manifest " +
                                     (sweep_out / "manifest.jsonl").string() +
                                     " --sort C --columns 3 --out " + out.string());
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(out / "gallery.png"));
    CHECK(fs::exists(out / "gallery_index.tsv"));
}

TEST_CASE("TILEKMC_OUT provides the default output root") {
    const TempDir dir("envout");
    const fs::path config = write_config(dir.path, kSingleConfig);
    const std::string command = "TILEKMC_OUT=" + (dir.path / "root").string() +
                                " $TILEKMC_CLI simulate --config " + config.string();
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buffer[256];
    while (std::fgets(buffer, sizeof buffer, pipe)) {
    }
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(dir.path / "root" / "config" / "manifest.jsonl"));
}
