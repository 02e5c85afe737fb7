#include "tilekmc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tilekmc/render.hpp"

namespace tilekmc {

using nlohmann::json;

std::string record_to_json(const RunRecord& r) {
    json doc;
    doc["run_id"] = r.run_id;
    doc["E_s"] = r.point.E_s;
    doc["E_11"] = r.point.E_11;
    doc["E_22"] = r.point.E_22;
    doc["E_12"] = r.point.E_12;
    doc["seed"] = r.seed;
    doc["png"] = r.png_path;
    doc["raw"] = r.raw_path;
    doc["raw_len"] = r.raw_len;
    doc["C_bits"] = r.c_bits;
    doc["ratio"] = r.ratio;
    doc["dist"] = r.dist;
    doc["aggregates"] = r.aggregate_count;
    doc["singletons"] = r.singletons;
    doc["hetero_bond_fraction"] = r.hetero_bond_fraction;
    doc["depositions"] = r.counters.depositions;
    doc["moves"] = r.counters.moves;
    doc["rotations"] = r.counters.rotations;
    doc["stalls"] = r.counters.stalls;
    return doc.dump();
}

RunRecord record_from_json(const std::string& line) {
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::parse_error& e) {
        raise(Errc::io_failure, std::string("malformed manifest record: ") + e.what());
    }
    try {
        RunRecord r;
        r.run_id = doc.at("run_id").get<std::string>();
        r.point = {doc.at("E_s").get<double>(), doc.at("E_11").get<double>(),
                   doc.at("E_22").get<double>(), doc.at("E_12").get<double>()};
        r.seed = doc.at("seed").get<std::uint64_t>();
        r.png_path = doc.at("png").get<std::string>();
        r.raw_path = doc.at("raw").get<std::string>();
        r.raw_len = doc.at("raw_len").get<std::int64_t>();
        r.c_bits = doc.at("C_bits").get<std::int64_t>();
        r.ratio = doc.at("ratio").get<double>();
        r.dist = doc.at("dist").get<double>();
        r.aggregate_count = doc.at("aggregates").get<int>();
        r.singletons = doc.at("singletons").get<int>();
        r.hetero_bond_fraction = doc.at("hetero_bond_fraction").get<double>();
        r.counters.depositions = doc.at("depositions").get<long>();
        r.counters.moves = doc.at("moves").get<long>();
        r.counters.rotations = doc.at("rotations").get<long>();
        r.counters.stalls = doc.at("stalls").get<long>();
        return r;
    } catch (const json::exception& e) {
        raise(Errc::io_failure, std::string("manifest record misses a field: ") + e.what());
    }
}

namespace {

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::io_failure, "cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) raise(Errc::io_failure, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

RunRecord run_one(const SweepConfig& config, const RunSpec& spec,
                  const std::filesystem::path& out_dir,
                  const std::filesystem::path& events_path) {
    const SimConfig sim = make_sim_config(config, spec);

    std::ofstream events;
    std::function<void(const EventRecord&)> observer;
    if (!events_path.empty()) {
        events.open(events_path, std::ios::trunc);
        if (!events) raise(Errc::io_failure, "cannot write " + events_path.string());
        events << "step\tkind\trow\tcol\tactivation\n";
        observer = [&events](const EventRecord& e) { events << event_log_line(e) << '\n'; };
    }

    const RunResult result = run(sim, observer);

    const Raster raster = rasterize(result.lattice, 1);
    const auto palette = default_palette(static_cast<int>(sim.species.size()) + 1);
    write_file(out_dir / (spec.run_id + ".png"), encode_png(raster, palette));
    write_file(out_dir / (spec.run_id + ".raw"), encode_raw(raster));

    RunRecord rec;
    rec.run_id = spec.run_id;
    rec.point = spec.point;
    rec.seed = spec.seed;
    rec.png_path = spec.run_id + ".png";
    rec.raw_path = spec.run_id + ".raw";
    rec.raw_len = static_cast<std::int64_t>(canonical_bytes(raster).size());
    rec.c_bits = compress_len_bits(canonical_bytes(raster));
    rec.ratio = compression_ratio(rec.c_bits, rec.raw_len);
    rec.dist = param_distance(spec.point);
    const auto aggregates = result.lattice.aggregates();
    rec.aggregate_count = static_cast<int>(aggregates.aggregates.size());
    rec.singletons = aggregates.singletons;
    rec.hetero_bond_fraction = result.lattice.hetero_bond_fraction().fraction;
    rec.counters = result.counters;
    return rec;
}

namespace {

// Drops a torn trailing line left by an interrupted writer so resumed
// appends start on a line boundary.
void truncate_partial_line(const std::filesystem::path& manifest) {
    std::ifstream in(manifest, std::ios::binary);
    if (!in) return;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    if (content.empty() || content.back() == '\n') return;
    const std::size_t pos = content.find_last_of('\n');
    content = pos == std::string::npos ? std::string() : content.substr(0, pos + 1);
    std::ofstream out(manifest, std::ios::binary | std::ios::trunc);
    out << content;
}

} // namespace

std::vector<RunRecord> load_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) raise(Errc::io_failure, "cannot open manifest " + manifest_path.string());
    std::vector<RunRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(line));
        } catch (const Error& e) {
            raise(Errc::io_failure, manifest_path.string() + ":" + std::to_string(lineno) +
                                        ": " + e.what());
        }
    }
    return records;
}

SweepOutcome execute(const SweepConfig& config, const std::filesystem::path& out_dir,
                     const ExecuteOptions& options) {
    if (config.resolved_steps() <= 0) raise(Errc::bad_config, "sweep needs steps > 0");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) raise(Errc::io_failure, "cannot create " + out_dir.string());

    const std::filesystem::path manifest = out_dir / "manifest.jsonl";
    std::map<std::string, RunRecord> done;
    if (options.resume && std::filesystem::exists(manifest)) {
        truncate_partial_line(manifest);
        std::ifstream in(manifest);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                RunRecord r = record_from_json(line);
                done.emplace(r.run_id, std::move(r));
            } catch (const Error&) {
                // Unparseable line (torn write): the run reruns below.
            }
        }
    } else {
        std::ofstream(manifest, std::ios::trunc);
    }

    const std::vector<RunSpec> specs = expand(config);
    std::vector<RunSpec> pending;
    for (const RunSpec& s : specs)
        if (!done.contains(s.run_id)) pending.push_back(s);

    SweepOutcome outcome;
    outcome.skipped = specs.size() - pending.size();

    std::ofstream manifest_out(manifest, std::ios::app);
    if (!manifest_out) raise(Errc::io_failure, "cannot append to " + manifest.string());

    std::mutex sink_mutex; // guards manifest_out, done, outcome
    std::atomic<std::size_t> next{0};
    std::atomic<long> budget{options.stop_after < 0 ? std::numeric_limits<long>::max()
                                                    : options.stop_after};

    auto worker = [&]() {
        for (;;) {
            if (budget.fetch_sub(1) <= 0) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= pending.size()) return;
            const RunSpec& spec = pending[i];
            try {
                RunRecord rec = run_one(config, spec, out_dir);
                const std::string line = record_to_json(rec);
                std::lock_guard<std::mutex> lock(sink_mutex);
                manifest_out << line << '\n';
                manifest_out.flush();
                done.emplace(rec.run_id, std::move(rec));
                ++outcome.executed;
                if (options.progress)
                    options.progress(done.size(), specs.size());
            } catch (const std::exception&) {
                std::lock_guard<std::mutex> lock(sink_mutex);
                outcome.failed_run_ids.push_back(spec.run_id);
            }
        }
    };

    const int jobs = std::max(1, options.jobs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    for (const RunSpec& s : specs) {
        auto it = done.find(s.run_id);
        if (it != done.end()) outcome.records.push_back(it->second);
    }
    return outcome;
}

const char* ortho_class_name(OrthoClass c) noexcept {
    switch (c) {
        case OrthoClass::increasing: return "increasing";
        case OrthoClass::reversed: return "reversed";
        case OrthoClass::flat: return "flat";
    }
    return "?";
}

namespace {

double get_param(const ParamPoint& p, const std::string& name) {
    if (name == "E_s") return p.E_s;
    if (name == "E_11") return p.E_11;
    if (name == "E_22") return p.E_22;
    if (name == "E_12") return p.E_12;
    raise(Errc::invalid_argument, "unknown parameter '" + name + "'");
}

ParamPoint clear_param(ParamPoint p, const std::string& name) {
    if (name == "E_s") p.E_s = 0.0;
    else if (name == "E_11") p.E_11 = 0.0;
    else if (name == "E_22") p.E_22 = 0.0;
    else p.E_12 = 0.0;
    return p;
}

std::string fixed_key(const ParamPoint& p, const std::string& varied) {
    const ParamPoint f = clear_param(p, varied);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6f|%.6f|%.6f|%.6f", f.E_s, f.E_11, f.E_22, f.E_12);
    return buf;
}

} // namespace

OrthoReport orthogonality_report(const std::vector<RunRecord>& records,
                                 const std::string& varied_param, double tau) {
    get_param(ParamPoint{}, varied_param); // validates the name
    OrthoReport report;
    report.varied_param = varied_param;
    report.tau = tau;

    // value -> mean C per (fixed-params, varied-value) cell, averaging seeds.
    std::map<std::string, std::map<double, std::pair<double, int>>> cells;
    std::set<double> all_values;
    std::map<std::string, ParamPoint> group_fixed;
    for (const RunRecord& r : records) {
        const std::string key = fixed_key(r.point, varied_param);
        const double value = get_param(r.point, varied_param);
        auto& cell = cells[key][value];
        cell.first += static_cast<double>(r.c_bits);
        cell.second += 1;
        all_values.insert(value);
        group_fixed.emplace(key, clear_param(r.point, varied_param));
    }

    for (const auto& [key, values] : cells) {
        OrthoGroup group;
        group.fixed = group_fixed[key];
        for (const auto& [value, cell] : values) {
            group.varied.push_back(value);
            group.c_bits.push_back(cell.first / cell.second);
        }
        group.incomplete = values.size() != all_values.size();

        double max_c = 0.0;
        for (double c : group.c_bits) max_c = std::max(max_c, c);
        const double threshold = tau * max_c;

        bool any_beyond = false;
        bool any_reversed = false;
        for (std::size_t i = 0; i + 1 < group.c_bits.size(); ++i) {
            const double delta = group.c_bits[i + 1] - group.c_bits[i];
            group.deltas.push_back(delta);
            if (std::abs(delta) > threshold) any_beyond = true;
            if (delta < -threshold) any_reversed = true;
        }
        group.classification = !any_beyond  ? OrthoClass::flat
                               : any_reversed ? OrthoClass::reversed
                                              : OrthoClass::increasing;
        report.groups.push_back(std::move(group));
    }
    return report;
}

} // namespace tilekmc
