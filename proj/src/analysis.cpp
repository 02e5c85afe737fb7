#include "tilekmc/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "tilekmc/render.hpp"
#include "tilekmc/rng.hpp"

namespace tilekmc {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(Errc::io_failure, "cannot write " + path.string());
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_failure, "cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<CompressionRecord> to_compression_records(const std::vector<RunRecord>& records) {
    std::vector<CompressionRecord> out;
    out.reserve(records.size());
    for (const RunRecord& r : records)
        out.push_back({r.run_id, r.raw_len, r.c_bits, r.ratio});
    return out;
}

std::vector<RunRecord> sorted_records(std::vector<RunRecord> records, const std::string& key) {
    auto value = [&key](const RunRecord& r) {
        if (key == "ratio") return r.ratio;
        if (key == "dist") return r.dist;
        if (key == "C") return static_cast<double>(r.c_bits);
        raise(Errc::invalid_argument, "unknown sort key '" + key + "'");
    };
    std::stable_sort(records.begin(), records.end(), [&](const RunRecord& a, const RunRecord& b) {
        const double va = value(a), vb = value(b);
        if (va != vb) return va < vb;
        return a.run_id < b.run_id;
    });
    return records;
}

Raster load_raster(const std::filesystem::path& manifest_dir, const RunRecord& record) {
    return decode_raw(read_file(manifest_dir / record.raw_path));
}

void write_record_header(std::ofstream& out) {
    out << "run_id\tE_s\tE_11\tE_22\tE_12\tseed\traw_len\tC_bits\tratio\tdist\t"
           "aggregates\tsingletons\thetero_bond_fraction\n";
}

void write_record_row(std::ofstream& out, const RunRecord& r) {
    out << r.run_id << '\t' << r.point.E_s << '\t' << r.point.E_11 << '\t' << r.point.E_22
        << '\t' << r.point.E_12 << '\t' << r.seed << '\t' << r.raw_len << '\t' << r.c_bits
        << '\t' << r.ratio << '\t' << r.dist << '\t' << r.aggregate_count << '\t'
        << r.singletons << '\t' << r.hetero_bond_fraction << '\n';
}

int gallery_palette_entries(const std::vector<Raster>& rasters) {
    std::uint8_t max_px = 0;
    for (const Raster& r : rasters)
        for (std::uint8_t px : r.pixels) max_px = std::max(max_px, px);
    return max_px + 1;
}

std::filesystem::path write_gallery(const std::vector<RunRecord>& ordered,
                                    const std::filesystem::path& manifest_dir,
                                    const std::filesystem::path& out_path, int columns) {
    std::vector<Raster> rasters;
    rasters.reserve(ordered.size());
    for (const RunRecord& r : ordered) rasters.push_back(load_raster(manifest_dir, r));

    const int entries = gallery_palette_entries(rasters);
    const std::uint8_t separator = static_cast<std::uint8_t>(entries);
    auto palette = default_palette(entries);
    palette.push_back({128, 128, 128}); // cell separator

    const Raster sheet = montage(rasters, columns, 2, separator);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_failure, "cannot write " + out_path.string());
    const auto png = encode_png(sheet, palette);
    out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
    return out_path;
}

} // namespace

std::vector<std::filesystem::path> analyze_ratio(const std::vector<RunRecord>& records,
                                                 const std::filesystem::path& manifest_dir,
                                                 const std::filesystem::path& out_dir,
                                                 bool gallery) {
    if (records.empty()) raise(Errc::empty_input, "no records to analyze");
    const std::vector<RunRecord> ordered = sorted_records(records, "ratio");

    std::vector<std::filesystem::path> written;
    const auto report_path = out_dir / "ratio_report.tsv";
    auto out = open_out(report_path);
    write_record_header(out);
    for (const RunRecord& r : ordered) write_record_row(out, r);
    written.push_back(report_path);

    if (gallery)
        written.push_back(
            write_gallery(ordered, manifest_dir, out_dir / "ratio_gallery.png", 8));
    return written;
}

std::vector<std::filesystem::path> analyze_transition(const std::vector<RunRecord>& records,
                                                      const std::filesystem::path& out_dir) {
    const auto sorted = sort_by_ratio(to_compression_records(records));
    std::vector<double> ratios;
    ratios.reserve(sorted.size());
    for (const auto& r : sorted) ratios.push_back(r.ratio);

    const TransitionReport report = detect_transition(ratios);

    const auto path = out_dir / "transition_report.tsv";
    auto out = open_out(path);
    out << "found\tboundary_index\tboundary_run_id\tjump\t"
           "low_count\tlow_min\tlow_max\tlow_mean\thigh_count\thigh_min\thigh_max\thigh_mean\n";
    if (!report.found) {
        out << "no\t-\t-\t0\t" << ratios.size() << '\t' << report.low.min << '\t'
            << report.low.max << '\t' << report.low.mean << "\t0\t-\t-\t-\n";
    } else {
        out << "yes\t" << report.boundary << '\t' << sorted[report.boundary].run_id << '\t'
            << report.jump << '\t' << (report.low.end - report.low.begin) << '\t'
            << report.low.min << '\t' << report.low.max << '\t' << report.low.mean << '\t'
            << (report.high.end - report.high.begin) << '\t' << report.high.min << '\t'
            << report.high.max << '\t' << report.high.mean << '\n';
    }
    return {path};
}

std::vector<std::filesystem::path> analyze_correlation(const std::vector<RunRecord>& records,
                                                       const std::filesystem::path& out_dir) {
    std::vector<double> dist, c_bits;
    for (const RunRecord& r : records) {
        dist.push_back(r.dist);
        c_bits.push_back(static_cast<double>(r.c_bits));
    }
    const double rho = spearman(dist, c_bits);

    const auto path = out_dir / "correlation_report.tsv";
    auto out = open_out(path);
    out << "n\tspearman_rho\n" << records.size() << '\t' << rho << '\n';
    return {path};
}

std::vector<std::filesystem::path> analyze_ncd(const std::vector<RunRecord>& records,
                                               const std::filesystem::path& manifest_dir,
                                               const std::filesystem::path& out_dir,
                                               bool on_png) {
    if (records.size() < 2) raise(Errc::too_few_points, "NCD matrix needs >= 2 records");
    std::vector<std::vector<std::uint8_t>> payloads;
    payloads.reserve(records.size());
    for (const RunRecord& r : records)
        payloads.push_back(on_png ? read_file(manifest_dir / r.png_path)
                                  : canonical_bytes(load_raster(manifest_dir, r)));

    const DistanceMatrix matrix = DistanceMatrix::from_ncd(payloads);

    const auto path = out_dir / "ncd_matrix.tsv";
    auto out = open_out(path);
    out << "run_id";
    for (const RunRecord& r : records) out << '\t' << r.run_id;
    out << '\n';
    for (int i = 0; i < matrix.size(); ++i) {
        out << records[static_cast<std::size_t>(i)].run_id;
        for (int j = 0; j < matrix.size(); ++j) out << '\t' << matrix.at(i, j);
        out << '\n';
    }
    return {path};
}

std::vector<std::filesystem::path> analyze_ortho(const std::vector<RunRecord>& records,
                                                 const std::string& varied_param, double tau,
                                                 const std::filesystem::path& out_dir) {
    const OrthoReport report = orthogonality_report(records, varied_param, tau);

    const auto path = out_dir / ("ortho_" + varied_param + ".tsv");
    auto out = open_out(path);
    out << "fixed_E_s\tfixed_E_11\tfixed_E_22\tfixed_E_12\tpoints\tclassification\t"
           "incomplete\tdeltas\n";
    for (const OrthoGroup& g : report.groups) {
        out << g.fixed.E_s << '\t' << g.fixed.E_11 << '\t' << g.fixed.E_22 << '\t'
            << g.fixed.E_12 << '\t' << g.varied.size() << '\t'
            << ortho_class_name(g.classification) << '\t' << (g.incomplete ? "yes" : "no")
            << '\t';
        for (std::size_t i = 0; i < g.deltas.size(); ++i) {
            if (i) out << ',';
            out << g.deltas[i];
        }
        out << '\n';
    }
    return {path};
}

std::vector<std::filesystem::path> cluster_records(const std::vector<RunRecord>& records,
                                                   const std::filesystem::path& manifest_dir,
                                                   const std::string& metric, int k,
                                                   std::uint64_t seed,
                                                   const std::filesystem::path& out_dir) {
    if (records.size() < 2) raise(Errc::too_few_points, "clustering needs >= 2 records");
    if (k < 1 || k > static_cast<int>(records.size()))
        raise(Errc::bad_k, "k must be in 1..record count");

    std::vector<double> ratios;
    for (const RunRecord& r : records) ratios.push_back(r.ratio);

    DistanceMatrix matrix = [&] {
        if (metric == "ratio") return DistanceMatrix::from_ratios(ratios);
        if (metric == "ncd") {
            std::vector<std::vector<std::uint8_t>> payloads;
            for (const RunRecord& r : records)
                payloads.push_back(canonical_bytes(load_raster(manifest_dir, r)));
            return DistanceMatrix::from_ncd(payloads);
        }
        raise(Errc::invalid_argument, "unknown metric '" + metric + "' (ratio|ncd)");
    }();

    const Dendrogram dendrogram = hcluster(matrix);
    std::vector<int> labels = cut(dendrogram, k);

    // Order group labels by ascending mean ratio, as ncd_group does.
    std::vector<double> total(static_cast<std::size_t>(k), 0.0);
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < records.size(); ++i) {
        total[static_cast<std::size_t>(labels[i])] += records[i].ratio;
        ++count[static_cast<std::size_t>(labels[i])];
    }
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return total[static_cast<std::size_t>(a)] / count[static_cast<std::size_t>(a)] <
               total[static_cast<std::size_t>(b)] / count[static_cast<std::size_t>(b)];
    });
    std::vector<int> relabel(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        relabel[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    for (int& label : labels) label = relabel[static_cast<std::size_t>(label)];

    std::vector<std::filesystem::path> written;

    const auto assignments_path = out_dir / "assignments.tsv";
    auto out = open_out(assignments_path);
    out << "run_id\tcluster\tratio\tC_bits\n";
    for (std::size_t i = 0; i < records.size(); ++i)
        out << records[i].run_id << '\t' << labels[i] << '\t' << records[i].ratio << '\t'
            << records[i].c_bits << '\n';
    written.push_back(assignments_path);

    const auto newick_path = out_dir / "dendrogram.newick";
    std::vector<std::string> names;
    for (const RunRecord& r : records) names.push_back(r.run_id);
    open_out(newick_path) << to_newick(dendrogram, names) << '\n';
    written.push_back(newick_path);

    // One uniformly random representative per group, seeded.
    RngStream rng(seed);
    const auto reps_path = out_dir / "representatives.jsonl";
    auto reps = open_out(reps_path);
    for (int group = 0; group < k; ++group) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < records.size(); ++i)
            if (labels[i] == group) members.push_back(i);
        if (members.empty()) continue;
        const std::size_t pick =
            members[rng.uniform_index(static_cast<std::uint64_t>(members.size()))];
        RunRecord rep = records[pick];
        // Representative files are referenced from the new output dir.
        rep.png_path = std::filesystem::relative(manifest_dir / rep.png_path, out_dir).string();
        rep.raw_path = std::filesystem::relative(manifest_dir / rep.raw_path, out_dir).string();
        reps << record_to_json(rep) << '\n';
    }
    written.push_back(reps_path);
    return written;
}

std::vector<std::filesystem::path> report_gallery(const std::vector<RunRecord>& records,
                                                  const std::filesystem::path& manifest_dir,
                                                  const std::string& sort_key, int columns,
                                                  const std::filesystem::path& out_dir) {
    if (records.empty()) raise(Errc::empty_input, "no records to report");
    const std::vector<RunRecord> ordered = sorted_records(records, sort_key);

    std::vector<std::filesystem::path> written;
    const auto index_path = out_dir / "gallery_index.tsv";
    auto out = open_out(index_path);
    write_record_header(out);
    for (const RunRecord& r : ordered) write_record_row(out, r);
    written.push_back(index_path);

    written.push_back(write_gallery(ordered, manifest_dir, out_dir / "gallery.png", columns));
    return written;
}

} // namespace tilekmc
