#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tilekmc/clustering.hpp"
#include "tilekmc/sweep.hpp"

namespace tilekmc {

/// Report emitters consuming a sweep manifest. Each writes delimited
/// text (and for galleries a contact-sheet PNG) into out_dir and
/// returns the paths it wrote.

/// Records sorted ascending by compression ratio -> ratio_report.tsv;
/// with gallery also ratio_gallery.png, cells in sorted order.
std::vector<std::filesystem::path> analyze_ratio(const std::vector<RunRecord>& records,
                                                 const std::filesystem::path& manifest_dir,
                                                 const std::filesystem::path& out_dir,
                                                 bool gallery);

/// Two-segment phase-transition split of the sorted ratio series ->
/// transition_report.tsv.
std::vector<std::filesystem::path> analyze_transition(const std::vector<RunRecord>& records,
                                                      const std::filesystem::path& out_dir);

/// Spearman rank correlation between parameter-space distance and C ->
/// correlation_report.tsv.
std::vector<std::filesystem::path> analyze_correlation(const std::vector<RunRecord>& records,
                                                       const std::filesystem::path& out_dir);

/// Pairwise NCD matrix over the stored rasters -> ncd_matrix.tsv.
/// on_png compresses the PNG files instead of the canonical raster
/// bytes (comparison mode; canonical bytes are the default because PNG
/// framing biases NCD toward similarity).
std::vector<std::filesystem::path> analyze_ncd(const std::vector<RunRecord>& records,
                                               const std::filesystem::path& manifest_dir,
                                               const std::filesystem::path& out_dir,
                                               bool on_png);

/// Single-parameter sensitivity classification -> ortho_<param>.tsv.
std::vector<std::filesystem::path> analyze_ortho(const std::vector<RunRecord>& records,
                                                 const std::string& varied_param, double tau,
                                                 const std::filesystem::path& out_dir);

/// Clusters records by NCD or by ratio distance, cuts at k, and picks
/// one uniformly random representative per group (seeded). Writes
/// assignments.tsv, dendrogram.newick and representatives.jsonl (a
/// manifest subset usable as input to further runs of this command).
std::vector<std::filesystem::path> cluster_records(const std::vector<RunRecord>& records,
                                                   const std::filesystem::path& manifest_dir,
                                                   const std::string& metric, int k,
                                                   std::uint64_t seed,
                                                   const std::filesystem::path& out_dir);

/// Contact-sheet gallery of all rasters ordered by a sort key
/// ("ratio", "dist" or "C") -> gallery.png + gallery_index.tsv.
std::vector<std::filesystem::path> report_gallery(const std::vector<RunRecord>& records,
                                                  const std::filesystem::path& manifest_dir,
                                                  const std::string& sort_key, int columns,
                                                  const std::filesystem::path& out_dir);

} // namespace tilekmc
