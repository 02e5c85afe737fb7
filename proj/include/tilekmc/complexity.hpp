#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tilekmc/errors.hpp"

namespace tilekmc {

/// Compression measurements of one simulation raster. Lengths are kept
/// in both units the analyses use: C in bits, the ratio in bytes per
/// byte; ratio == compressed_bits / (8 * raw_len) exactly.
struct CompressionRecord {
    std::string run_id;
    std::int64_t raw_len = 0;         // bytes
    std::int64_t compressed_bits = 0; // C
    double ratio = 0.0;               // compressed bytes / raw bytes

    friend bool operator==(const CompressionRecord&, const CompressionRecord&) = default;
};

/// Size in bits of the fixed-settings DEFLATE stream of the input, the
/// computable stand-in for Kolmogorov complexity. Deterministic for a
/// given input. Errors: empty_input.
std::int64_t compress_len_bits(std::span<const std::uint8_t> bytes);

/// Compressed bytes / raw bytes. Errors: zero_length.
double compression_ratio(std::int64_t compressed_bits, std::int64_t raw_len);

CompressionRecord make_compression_record(const std::string& run_id,
                                          std::span<const std::uint8_t> bytes);

/// Normalized compression distance
///   (C(o1 o2) - min(C(o1), C(o2))) / max(C(o1), C(o2))
/// over the byte concatenation. Errors: empty_input.
double ncd(std::span<const std::uint8_t> o1, std::span<const std::uint8_t> o2);

/// A point in the input parameter space.
struct ParamPoint {
    double E_s = 0.0;
    double E_11 = 0.0;
    double E_22 = 0.0;
    double E_12 = 0.0;
};

/// Euclidean distance from the all-zero origin:
/// sqrt(E_s^2 + E_11^2 + E_22^2 + E_12^2).
double param_distance(const ParamPoint& p);

/// Ascending stable sort by ratio; ties broken by run_id.
std::vector<CompressionRecord> sort_by_ratio(std::vector<CompressionRecord> records);

struct SegmentSummary {
    std::size_t begin = 0; // [begin, end)
    std::size_t end = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

/// Two-segment split of an ascending ratio series at the largest
/// normalized jump in first differences. found is false for a constant
/// series. Errors: too_few_points (< 4).
struct TransitionReport {
    bool found = false;
    std::size_t boundary = 0; // first index of the upper segment
    double jump = 0.0;        // normalized first difference at the boundary
    SegmentSummary low;
    SegmentSummary high;
};

TransitionReport detect_transition(std::span<const double> sorted_ratios);

/// Spearman rank correlation (average ranks for ties); exactly +-1 for
/// strictly monotone data. Errors: too_few_points (< 3).
double spearman(std::span<const double> x, std::span<const double> y);

} // namespace tilekmc
