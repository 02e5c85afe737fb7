#include "tilekmc/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zlib_stream.hpp"

namespace tilekmc {

std::int64_t compress_len_bits(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) raise(Errc::empty_input, "cannot compress an empty input");
    return static_cast<std::int64_t>(detail::deflate_fixed(bytes, /*raw=*/true).size()) * 8;
}

double compression_ratio(std::int64_t compressed_bits, std::int64_t raw_len) {
    if (raw_len <= 0) raise(Errc::zero_length, "uncompressed length must be > 0");
    return static_cast<double>(compressed_bits) / (8.0 * static_cast<double>(raw_len));
}

CompressionRecord make_compression_record(const std::string& run_id,
                                          std::span<const std::uint8_t> bytes) {
    CompressionRecord rec;
    rec.run_id = run_id;
    rec.raw_len = static_cast<std::int64_t>(bytes.size());
    rec.compressed_bits = compress_len_bits(bytes);
    rec.ratio = compression_ratio(rec.compressed_bits, rec.raw_len);
    return rec;
}

double ncd(std::span<const std::uint8_t> o1, std::span<const std::uint8_t> o2) {
    if (o1.empty() || o2.empty()) raise(Errc::empty_input, "ncd over an empty input");
    std::vector<std::uint8_t> joined;
    joined.reserve(o1.size() + o2.size());
    joined.insert(joined.end(), o1.begin(), o1.end());
    joined.insert(joined.end(), o2.begin(), o2.end());

    const double c1 = static_cast<double>(compress_len_bits(o1));
    const double c2 = static_cast<double>(compress_len_bits(o2));
    const double c12 = static_cast<double>(compress_len_bits(joined));
    return (c12 - std::min(c1, c2)) / std::max(c1, c2);
}

double param_distance(const ParamPoint& p) {
    return std::sqrt(p.E_s * p.E_s + p.E_11 * p.E_11 + p.E_22 * p.E_22 + p.E_12 * p.E_12);
}

std::vector<CompressionRecord> sort_by_ratio(std::vector<CompressionRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const CompressionRecord& a, const CompressionRecord& b) {
                         if (a.ratio != b.ratio) return a.ratio < b.ratio;
                         return a.run_id < b.run_id;
                     });
    return records;
}

namespace {

SegmentSummary summarize(std::span<const double> values, std::size_t begin, std::size_t end) {
    SegmentSummary s{begin, end, values[begin], values[begin], 0.0};
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        s.min = std::min(s.min, values[i]);
        s.max = std::max(s.max, values[i]);
        total += values[i];
    }
    s.mean = total / static_cast<double>(end - begin);
    return s;
}

} // namespace

TransitionReport detect_transition(std::span<const double> sorted_ratios) {
    const std::size_t n = sorted_ratios.size();
    if (n < 4) raise(Errc::too_few_points, "transition detection needs >= 4 points");

    const auto [lo_it, hi_it] = std::minmax_element(sorted_ratios.begin(), sorted_ratios.end());
    const double range = *hi_it - *lo_it;

    TransitionReport report;
    if (range <= 0.0) {
        report.found = false;
        report.low = summarize(sorted_ratios, 0, n);
        report.high = report.low;
        return report;
    }

    std::size_t best = 0;
    double best_jump = -1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double jump = (sorted_ratios[i + 1] - sorted_ratios[i]) / range;
        if (jump > best_jump) {
            best_jump = jump;
            best = i;
        }
    }
    report.found = best_jump > 0.0;
    report.boundary = best + 1;
    report.jump = best_jump;
    report.low = summarize(sorted_ratios, 0, report.boundary);
    report.high = summarize(sorted_ratios, report.boundary, n);
    return report;
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) raise(Errc::invalid_argument, "spearman over unequal lengths");
    const std::size_t n = x.size();
    if (n < 3) raise(Errc::too_few_points, "spearman needs >= 3 points");

    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += rx[i];
    mean /= static_cast<double>(n); // rank means of x and y coincide

    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0)
        raise(Errc::degenerate_matrix, "spearman undefined for a constant series");

    // Strictly monotone data has identical (or reflected) rank vectors;
    // return the exact value instead of a rounded quotient.
    if (cov == var_x && var_x == var_y) return 1.0;
    if (cov == -var_x && var_x == var_y) return -1.0;
    return cov / (std::sqrt(var_x) * std::sqrt(var_y));
}

} // namespace tilekmc
