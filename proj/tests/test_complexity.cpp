#include <doctest.h>

#include <cmath>

#include "tilekmc/complexity.hpp"
#include "tilekmc/lattice.hpp"
#include "tilekmc/render.hpp"
#include "tilekmc/rng.hpp"

using namespace tilekmc;

namespace {

std::vector<std::uint8_t> constant_bytes(std::size_t n, std::uint8_t v) {
    return std::vector<std::uint8_t>(n, v);
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.uniform_index(256));
    return out;
}

// 64x64 scatter raster: the structured fixture class whose complexity
// is high enough for NCD self-distances to be meaningful.
std::vector<std::uint8_t> scatter_raster(std::uint64_t seed) {
    Lattice lat(64);
    RngStream rng(seed);
    while (lat.occupied_count() < 1024) {
        const Pos p{static_cast<int>(rng.uniform_index(64)),
                    static_cast<int>(rng.uniform_index(64))};
        if (!lat.occupied(p))
            lat.place({static_cast<int>(rng.uniform_index(2)) + 1, 0, p});
    }
    return canonical_bytes(rasterize(lat));
}

// Clustered raster grown by sticky attachment around seeds.
std::vector<std::uint8_t> clustered_raster(std::uint64_t seed) {
    Lattice lat(64);
    RngStream rng(seed);
    lat.place({1, 0, {20, 20}});
    lat.place({2, 0, {44, 44}});
    while (lat.occupied_count() < 1024) {
        Pos p{static_cast<int>(rng.uniform_index(64)), static_cast<int>(rng.uniform_index(64))};
        for (int walk = 0; walk < 4000; ++walk) {
            bool touching = false;
            for (const auto& nb : lat.neighbors(p)) touching |= nb.occupied;
            if (touching && !lat.occupied(p)) {
                lat.place({static_cast<int>(rng.uniform_index(2)) + 1, 0, p});
                break;
            }
            const auto dir = static_cast<Direction>(rng.uniform_index(4));
            p = lat.neighbor(p, dir);
        }
    }
    return canonical_bytes(rasterize(lat));
}

} // namespace

TEST_CASE("compress_len on degenerate inputs") {
    CHECK(compress_len_bits(constant_bytes(1024, 'A')) < 200);
    CHECK(compress_len_bits(random_bytes(1024, 42)) >= static_cast<std::int64_t>(0.95 * 8192));
    CHECK_THROWS_AS(compress_len_bits({}), Error);
}

TEST_CASE("compress_len is deterministic") {
    const auto x = scatter_raster(3);
    CHECK(compress_len_bits(x) == compress_len_bits(x));
}

TEST_CASE("compress_len subadditivity on a doubled input") {
    for (std::uint64_t seed : {1ULL, 5ULL}) {
        const auto x = scatter_raster(seed);
        std::vector<std::uint8_t> xx(x);
        xx.insert(xx.end(), x.begin(), x.end());
        CHECK(compress_len_bits(xx) <= 2 * compress_len_bits(x) + 256);
    }
}

TEST_CASE("compression ratio") {
    const auto constant = constant_bytes(4096, 0);
    const auto ratio_constant =
        compression_ratio(compress_len_bits(constant), static_cast<std::int64_t>(constant.size()));
    CHECK(ratio_constant < 0.05);
    CHECK(ratio_constant > 0.0);

    const auto noise = random_bytes(4096, 9);
    const auto ratio_noise =
        compression_ratio(compress_len_bits(noise), static_cast<std::int64_t>(noise.size()));
    CHECK(ratio_noise >= 0.95);
    CHECK(ratio_noise <= 1.1); // stream overhead may push it just past 1

    CHECK_THROWS_AS(compression_ratio(100, 0), Error);
}

TEST_CASE("ratio field stays consistent with C and raw_len") {
    const auto rec = make_compression_record("r", scatter_raster(2));
    CHECK(rec.ratio ==
          static_cast<double>(rec.compressed_bits) / (8.0 * static_cast<double>(rec.raw_len)));
    CHECK(rec.compressed_bits <= rec.raw_len * 8 + 256);
}

TEST_CASE("near-constant lattices sit at the bottom of the observed ratio scale") {
    // 256x256 run scale: an all-substrate raster lands in the same
    // order of magnitude as the smallest observed ratios, a structured
    // one is well above it.
    const auto empty = constant_bytes(256 * 256, 0);
    const double ratio_empty =
        compression_ratio(compress_len_bits(empty), static_cast<std::int64_t>(empty.size()));
    CHECK(ratio_empty < 0.005);

    Lattice lat(256);
    RngStream rng(4);
    for (int i = 0; i < 256 * 256 / 4; ++i) {
        const Pos p{static_cast<int>(rng.uniform_index(256)),
                    static_cast<int>(rng.uniform_index(256))};
        if (!lat.occupied(p))
            lat.place({static_cast<int>(rng.uniform_index(2)) + 1, 0, p});
    }
    const auto scatter = canonical_bytes(rasterize(lat));
    const double ratio_scatter =
        compression_ratio(compress_len_bits(scatter), static_cast<std::int64_t>(scatter.size()));
    CHECK(ratio_scatter > 10.0 * ratio_empty);
}

TEST_CASE("ncd fundamentals") {
    const auto a = scatter_raster(1);
    const auto b = scatter_raster(2);
    const auto c = clustered_raster(3);
    const auto noise = random_bytes(4096, 77);

    SUBCASE("self distance is small for structured rasters") {
        CHECK(ncd(a, a) <= 0.1);
        CHECK(ncd(b, b) <= 0.1);
    }
    SUBCASE("approximately symmetric") {
        CHECK(std::abs(ncd(a, b) - ncd(b, a)) <= 0.05);
        CHECK(std::abs(ncd(a, c) - ncd(c, a)) <= 0.05);
    }
    SUBCASE("same-structure-different-seed is closer than structure vs noise") {
        CHECK(ncd(a, noise) > ncd(a, b));
    }
    SUBCASE("bounded by the compressor-imperfection band") {
        for (const auto* x : {&a, &b, &c})
            for (const auto* y : {&a, &b, &c}) {
                const double d = ncd(*x, *y);
                CHECK(d >= 0.0);
                CHECK(d <= 1.1);
            }
    }
    SUBCASE("empty inputs are rejected") {
        CHECK_THROWS_AS(ncd({}, a), Error);
        CHECK_THROWS_AS(ncd(a, {}), Error);
    }
}

TEST_CASE("parameter distance") {
    CHECK(param_distance({0, 0, 0, 0}) == 0.0);
    CHECK(param_distance({1, 1, 1, 1}) == 2.0);
    CHECK(std::abs(param_distance({0.5, 0.1, 0.1, 0.1}) - std::sqrt(0.28)) <= 1e-15);
    CHECK(param_distance({0.5, 0.1, 0.1, 0.1}) == doctest::Approx(0.52915).epsilon(1e-5));
}

TEST_CASE("sort_by_ratio") {
    const std::vector<CompressionRecord> sorted = {
        {"a", 10, 80, 0.1}, {"b", 10, 160, 0.2}, {"c", 10, 240, 0.3}};
    CHECK(sort_by_ratio(sorted) == std::vector<CompressionRecord>(sorted));

    std::vector<CompressionRecord> reversed(sorted.rbegin(), sorted.rend());
    CHECK(sort_by_ratio(reversed) == std::vector<CompressionRecord>(sorted));

    std::vector<CompressionRecord> ties = {
        {"z", 10, 80, 0.1}, {"a", 10, 80, 0.1}, {"m", 10, 80, 0.1}};
    const auto out = sort_by_ratio(ties);
    CHECK(out[0].run_id == "a");
    CHECK(out[1].run_id == "m");
    CHECK(out[2].run_id == "z");
}

TEST_CASE("sort_by_ratio is a permutation") {
    RngStream rng(6);
    std::vector<CompressionRecord> records;
    for (int i = 0; i < 50; ++i)
        records.push_back({"r" + std::to_string(i), 100, static_cast<std::int64_t>(i),
                           rng.uniform01()});
    const auto out = sort_by_ratio(records);
    REQUIRE(out.size() == records.size());
    std::vector<std::int64_t> in_bits, out_bits;
    for (const auto& r : records) in_bits.push_back(r.compressed_bits);
    for (const auto& r : out) out_bits.push_back(r.compressed_bits);
    std::sort(in_bits.begin(), in_bits.end());
    std::sort(out_bits.begin(), out_bits.end());
    CHECK(in_bits == out_bits);
}

TEST_CASE("transition detection") {
    SUBCASE("constant series has no transition") {
        const std::vector<double> flat(8, 0.25);
        const auto report = detect_transition(flat);
        CHECK_FALSE(report.found);
    }
    SUBCASE("step series splits at the jump") {
        const std::vector<double> step = {0, 0, 0, 1, 1, 1};
        const auto report = detect_transition(step);
        CHECK(report.found);
        CHECK(report.boundary == 3);
        CHECK(report.jump == 1.0);
        CHECK(report.low.end == 3);
        CHECK(report.high.begin == 3);
        CHECK(report.low.mean == 0.0);
        CHECK(report.high.mean == 1.0);
    }
    SUBCASE("too few points") {
        const std::vector<double> three = {0, 0, 1};
        CHECK_THROWS_AS(detect_transition(three), Error);
    }
}

TEST_CASE("spearman correlation") {
    SUBCASE("strictly monotone is exactly +-1") {
        const std::vector<double> x = {1, 2, 3, 4, 5};
        const std::vector<double> up = {10, 20, 25, 70, 90};
        const std::vector<double> down = {5, 4, 2, 1, 0};
        CHECK(spearman(x, up) == 1.0);
        CHECK(spearman(x, down) == -1.0);
    }
    SUBCASE("monotone through nonlinearity is still 1") {
        std::vector<double> x, y;
        for (int i = 1; i <= 20; ++i) {
            x.push_back(i);
            y.push_back(std::exp(0.3 * i));
        }
        CHECK(spearman(x, y) == 1.0);
    }
    SUBCASE("ties use average ranks") {
        // Frozen against scipy.stats.spearmanr.
        const std::vector<double> x = {1, 2, 2, 4};
        const std::vector<double> y = {10, 30, 20, 40};
        CHECK(spearman(x, y) == doctest::Approx(0.9486832980505139).epsilon(1e-12));

        const std::vector<double> x2 = {1, 2, 2, 4, 4, 7};
        const std::vector<double> y2 = {10, 30, 20, 40, 55, 50};
        CHECK(spearman(x2, y2) == doctest::Approx(0.8827348295047495).epsilon(1e-12));
    }
    SUBCASE("needs three points") {
        const std::vector<double> two = {1, 2};
        CHECK_THROWS_AS(spearman(two, two), Error);
    }
}
