#include "tilekmc/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <string>

#include "zlib_stream.hpp"

namespace tilekmc {

Raster rasterize(const Lattice& lattice, int scale) {
    if (scale < 1) raise(Errc::invalid_argument, "raster scale must be >= 1");
    const int n = lattice.side();
    Raster raster{n * scale, n * scale, {}};
    raster.pixels.assign(static_cast<std::size_t>(raster.width) * raster.height, 0);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const TileInstance* tile = lattice.at({r, c});
            if (!tile) continue;
            const std::uint8_t value = static_cast<std::uint8_t>(tile->species);
            for (int dr = 0; dr < scale; ++dr) {
                std::uint8_t* row = raster.pixels.data() +
                                    static_cast<std::size_t>(r * scale + dr) * raster.width +
                                    static_cast<std::size_t>(c) * scale;
                std::memset(row, value, static_cast<std::size_t>(scale));
            }
        }
    }
    return raster;
}

std::vector<Rgb> default_palette(int entries) {
    static constexpr Rgb kBase[] = {
        {0, 0, 0},       // substrate
        {240, 200, 40},  // species 1: yellow
        {50, 90, 220},   // species 2: blue
        {220, 70, 60},   // red
        {90, 200, 120},  // green
        {200, 120, 220}, // purple
        {245, 140, 40},  // orange
        {80, 200, 200},  // teal
    };
    std::vector<Rgb> palette;
    palette.reserve(static_cast<std::size_t>(std::max(entries, 0)));
    for (int i = 0; i < entries; ++i) {
        if (i < static_cast<int>(std::size(kBase))) {
            palette.push_back(kBase[i]);
        } else {
            // Deterministic spread for large species sets.
            const std::uint8_t v = static_cast<std::uint8_t>((i * 53) % 200 + 40);
            palette.push_back({v, static_cast<std::uint8_t>(255 - v),
                               static_cast<std::uint8_t>((i * 101) % 256)});
        }
    }
    return palette;
}

namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               std::span<const std::uint8_t> payload) {
    put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const uLong crc = crc32(crc32(0L, Z_NULL, 0), out.data() + crc_start,
                            static_cast<uInt>(out.size() - crc_start));
    put_u32_be(out, static_cast<std::uint32_t>(crc));
}

} // namespace

std::vector<std::uint8_t> encode_png(const Raster& raster, std::span<const Rgb> palette) {
    if (raster.width <= 0 || raster.height <= 0 ||
        raster.pixels.size() != static_cast<std::size_t>(raster.width) * raster.height)
        raise(Errc::encoding_failure, "raster dimensions inconsistent with pixel count");
    for (std::uint8_t px : raster.pixels)
        if (px >= palette.size())
            raise(Errc::encoding_failure,
                  "palette with " + std::to_string(palette.size()) +
                      " entries does not cover pixel value " + std::to_string(px));

    std::vector<std::uint8_t> png;
    static constexpr std::uint8_t kSignature[] = {137, 80, 78, 71, 13, 10, 26, 10};
    png.insert(png.end(), std::begin(kSignature), std::end(kSignature));

    std::vector<std::uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(raster.width));
    put_u32_be(ihdr, static_cast<std::uint32_t>(raster.height));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(3); // colour type: indexed
    ihdr.push_back(0); // compression
    ihdr.push_back(0); // filter method
    ihdr.push_back(0); // no interlace
    put_chunk(png, "IHDR", ihdr);

    std::vector<std::uint8_t> plte;
    for (const Rgb& rgb : palette) plte.insert(plte.end(), rgb.begin(), rgb.end());
    put_chunk(png, "PLTE", plte);

    // Filter strategy fixed to "none": one 0 byte before each scanline.
    std::vector<std::uint8_t> scanlines;
    scanlines.reserve(static_cast<std::size_t>(raster.height) * (raster.width + 1));
    for (int r = 0; r < raster.height; ++r) {
        scanlines.push_back(0);
        const std::uint8_t* row =
            raster.pixels.data() + static_cast<std::size_t>(r) * raster.width;
        scanlines.insert(scanlines.end(), row, row + raster.width);
    }
    put_chunk(png, "IDAT", detail::deflate_fixed(scanlines, /*raw=*/false));
    put_chunk(png, "IEND", {});
    return png;
}

static constexpr char kRawMagic[8] = {'T', 'K', 'M', 'C', 'R', 'A', 'S', 'T'};

std::vector<std::uint8_t> encode_raw(const Raster& raster) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + raster.pixels.size());
    out.insert(out.end(), std::begin(kRawMagic), std::end(kRawMagic));
    auto put_u32_le = [&out](std::uint32_t v) {
        out.push_back(static_cast<std::uint8_t>(v));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        out.push_back(static_cast<std::uint8_t>(v >> 24));
    };
    put_u32_le(static_cast<std::uint32_t>(raster.width));
    put_u32_le(static_cast<std::uint32_t>(raster.height));
    out.insert(out.end(), raster.pixels.begin(), raster.pixels.end());
    return out;
}

Raster decode_raw(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kRawMagic, 8) != 0)
        raise(Errc::io_failure, "not a raw raster dump");
    auto u32_le = [&bytes](std::size_t off) {
        return static_cast<std::uint32_t>(bytes[off]) |
               static_cast<std::uint32_t>(bytes[off + 1]) << 8 |
               static_cast<std::uint32_t>(bytes[off + 2]) << 16 |
               static_cast<std::uint32_t>(bytes[off + 3]) << 24;
    };
    Raster raster;
    raster.width = static_cast<int>(u32_le(8));
    raster.height = static_cast<int>(u32_le(12));
    const std::size_t expect = static_cast<std::size_t>(raster.width) * raster.height;
    if (bytes.size() != 16 + expect)
        raise(Errc::io_failure, "raw raster length mismatch");
    raster.pixels.assign(bytes.begin() + 16, bytes.end());
    return raster;
}

Raster montage(const std::vector<Raster>& rasters, int columns, int gap,
               std::uint8_t separator_value) {
    if (rasters.empty()) raise(Errc::empty_input, "montage of zero rasters");
    if (columns < 1) raise(Errc::invalid_argument, "montage needs >= 1 column");
    const int w = rasters.front().width;
    const int h = rasters.front().height;
    for (const Raster& r : rasters)
        if (r.width != w || r.height != h)
            raise(Errc::invalid_argument, "montage rasters must share one size");

    const int count = static_cast<int>(rasters.size());
    const int cols = std::min(columns, count);
    const int rows = (count + cols - 1) / cols;
    Raster sheet{cols * w + (cols + 1) * gap, rows * h + (rows + 1) * gap, {}};
    sheet.pixels.assign(static_cast<std::size_t>(sheet.width) * sheet.height, separator_value);

    for (int i = 0; i < count; ++i) {
        const int cell_r = i / cols;
        const int cell_c = i % cols;
        const int top = gap + cell_r * (h + gap);
        const int left = gap + cell_c * (w + gap);
        for (int r = 0; r < h; ++r) {
            std::uint8_t* dst = sheet.pixels.data() +
                                static_cast<std::size_t>(top + r) * sheet.width + left;
            const std::uint8_t* src =
                rasters[static_cast<std::size_t>(i)].pixels.data() +
                static_cast<std::size_t>(r) * w;
            std::memcpy(dst, src, static_cast<std::size_t>(w));
        }
    }
    return sheet;
}

} // namespace tilekmc
