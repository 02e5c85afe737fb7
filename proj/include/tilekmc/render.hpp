#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tilekmc/lattice.hpp"

namespace tilekmc {

/// Indexed-colour image: one byte per pixel, row major. Palette index 0
/// is the bare substrate, index k is species k.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

using Rgb = std::array<std::uint8_t, 3>;

/// Deterministic site-colour rasterization: every lattice site becomes a
/// scale x scale block of its species id (0 when empty). Orientation is
/// deliberately not rendered; species colour is the analysis signal.
Raster rasterize(const Lattice& lattice, int scale = 1);

/// Fixed palette for up to `entries` indices: black substrate, then
/// yellow/blue for the first two species, then further distinct colours.
std::vector<Rgb> default_palette(int entries);

/// Encodes an indexed-colour PNG (bit depth 8, no interlace, filter
/// "none" on every scanline, fixed DEFLATE settings). Byte-identical
/// output for identical rasters; the encoder is a constant so that the
/// PNG size itself is a usable measurement.
/// Errors: encoding_failure (palette does not cover all pixel values).
std::vector<std::uint8_t> encode_png(const Raster& raster, std::span<const Rgb> palette);

/// The raw row-major pixel bytes; the substrate for all compression
/// analysis.
inline const std::vector<std::uint8_t>& canonical_bytes(const Raster& raster) {
    return raster.pixels;
}

/// Raw raster dump: 16-byte header (magic "TKMCRAST", width u32 LE,
/// height u32 LE) followed by the pixel bytes.
std::vector<std::uint8_t> encode_raw(const Raster& raster);
Raster decode_raw(std::span<const std::uint8_t> bytes);

/// Contact-sheet montage: tiles the rasters onto a grid with `gap`
/// pixels of the given separator value between cells. All inputs must
/// share one size.
Raster montage(const std::vector<Raster>& rasters, int columns, int gap,
               std::uint8_t separator_value);

} // namespace tilekmc
