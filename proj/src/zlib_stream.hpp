#pragma once

#include <zlib.h>

#include <cstdint>
#include <span>
#include <vector>

#include "tilekmc/errors.hpp"

namespace tilekmc::detail {

/// DEFLATE at fixed maximum-effort settings (level 9, 32K window,
/// memLevel 8, default strategy). raw = true emits a bare DEFLATE
/// stream, raw = false a zlib-wrapped one (PNG IDAT). The settings are
/// frozen: compressed sizes are measurements, so the compressor must be
/// a constant.
inline std::vector<std::uint8_t> deflate_fixed(std::span<const std::uint8_t> input, bool raw) {
    z_stream zs{};
    if (deflateInit2(&zs, 9, Z_DEFLATED, raw ? -15 : 15, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        raise(Errc::encoding_failure, "deflateInit2 failed");
    std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(input.size())));
    zs.next_in = const_cast<Bytef*>(input.data());
    zs.avail_in = static_cast<uInt>(input.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) raise(Errc::encoding_failure, "deflate did not finish");
    out.resize(out.size() - zs.avail_out);
    return out;
}

} // namespace tilekmc::detail
