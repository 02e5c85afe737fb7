#pragma once

#include <cstdint>
#include <random>

#include "tilekmc/errors.hpp"

namespace tilekmc {

/// Seeded pseudo-random stream with a defined, portable draw order.
///
/// The generator is std::mt19937_64, whose output sequence for a given
/// seed is fixed by the C++ standard. Standard-library distributions are
/// not portable, so the two draw primitives below are implemented here:
///
///   uniform01()       one raw 64-bit draw, top 53 bits -> [0,1)
///   uniform_index(n)  raw 64-bit draws, rejection-sampled to kill
///                     modulo bias, then reduced mod n
///
/// Identical seed implies an identical draw sequence on all platforms.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) raise(Errc::invalid_argument, "uniform_index needs n > 0");
        const std::uint64_t rem = (UINT64_MAX % n + 1) % n; // 2^64 mod n
        std::uint64_t x = gen_();
        while (rem != 0 && x > UINT64_MAX - rem) x = gen_();
        return x % n;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace tilekmc
