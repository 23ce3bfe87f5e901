#pragma once

#include <cstdint>

namespace soldiv {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 low_mask(int bits) {
    return bits >= 64 ? ~u64{0} : (u64{1} << bits) - 1;
}

// 192-bit product a * b, little-endian limbs. Only needed for the one
// reciprocal constant that does not fit in 64 bits (w = 32, u = 31, minus).
struct U192 {
    u64 lo, mid, hi;
};

inline U192 mul_128x64(u128 a, u64 b) {
    u128 p0 = static_cast<u128>(static_cast<u64>(a)) * b;
    u128 p1 = static_cast<u128>(static_cast<u64>(a >> 64)) * b;
    u128 mid = static_cast<u128>(static_cast<u64>(p0 >> 64)) + static_cast<u64>(p1);
    u64 hi = static_cast<u64>(p1 >> 64) + static_cast<u64>(mid >> 64);
    return {static_cast<u64>(p0), static_cast<u64>(mid), hi};
}

// x >> s, truncated to 64 bits. Caller guarantees the true result fits.
inline u64 shr_to_u64(U192 x, int s) {
    if (s >= 128) {
        return x.hi >> (s - 128);
    }
    if (s >= 64) {
        int r = s - 64;
        return r == 0 ? x.mid : (x.mid >> r) | (x.hi << (64 - r));
    }
    return s == 0 ? x.lo : (x.lo >> s) | (x.mid << (64 - s));
}

// Counter-based splitmix64: draw j of a stream is a pure function of
// (seed, j), so sweeps can be sharded without coordinating generator state.
inline u64 splitmix64_at(u64 seed, u64 index) {
    u64 z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace soldiv
