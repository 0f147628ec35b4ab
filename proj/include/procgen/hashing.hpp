#pragma once

#include <cstdint>
#include <string_view>

namespace procgen {

// 64-bit finalizer with splitmix constants. Every hashed quantity in the
// engine (lattice gradients, cell ids, random streams) funnels through this
// so results are bit-stable across platforms.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

inline constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

// Packs signed lattice coordinates plus a salt into one word and finalizes.
inline constexpr std::uint64_t hash_coords(std::int64_t ix, std::int64_t iy, std::int64_t iz,
                                           std::uint64_t salt = 0) {
    std::uint64_t h = salt * 0x9e3779b97f4a7c15ull;
    h = mix64(h ^ (static_cast<std::uint64_t>(ix) * 0xd6e8feb86659fd93ull));
    h = mix64(h ^ (static_cast<std::uint64_t>(iy) * 0xca01f9dd51b143dfull));
    h = mix64(h ^ (static_cast<std::uint64_t>(iz) * 0x9e3779b97f4a7c15ull));
    return h;
}

inline constexpr std::uint64_t hash_string(std::string_view s) {
    // FNV-1a, then finalized.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return mix64(h);
}

// Maps a hash to a double in [0, 1). 53 mantissa bits of entropy.
inline constexpr double hash_to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace procgen
