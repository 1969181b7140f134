#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace memnet {

// All stochastic operations take an explicit engine so callers control
// determinism. Parallel work derives one independent stream per work item
// from (master seed, stage tag, index); results are then identical for any
// worker count.
using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
}  // namespace detail

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (0x9E3779B97F4A7C15ull + (b << 6) + (b >> 2));
    return detail::splitmix64(s);
}

// Stable seed for the stream identified by (master, tag, index).
inline std::uint64_t stream_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index = 0) {
    std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a over the tag
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return mix_seed(mix_seed(master, h), index);
}

inline Rng make_stream(std::uint64_t master, std::string_view tag,
                       std::uint64_t index = 0) {
    return Rng(stream_seed(master, tag, index));
}

}  // namespace memnet
