#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mmq {

// All randomness flows from one master seed through named sub-streams.
// substream(seed, "atoms", rep) gives an independent, reproducible stream;
// no global RNG anywhere.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t substream(std::uint64_t seed, std::string_view tag) {
    return splitmix64(seed ^ splitmix64(fnv1a(tag)));
}

inline std::uint64_t substream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    return splitmix64(substream(seed, tag) ^ splitmix64(index + 1));
}

inline std::uint64_t substream(std::uint64_t seed, std::string_view tag, std::uint64_t a,
                               std::uint64_t b) {
    return splitmix64(substream(seed, tag, a) ^ splitmix64(~b));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Fisher-Yates with an explicit engine, so shuffled orders are stable across
// library implementations.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(v[i - 1], v[pick(rng)]);
    }
}

}  // namespace mmq
