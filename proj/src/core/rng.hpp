#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace euds {

// std::shuffle / std::uniform_int_distribution are implementation-defined,
// so seeded runs would not reproduce across standard libraries. These
// helpers pin the exact draw sequence to mt19937_64.

inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
    if (bound == 0) return 0;
    // Rejection sampling keeps the draw unbiased.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % bound;
}

template <typename T>
void det_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (size_t i = items.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

inline std::mt19937_64 make_rng(uint64_t seed, uint64_t stream) {
    // seed_seq keeps only 32 bits per entry, so feed it the halves.
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(stream),
                      static_cast<uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

} // namespace euds
