#include "polar/rng.hpp"

#include <stdexcept>

namespace polar {

uint64_t SplitMix64::next_below(uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("next_below: bound must be positive");
    }
    // Rejection sampling: discard the low sliver that would bias the modulus.
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SplitMix64 seeded_stream(uint64_t seed, const std::vector<std::string>& parts) {
    std::string key = std::to_string(seed);
    for (const auto& p : parts) {
        key += ':';
        key += p;
    }
    return SplitMix64(fnv1a64(key));
}

}  // namespace polar
