#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace polar {

/// SplitMix64. Pinned as the project's deterministic generator so runs
/// reproduce bit-for-bit across platforms and reimplementations
/// (std:: distributions are not specified tightly enough for that).
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t state) : state_(state) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, bound) via rejection; bound must be > 0.
    uint64_t next_below(uint64_t bound);

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

uint64_t fnv1a64(std::string_view s);

/// Named substream: SplitMix64 seeded with FNV-1a 64 of
/// "<seed>:<part1>:<part2>:..." (seed rendered in decimal). Every seeded
/// operation in the toolkit derives its stream this way, e.g.
/// (seed, lang, label) for the stratified split.
SplitMix64 seeded_stream(uint64_t seed, const std::vector<std::string>& parts);

/// Forward Fisher-Yates: for i in [0, n-2], j = i + next_below(n - i),
/// swap(v[i], v[j]). Stopping after k steps yields a k-sample without
/// replacement in v[0..k).
template <typename T>
void fisher_yates(std::vector<T>& v, SplitMix64& g, size_t steps) {
    const size_t n = v.size();
    if (n < 2) return;
    const size_t last = std::min(steps, n - 1);
    for (size_t i = 0; i < last; ++i) {
        size_t j = i + static_cast<size_t>(g.next_below(n - i));
        using std::swap;
        swap(v[i], v[j]);
    }
}

template <typename T>
void fisher_yates(std::vector<T>& v, SplitMix64& g) {
    fisher_yates(v, g, v.size());
}

}  // namespace polar
