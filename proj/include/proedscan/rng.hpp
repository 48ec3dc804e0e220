#pragma once

#include <cstdint>
#include <vector>

namespace proedscan {

// splitmix64: tiny seeded generator used everywhere determinism is promised.
// Output sequences are pinned by this implementation, not by the platform,
// so artifacts (splits, sample plans, stub weights) reproduce bit-for-bit.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound) without modulo bias (rejection on the
    // top of the range).
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return double(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Independent substream for (seed, index). Used for per-month sampling
// strata and per-epoch shuffles: the derived stream depends only on the
// pair, never on how many other streams were consumed.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return g.next();
}

// Fisher-Yates with our own generator; std::shuffle is not stable across
// standard library implementations.
template <typename T>
void seeded_shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = std::size_t(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace proedscan
