#pragma once

// Deterministic random utilities.  Everything here is specified down to the
// bit so that runs with the same seed produce identical output on any
// platform: we use std::mt19937_64 (whose output sequence is fixed by the
// standard) and hand-rolled bounded draws instead of std::uniform_int_distribution,
// whose mapping is implementation-defined.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace vs2 {

// SplitMix64 finalizer.  Used to decorrelate seeds derived from one another
// (e.g. per-item seeds formed by XORing a base seed with an item hash).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a 64-bit hash.  Stable across platforms; used for content digests in
// reports and for deriving per-key seeds from string identifiers.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Seed for a keyed sub-stream: mixes the run seed with a string key so that
// adding or removing items does not shift the draws of unrelated items.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
    return splitmix64(seed ^ fnv1a64(key));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, bound) by rejection sampling; unbiased and
    // identical on every conforming implementation.
    std::uint64_t bounded(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("bounded: bound must be positive");
        const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit_real() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Pick one index from [0, n).
    std::size_t pick_index(std::size_t n) {
        return static_cast<std::size_t>(bounded(static_cast<std::uint64_t>(n)));
    }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates shuffle driven by Rng::bounded; deterministic for a given seed.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = rng.pick_index(i);
        std::swap(items[i - 1], items[j]);
    }
}

// k distinct indices from [0, n), in draw order.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k exceeds population");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.pick_index(n - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

}  // namespace vs2
