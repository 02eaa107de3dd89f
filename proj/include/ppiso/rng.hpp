// SPDX-License-Identifier: Apache-2.0
//
// Deterministic, splittable randomness.  All simulation randomness flows
// through counter-mode SplitMix64 chains keyed by (master seed, purpose tag,
// stream index), so any sub-experiment is reproducible in isolation and
// independent of evaluation order.

#pragma once

#include <cstdint>
#include <string_view>

namespace ppiso {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// FNV-1a, used to fold tags and bit payloads into PRF keys.
inline uint64_t fnv1a64(const void* data, size_t n, uint64_t seed = 0xCBF29CE484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline uint64_t hash_tag(std::string_view tag, uint64_t seed) {
    return fnv1a64(tag.data(), tag.size(), splitmix64(seed));
}

// Counter-mode generator: word(i) is a pure function of (key, i).
class Rng {
public:
    explicit Rng(uint64_t key) : key_(key), ctr_(0) {}
    Rng(uint64_t master, std::string_view tag, uint64_t index = 0)
        : Rng(splitmix64(hash_tag(tag, master) + 0x9E3779B97F4A7C15ULL * index)) {}

    uint64_t word() { return word_at(ctr_++); }
    uint64_t word_at(uint64_t i) const { return splitmix64(key_ ^ (0xD1B54A32D192ED03ULL * (i + 1))); }

    // Uniform double in [0,1) with 53 random bits; for statistics only,
    // never for payload coordinates (those use BitStream words).
    double uniform() { return static_cast<double>(word() >> 11) * 0x1.0p-53; }

    uint64_t below(uint64_t n) {  // unbiased integer in [0, n)
        uint64_t mask = ~uint64_t{0};
        if (n == 0) return 0;
        uint64_t limit = mask - mask % n;
        uint64_t w;
        do { w = word(); } while (w >= limit);
        return w % n;
    }

    Rng fork(std::string_view tag, uint64_t index = 0) const {
        return Rng(splitmix64(hash_tag(tag, key_) + 0x9E3779B97F4A7C15ULL * index));
    }

    uint64_t key() const { return key_; }

private:
    uint64_t key_;
    uint64_t ctr_;
};

}  // namespace ppiso
