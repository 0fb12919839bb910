#pragma once

#include <cstdint>
#include <string_view>

namespace provfaas {

// splitmix64. Every random draw in the project flows through this so that
// results are identical across platforms and standard-library versions
// (std::uniform_*_distribution is not portable bit-for-bit).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    float next_float() { return static_cast<float>(next() >> 40) * 0x1.0p-24f; }

    // Uniform in [0, n). Modulo bias is irrelevant at our draw counts.
    std::uint64_t next_below(std::uint64_t n) { return n ? next() % n : 0; }

private:
    std::uint64_t state_;
};

// Stable per-purpose seed derivation: one config seed fans out to stages.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    SplitMix64 mix(base ^ h);
    return mix.next();
}

}  // namespace provfaas
