#pragma once

#include <cstdint>
#include <vector>

namespace turbuq {

/// Deterministic 64-bit generator (SplitMix64). Used everywhere randomness is
/// needed so that results do not depend on the standard library's
/// distribution implementations and are identical across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased integer in [0, bound). bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        // Lemire's multiply-shift with rejection.
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Finalizing mix, used to decorrelate derived stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for an independent substream of a master seed. Substreams derived for
/// different indices are decorrelated, so per-tree / per-feature work can run
/// in any order and still reproduce bit-for-bit.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 1));
}

inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return mix64(derive_stream(master, a) ^ mix64(b + 0x517cc1b727220a95ULL));
}

/// In-place Fisher-Yates shuffle driven by SplitMix64.
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(values[i - 1], values[j]);
    }
}

} // namespace turbuq
