#pragma once

#include <cstdint>

namespace fblkit {

// Counter-based pseudo-random stream: SplitMix64 with the initial state
// derived from (seed, stream). Stream s of a Monte Carlo run is fully
// determined by (master seed, trial index), so a run partitioned across any
// number of worker threads reproduces the serial result bit for bit.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(mix(seed ^ mix(stream + kIncrement))) {}

    std::uint64_t next_u64() noexcept {
        state_ += kIncrement;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound), unbiased (Lemire multiply-shift with
    // rejection). bound must be >= 1.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        unsigned __int128 m =
            static_cast<unsigned __int128>(next_u64()) * bound;
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

private:
    static constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace fblkit
