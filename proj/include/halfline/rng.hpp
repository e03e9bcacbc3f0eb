#pragma once

#include <cstdint>

namespace halfline {

/// Counter-based splittable generator: stream s of master seed m produces
/// the output sequence mix(k_{m,s} + n * golden), n = 0, 1, ...; the whole
/// sequence is a pure function of (m, s, n), so results are reproducible
/// under any scheduling of the streams across workers.
class SplitRng {
public:
    SplitRng(std::uint64_t master_seed, std::uint64_t stream_id)
        : state_(mix(stream_id ^ mix(master_seed))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double strictly inside (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform double in (0,1) plus an independent coin from the low bits
    /// of the same draw (the double uses only the top 53 bits).
    double next_uniform_and_coin(bool& coin) {
        const std::uint64_t z = next_u64();
        coin = (z & 1u) != 0;
        return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace halfline
