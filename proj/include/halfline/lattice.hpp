#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "halfline/rng.hpp"
#include "halfline/sampler.hpp"

namespace halfline {

/// Planar nearest-neighbour walks whose horizontal trace at axis returns
/// reduces to a sign-dependent heavy-tailed walk on the line. Off the
/// horizontal axis all three variants move the same way (up/down with
/// probability 1/3 each, and horizontally toward decreasing x1 above the
/// axis, increasing x1 below it); they differ in the boundary rule on the
/// axis:
///   example41 : x1 > 0 goes up, x1 < 0 goes down, the origin splits 1/2-1/2
///   example42a: up/down 1/2 each for every x1
///   example42b: up/down 1/2 each for x1 >= 0, always down for x1 < 0
enum class LatticeVariant { example41, example42a, example42b };

struct LatticePoint {
    long long x1 = 0;
    long long x2 = 0;
};

LatticePoint lattice_step(LatticeVariant variant, LatticePoint p, SplitRng& rng);

struct EmbeddedSample {
    std::vector<long long> jumps;   // x1 displacement between axis returns
    std::vector<signed char> side;  // sign of x1 at the excursion start
    std::vector<bool> censored;     // step cap hit before the return
    std::size_t censored_count = 0;
};

/// Records the horizontal coordinate at successive returns of the walk to
/// the axis, as jump increments. An excursion exceeding step_cap steps is
/// recorded as censored (and truncated there).
EmbeddedSample extract_embedded(LatticeVariant variant, long long start_x1,
                                std::size_t n_returns, SplitRng& rng,
                                std::uint64_t step_cap = 100000000ull);

/// Pools embedded jumps from a fixed number of independent replica chains
/// (streams 0..replicas-1 of the master seed), concatenated in replica
/// order; results do not depend on the worker count.
EmbeddedSample collect_embedded(LatticeVariant variant, long long start_x1,
                                std::size_t n_returns, std::uint64_t master_seed,
                                int threads, int replicas = 64,
                                std::uint64_t step_cap = 100000000ull);

/// Log-CCDF slope of |jump| over its upper decades. Requires at least
/// 10^4 uncensored embedded jumps.
TailFit fit_embedded_tail(const EmbeddedSample& sample, std::uint64_t seed = 1);

bool lattice_variant_from_string(const std::string& s, LatticeVariant& out);
std::string to_string(LatticeVariant v);

}  // namespace halfline
