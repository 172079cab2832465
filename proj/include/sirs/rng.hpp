#pragma once

#include <cstdint>
#include <random>

namespace sirs {

using Rng = std::mt19937_64;

/// Independent stream for path `index` of an ensemble rooted at `root_seed`.
///
/// Splitting rule: the engine is seeded through std::seed_seq with the four
/// 32-bit halves (root_lo, root_hi, index_lo, index_hi). Path 0 is also the
/// stream used for a single simulated path, so `simulate` and the first
/// path of `ensemble` agree.
inline Rng path_stream(std::uint64_t root_seed, std::uint64_t index)
{
    std::seed_seq seq{
        static_cast<std::uint32_t>(root_seed),
        static_cast<std::uint32_t>(root_seed >> 32),
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32),
    };
    return Rng(seq);
}

} // namespace sirs
