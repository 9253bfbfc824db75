#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vrelay {

using Rng = std::mt19937_64;

// Transforms are written out so that streams are identical across standard
// library implementations.

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(rng);
}

inline double exponential(Rng& rng, double mean)
{
    return -mean * std::log1p(-uniform01(rng));
}

inline bool bernoulli(Rng& rng, double p)
{
    return uniform01(rng) < p;
}

/// Stream for block `index` of a run seeded with `master`.
inline Rng make_stream(std::uint64_t master, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu};
    return Rng(seq);
}

}  // namespace vrelay
