#pragma once

#include <cstdint>

#include "mottbox/vec3.hpp"

namespace mottbox {

/// Counter-based random stream.
///
/// Draw number `c` of stream (seed, id) is a pure function of (seed, id, c):
///
///     s = mix(seed + G), t = mix(id + 2G)
///     k0 = mix(s ^ (t * 0xD1B54A32D192ED03)), k1 = mix(mix(s ^ 0xA0761D6478BD642F) + t)
///     out(c) = mix(mix(k0 + (c + 1) * G) ^ k1),   G = 0x9E3779B97F4A7C15
///
/// where `mix` is the SplitMix64 finalizer (Stafford variant 13). Only 64-bit
/// integer arithmetic is involved, so sequences are identical on every
/// platform and compiler. Random access through `u64_at` lets Monte Carlo
/// loops split work across threads without changing any draw.
///
/// Uniform doubles use the top 53 bits: u = (out >> 11) * 2^-53, u in [0, 1).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t position() const { return counter_; }

    std::uint64_t next_u64() { return u64_at(counter_++); }
    double next_uniform() { return uniform_at(counter_++); }

    std::uint64_t u64_at(std::uint64_t counter) const;
    double uniform_at(std::uint64_t counter) const;

    // Moves the cursor forward by `n` draws.
    void skip(std::uint64_t n) { counter_ += n; }

    // Independent child stream; same (parent, child_id) gives the same child.
    RngStream substream(std::uint64_t child_id) const;

    // Standard normal via Box-Muller on two consecutive uniforms.
    double next_normal();

    // Poisson variate. Inversion for mean < 30, otherwise Hormann's PTRS
    // transformed rejection.
    std::uint64_t next_poisson(double mean);

    // Uniform direction on the unit sphere.
    UnitVector next_direction();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t k0_;
    std::uint64_t k1_;
    std::uint64_t counter_ = 0;
};

// SplitMix64 finalizer, exposed for hashing fixtures in tests.
std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace mottbox
