#include "mottbox/rng.hpp"

#include <cmath>
#include <numbers>

#include "mottbox/error.hpp"

namespace mottbox {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    const std::uint64_t s = splitmix64_mix(seed + kGolden);
    const std::uint64_t t = splitmix64_mix(stream_id + 2 * kGolden);
    k0_ = splitmix64_mix(s ^ (t * 0xD1B54A32D192ED03ULL));
    // k1 must not be reachable as k0 + n * kGolden, or draw n would cancel it.
    k1_ = splitmix64_mix(splitmix64_mix(s ^ 0xA0761D6478BD642FULL) + t);
}

std::uint64_t RngStream::u64_at(std::uint64_t counter) const {
    return splitmix64_mix(splitmix64_mix(k0_ + (counter + 1) * kGolden) ^ k1_);
}

double RngStream::uniform_at(std::uint64_t counter) const {
    return static_cast<double>(u64_at(counter) >> 11) * kTwoPow53Inv;
}

RngStream RngStream::substream(std::uint64_t child_id) const {
    return RngStream(splitmix64_mix(k0_ ^ splitmix64_mix(k1_ + child_id)), child_id);
}

double RngStream::next_normal() {
    // 1 - u lies in (0, 1], so the log is finite.
    const double u1 = 1.0 - next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::next_poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw ValidationError("next_poisson: mean must be finite and >= 0");
    }
    if (mean == 0.0) return 0;

    if (mean < 30.0) {
        const double u = next_uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u >= cdf && k < 1000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

    // PTRS, W. Hormann, "The transformed rejection method for generating
    // Poisson random variables", Insurance: Math. and Econ. 12 (1993).
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = next_uniform() - 0.5;
        const double v = next_uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b);
        const double rhs = -mean + k * loglam - std::lgamma(k + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(k);
    }
}

UnitVector RngStream::next_direction() {
    const double z = 2.0 * next_uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * next_uniform();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return UnitVector(Vec3{rho * std::cos(phi), rho * std::sin(phi), z});
}

}  // namespace mottbox
