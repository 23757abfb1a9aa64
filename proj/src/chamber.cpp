#include "mottbox/chamber.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "mottbox/error.hpp"
#include "mottbox/parallel.hpp"

namespace mottbox::chamber {

namespace {

constexpr double kPi = std::numbers::pi;

double max_width(const std::vector<Obstacle>& atoms) {
    double w = 0.0;
    for (const auto& a : atoms) w = std::max(w, a.width);
    return w;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_bits(const UnitVector& a, const UnitVector& b) {
    return same_bits(a.x(), b.x()) && same_bits(a.y(), b.y()) && same_bits(a.z(), b.z());
}

}  // namespace

void validate(const GasConfiguration& config) {
    if (!(std::isfinite(config.inner_radius) && config.inner_radius > 0.0 &&
          std::isfinite(config.chamber_radius) && config.chamber_radius >= config.inner_radius)) {
        throw ValidationError("GasConfiguration: need 0 < inner_radius <= chamber_radius");
    }
    const double w = max_width(config.atoms);
    if (config.inner_radius < mott::kMinDistanceRatio * w) {
        std::ostringstream msg;
        msg << "GasConfiguration: inner_radius " << config.inner_radius << " must be >= "
            << mott::kMinDistanceRatio << " * max width (" << w << ")";
        throw ValidationError(msg.str());
    }
    for (std::size_t i = 0; i < config.atoms.size(); ++i) {
        mott::validate(config.atoms[i]);
        const double r = config.atoms[i].position.norm();
        if (r < config.inner_radius || r > config.chamber_radius) {
            std::ostringstream msg;
            msg << "GasConfiguration: atom " << i << " at radius " << r << " lies outside the shell ["
                << config.inner_radius << ", " << config.chamber_radius << "]";
            throw ValidationError(msg.str());
        }
    }
}

GasConfiguration sample_gas(const GasParams& params, RngStream& rng) {
    if (!(std::isfinite(params.density) && params.density >= 0.0)) {
        throw ValidationError("sample_gas: density must be finite and >= 0");
    }
    mott::validate(params.atom);
    GasConfiguration config;
    config.inner_radius = params.inner_radius;
    config.chamber_radius = params.chamber_radius;
    config.seed = rng.seed();
    config.stream = rng.stream_id();
    validate(config);
    if (params.inner_radius < mott::kMinDistanceRatio * params.atom.width) {
        throw ValidationError("sample_gas: inner_radius must be >= 10 * atom width");
    }

    const double r0 = params.inner_radius;
    const double r1 = params.chamber_radius;
    const double volume = 4.0 / 3.0 * kPi * (r1 * r1 * r1 - r0 * r0 * r0);
    const double expected = params.density * volume;
    if (expected > kMaxExpectedAtoms) {
        std::ostringstream msg;
        msg << "sample_gas: expected atom count " << expected << " exceeds the limit " << kMaxExpectedAtoms;
        throw ValidationError(msg.str());
    }

    const std::uint64_t count = rng.next_poisson(expected);
    config.atoms.reserve(count);
    const double c0 = r0 * r0 * r0;
    const double c1 = r1 * r1 * r1;
    for (std::uint64_t i = 0; i < count; ++i) {
        const double r = std::cbrt(c0 + rng.next_uniform() * (c1 - c0));
        const UnitVector dir = rng.next_direction();
        Obstacle atom = params.atom;
        atom.position = dir.vec() * std::clamp(r, r0, r1);
        config.atoms.push_back(atom);
    }
    return config;
}

ConeAngle cone_half_angle(const ScatteringContext& ctx, double width, double level) {
    if (!(width > 0.0) || !(level > 0.0)) throw ValidationError("cone_half_angle: width and level must be > 0");
    const double ks = ctx.k * width;
    const double arg = std::sqrt(2.0 * level) / (2.0 * ks);
    if (!(arg < 1.0)) {
        std::ostringstream msg;
        msg << "cone_half_angle: k s = " << ks << " is too small for a forward cone at level exp(-" << level << ")";
        throw ValidationError(msg.str());
    }
    const double theta = 2.0 * std::asin(arg);
    return {theta, theta > kPi / 6.0};
}

Complex second_order_amplitude(const ScatteringContext& ctx, const Obstacle& atom_a, const Obstacle& atom_b) {
    mott::validate_asymptotic(ctx, atom_a);
    mott::validate_asymptotic(ctx, atom_b);
    if (!(atom_b.position.norm() > atom_a.position.norm())) {
        throw ValidationError("second_order_amplitude: atom b must be farther from the emitter than atom a");
    }
    const Vec3 ab = atom_b.position - atom_a.position;
    const double d = ab.norm();
    if (!(d >= mott::kMinDistanceRatio * atom_a.width)) {
        throw ValidationError("second_order_amplitude: |b - a| must be >= 10 s_a");
    }
    const double theta = angle_between(UnitVector(atom_a.position), UnitVector(ab));
    const Complex first = mott::angular_amplitude(ctx, atom_a, mott::Channel::inelastic, theta);
    const double s = atom_b.width;
    const double forward_b = atom_b.g1 * std::sqrt(2.0 * kPi) * s * s * s;
    return first * std::polar(1.0 / d, ctx.k * d) * forward_b;
}

std::vector<AlignmentChain> build_chains(const GasConfiguration& config, double theta_c) {
    const auto& atoms = config.atoms;
    const std::size_t n = atoms.size();
    std::vector<double> radius(n);
    for (std::size_t i = 0; i < n; ++i) radius[i] = atoms[i].position.norm();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return radius[l] < radius[r]; });
    std::vector<std::size_t> rank(n);
    for (std::size_t p = 0; p < n; ++p) rank[order[p]] = p;

    const double cos_c = std::cos(theta_c);
    std::vector<AlignmentChain> chains;
    chains.reserve(n);
    for (std::size_t head : order) {
        const UnitVector axis(atoms[head].position);
        AlignmentChain chain{{head}, axis};
        std::size_t cur = head;
        for (;;) {
            std::size_t best = n;
            double best_d2 = 0.0;
            for (std::size_t p = rank[cur] + 1; p < n; ++p) {
                const std::size_t j = order[p];
                if (!(radius[j] > radius[cur])) continue;
                const Vec3 off = atoms[j].position - atoms[cur].position;
                const double d2 = off.norm2();
                // Cheap reject before the exact angle test.
                if (dot(off, axis.vec()) < (cos_c - 1e-9) * std::sqrt(d2)) continue;
                if (angle_between(axis, UnitVector(off)) > theta_c) continue;
                if (best == n || d2 < best_d2 || (d2 == best_d2 && j < best)) {
                    best = j;
                    best_d2 = d2;
                }
            }
            if (best == n) break;
            chain.indices.push_back(best);
            cur = best;
        }
        chains.push_back(std::move(chain));
    }

    // A chain started at a non-head member of another chain that reproduces
    // that chain's tail adds nothing.
    std::vector<std::size_t> chain_of_head(n);
    for (std::size_t c = 0; c < chains.size(); ++c) chain_of_head[chains[c].indices.front()] = c;
    std::vector<bool> suffix(chains.size(), false);
    for (const auto& chain : chains) {
        for (std::size_t p = 1; p < chain.indices.size(); ++p) {
            const std::size_t c = chain_of_head[chain.indices[p]];
            const auto& other = chains[c].indices;
            if (other.size() == chain.indices.size() - p &&
                std::equal(other.begin(), other.end(), chain.indices.begin() + static_cast<std::ptrdiff_t>(p))) {
                suffix[c] = true;
            }
        }
    }
    std::vector<AlignmentChain> out;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        if (!suffix[c]) out.push_back(std::move(chains[c]));
    }
    return out;
}

double reduced_flux_ratio(double c2, std::size_t n) {
    double ratio = 1.0;
    for (std::size_t i = 0; i < n; ++i) ratio *= c2;
    return ratio;
}

std::optional<TrackResult> select_track(const GasConfiguration& config, const ScatteringContext& ctx,
                                        const SelectOptions& options) {
    validate(config);
    if (config.atoms.empty()) return std::nullopt;
    const double theta_c = cone_half_angle(ctx, max_width(config.atoms), options.cone_level).radians;
    const auto chains = build_chains(config, theta_c);

    std::size_t longest = 0;
    for (const auto& c : chains) longest = std::max(longest, c.n());

    const AlignmentChain* best = nullptr;
    double best_c2 = 0.0;
    double best_ratio = 0.0;
    for (const auto& c : chains) {
        if (c.n() != longest) continue;
        const std::size_t head = c.indices.front();
        const double c2 = mott::normalization_c2(ctx, config.atoms[head]);
        const double ratio = reduced_flux_ratio(c2, c.n());
        if (!best || ratio < best_ratio || (ratio == best_ratio && head < best->indices.front())) {
            best = &c;
            best_c2 = c2;
            best_ratio = ratio;
        }
    }

    TrackResult result{best->direction, *best, best_c2, best_ratio, mott::flux_free(ctx) * best_ratio, std::nullopt};
    if (options.off_chain_diagnostic) {
        std::vector<bool> on_chain(config.atoms.size(), false);
        for (auto i : best->indices) on_chain[i] = true;
        double log_c2 = 0.0;
        for (std::size_t i = 0; i < config.atoms.size(); ++i) {
            if (!on_chain[i]) log_c2 += std::log(mott::normalization_c2(ctx, config.atoms[i]));
        }
        result.off_chain_log_c2 = log_c2;
    }
    return result;
}

bool identical(const TrackResult& a, const TrackResult& b) {
    if (!same_bits(a.direction, b.direction) || !same_bits(a.chain.direction, b.chain.direction)) return false;
    if (a.chain.indices != b.chain.indices) return false;
    if (!same_bits(a.c2_per_step, b.c2_per_step) || !same_bits(a.flux_ratio, b.flux_ratio) ||
        !same_bits(a.surviving_spherical_flux, b.surviving_spherical_flux)) {
        return false;
    }
    if (a.off_chain_log_c2.has_value() != b.off_chain_log_c2.has_value()) return false;
    return !a.off_chain_log_c2 || same_bits(*a.off_chain_log_c2, *b.off_chain_log_c2);
}

int direction_bin(const UnitVector& d) {
    const int band = std::clamp(static_cast<int>(std::floor((d.z() + 1.0) * 0.5 * kZBands)), 0, kZBands - 1);
    const double phi = std::atan2(d.y(), d.x()) + kPi;  // [0, 2 pi]
    const int sector = std::clamp(static_cast<int>(std::floor(phi / (2.0 * kPi) * kPhiSectors)), 0, kPhiSectors - 1);
    return band * kPhiSectors + sector;
}

IsotropyResult isotropy_experiment(std::uint64_t n_configs, const GasSampler& sampler, const ScatteringContext& ctx,
                                   unsigned threads) {
    if (n_configs < 100) throw ValidationError("isotropy_experiment: need at least 100 configurations");
    IsotropyResult result;
    result.tracks.resize(n_configs);
    parallel_chunks(n_configs, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto track = select_track(sampler(i), ctx);
            if (track) result.tracks[i] = track->direction;
        }
    });

    for (const auto& t : result.tracks) {
        if (!t) {
            ++result.n_empty;
            continue;
        }
        ++result.counts[static_cast<std::size_t>(direction_bin(*t))];
        ++result.n_tracks;
    }
    if (result.n_tracks == 0) {
        result.chi_square = 0.0;
        result.p_value = 1.0;
        return result;
    }
    const double expected = static_cast<double>(result.n_tracks) / kIsotropyBins;
    double chi2 = 0.0;
    for (auto c : result.counts) {
        const double diff = static_cast<double>(c) - expected;
        chi2 += diff * diff / expected;
    }
    result.chi_square = chi2;
    const boost::math::chi_squared dist(kIsotropyBins - 1);
    result.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    return result;
}

IsotropyResult isotropy_experiment(std::uint64_t n_configs, const GasParams& params, const ScatteringContext& ctx,
                                   const RngStream& rng, unsigned threads) {
    return isotropy_experiment(
        n_configs,
        [&](std::uint64_t i) {
            RngStream sub = rng.substream(i);
            return sample_gas(params, sub);
        },
        ctx, threads);
}

}  // namespace mottbox::chamber
