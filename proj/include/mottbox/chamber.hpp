#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mottbox/mott.hpp"
#include "mottbox/rng.hpp"
#include "mottbox/vec3.hpp"

// Cloud-chamber model: many gas atoms around the emitter, alignment chains
// and the deterministic choice of one track per gas configuration.
namespace mottbox::chamber {

using mott::Obstacle;
using mott::ScatteringContext;

struct GasConfiguration {
    std::vector<Obstacle> atoms;
    double chamber_radius = 0.0;
    double inner_radius = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Radii ordered, every atom valid and inside the shell, and
// inner_radius >= 10 * (largest atom width).
void validate(const GasConfiguration& config);

struct GasParams {
    double density = 0.0;  // atoms per unit volume
    double inner_radius = 0.0;
    double chamber_radius = 0.0;
    Obstacle atom;  // template; position is ignored
};

inline constexpr double kMaxExpectedAtoms = 1e7;

// Poisson number of atoms with mean density * shell volume, each placed
// uniformly in the shell. The result depends only on (params, rng state).
GasConfiguration sample_gas(const GasParams& params, RngStream& rng);

struct ConeAngle {
    double radians;
    bool wide;  // radians > pi/6: the cone is no longer narrow
};

// Angle at which the envelope exp(-q^2 s^2 / 2) has dropped to
// exp(-level): theta = 2 asin(sqrt(2 level) / (2 k s)). The default level
// 1/2 gives 2 asin(1 / (2 k s)). Throws ValidationError when no such angle
// exists (k s <= 1/2 at the default level).
ConeAngle cone_half_angle(const ScatteringContext& ctx, double width, double level = 0.5);

// Chained Born amplitude for exciting atom a and then atom b: the peaked
// inelastic wave from a, evaluated toward b, propagated to b and
// re-scattered there with b's forward Born amplitude g1 sqrt(2 pi) s^3:
//
//   I1_a(theta_ab) * e^{ik|b-a|} / |b-a| * g1_b sqrt(2 pi) s_b^3
//
// with theta_ab the angle between a-hat and (b - a). Requires |b| > |a|,
// both atoms asymptotic and |b - a| >= 10 s_a.
Complex second_order_amplitude(const ScatteringContext& ctx, const Obstacle& atom_a, const Obstacle& atom_b);

struct AlignmentChain {
    std::vector<std::size_t> indices;  // head first, radii strictly increasing
    UnitVector direction;              // emitter-to-head direction
    std::size_t n() const { return indices.size(); }
};

// Greedy chains, one started from every atom in order of radius. From the
// current member, the next is the nearest atom (ties: lowest index) that is
// farther from the emitter and whose offset from the current member lies
// within theta_c (inclusive) of the head direction. Chains that are a
// proper suffix of another chain are dropped. Output is ordered by head
// radius.
std::vector<AlignmentChain> build_chains(const GasConfiguration& config, double theta_c);

struct TrackResult {
    UnitVector direction;
    AlignmentChain chain;
    double c2_per_step;
    double flux_ratio;                // c2_per_step^N
    double surviving_spherical_flux;  // flux_free * flux_ratio
    // Sum of log|C|^2 over atoms outside the selected chain; only filled when
    // requested, since it needs one normalization per atom.
    std::optional<double> off_chain_log_c2;
};

// c2^n by repeated multiplication, one factor per obstacle on the track.
double reduced_flux_ratio(double c2, std::size_t n);

struct SelectOptions {
    double cone_level = 0.5;
    bool off_chain_diagnostic = false;
};

// Picks the chain with the largest N; ties go to the smallest surviving
// flux, then to the smallest head index. The cone angle uses the largest
// atom width and |C|^2 is that of the chain head. Returns nullopt for an
// empty configuration. Pure: equal configurations give bitwise-equal results.
std::optional<TrackResult> select_track(const GasConfiguration& config, const ScatteringContext& ctx,
                                        const SelectOptions& options = {});

// Bitwise equality of every field.
bool identical(const TrackResult& a, const TrackResult& b);

inline constexpr int kZBands = 4;
inline constexpr int kPhiSectors = 8;
inline constexpr int kIsotropyBins = kZBands * kPhiSectors;

// Equal-solid-angle bin: 4 bands in z times 8 sectors in azimuth.
int direction_bin(const UnitVector& d);

struct IsotropyResult {
    std::array<std::uint64_t, kIsotropyBins> counts{};
    std::vector<std::optional<UnitVector>> tracks;  // per configuration
    std::uint64_t n_tracks = 0;
    std::uint64_t n_empty = 0;
    double chi_square = 0.0;
    double p_value = 1.0;
};

using GasSampler = std::function<GasConfiguration(std::uint64_t config_index)>;

// Runs select_track on configurations 0..n_configs-1 produced by `sampler`
// and tests the track directions for uniformity over the 32 bins
// (chi-square, 31 degrees of freedom). n_configs must be >= 100.
IsotropyResult isotropy_experiment(std::uint64_t n_configs, const GasSampler& sampler, const ScatteringContext& ctx,
                                   unsigned threads = 1);

// Configuration i is sample_gas(params, rng.substream(i)).
IsotropyResult isotropy_experiment(std::uint64_t n_configs, const GasParams& params, const ScatteringContext& ctx,
                                   const RngStream& rng, unsigned threads = 1);

}  // namespace mottbox::chamber
