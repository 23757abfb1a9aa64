#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mottbox/vec3.hpp"

// Born scattering of an outgoing alpha s-wave on one gas atom.
//
// Units: hbar = m_alpha = 1, so k = sqrt(2 E_alpha) and the velocity equals
// the wavenumber. Every quantity the library reports (|C|^2, flux ratios,
// angular shapes) is a ratio in which the SI constants cancel; to convert
// a length L and energy E to physical units pick a length unit l0 and use
// E_phys = E * hbar^2 / (m_alpha l0^2).
namespace mottbox::mott {

enum class Channel { elastic = 0, inelastic = 1 };

struct ScatteringContext {
    double e_alpha;        // kinetic energy
    double k;              // sqrt(2 e_alpha)
    double delta_e;        // default excitation energy E1 - E0
    double k_prime;        // sqrt(2 (e_alpha - delta_e))
    double v_alpha;        // = k
    double v_alpha_prime;  // = k_prime

    // Throws ValidationError unless e_alpha > 0 and 0 <= delta_e < e_alpha.
    static ScatteringContext from_energy(double e_alpha, double delta_e = 0.0);
    static ScatteringContext from_wavenumber(double k, double delta_e = 0.0);
};

// A gas atom at `position` whose transition matrix elements are spherical
// Gaussians, V_j0(r) = g_j exp(-r^2 / (2 s^2)). `delta_e` is its excitation
// energy and sets the outgoing velocity of its inelastic channel.
struct Obstacle {
    Vec3 position;
    double width = 1.0;  // s
    double g0 = 0.0;
    double g1 = 0.0;
    double delta_e = 0.0;

    double coupling(Channel ch) const { return ch == Channel::elastic ? g0 : g1; }
};

// Minimum |position| / width for the asymptotic formulas.
inline constexpr double kMinDistanceRatio = 10.0;

// Checks width > 0, couplings >= 0, delta_e >= 0 and finiteness.
void validate(const Obstacle& obstacle);

// As validate(), plus |position| >= kMinDistanceRatio * width and
// delta_e < ctx.e_alpha. The error message reports the ratio a/s.
void validate_asymptotic(const ScatteringContext& ctx, const Obstacle& obstacle);

// Inelastic outgoing velocity sqrt(2 (E - obstacle.delta_e)).
double inelastic_velocity(const ScatteringContext& ctx, const Obstacle& obstacle);

// g_j exp(-|r|^2 / (2 s^2)), r in obstacle-local coordinates.
double form_factor(const Obstacle& obstacle, Channel channel, const Vec3& r);

// q = 2 k sin(theta / 2).
double transferred_momentum(double k, double theta);

// Far-field angular amplitude I_j(theta) of the wave scattered by the
// obstacle, theta measured from the emitter-to-obstacle direction:
//
//   I_j = (1 / 2 pi) (e^{i k a} / a) g_j (2 pi)^{3/2} s^3 exp(-q^2 s^2 / 2)
//
// which is the Born prefactor times the Fourier transform of the Gaussian
// form factor at q = 2 k sin(theta/2). The inelastic channel uses k' ~ k.
Complex angular_amplitude(const ScatteringContext& ctx, const Obstacle& obstacle, Channel channel,
                          double theta);

// I_j sampled on a fixed set of angles. Immutable once built.
struct AngularAmplitude {
    Channel channel;
    std::vector<double> theta;
    std::vector<Complex> values;
};

AngularAmplitude angular_table(const ScatteringContext& ctx, const Obstacle& obstacle, Channel channel,
                               std::span<const double> thetas);

// F_without = 4 pi v_alpha.
double flux_free(const ScatteringContext& ctx);

// Outward flux of the probability current Im(f* df/dR) of `field` through
// the sphere of given radius about the origin. The radial derivative is a
// 5-point central difference with step `step`; the sphere integral is
// Gauss-Legendre in cos(theta) times a uniform rule in phi.
double flux_through_sphere(const std::function<Complex(const Vec3&)>& field, double radius,
                           double step, int n_theta = 32, int n_phi = 32);

// Numeric counterpart of flux_free: flux_through_sphere applied to the bare
// spherical wave e^{ikR}/R.
double flux_free_numeric(const ScatteringContext& ctx, double radius = 10.0);

// Integrals int_0^pi sin(theta) |I_j(theta)|^2 dtheta for both channels.
// Starting from `n_start` nodes, the node count is doubled until two
// successive estimates agree to 1e-13 relative (or 2^16 nodes).
struct AngularIntegrals {
    double elastic = 0.0;
    double inelastic = 0.0;
    int nodes = 0;
    bool converged = false;
};

inline constexpr int kDefaultAngularNodes = 128;

AngularIntegrals angular_integrals(const ScatteringContext& ctx, const Obstacle& obstacle,
                                   int n_start = kDefaultAngularNodes);

// F = 4 pi v + 2 pi v int sin|I0|^2 + 2 pi v' int sin|I1|^2. The
// interference between the unscattered and scattered waves is dropped: it
// averages out on a large sphere.
double flux_total(const ScatteringContext& ctx, const Obstacle& obstacle, int n_start = kDefaultAngularNodes);

// |C|^2 = [1 + 1/2 int sin|I0|^2 + 1/2 (v'/v) int sin|I1|^2]^-1, so that
// |C|^2 * flux_total == flux_free.
double normalization_c2(const ScatteringContext& ctx, const Obstacle& obstacle,
                        int n_start = kDefaultAngularNodes);

// Elastic part of the first-order wave function, normalized:
//   C [ e^{ikR}/R + e^{ik|R-a|}/|R-a| I0(theta) ]
// with C = sqrt(|C|^2) real and positive. Without an obstacle this is the
// bare e^{ikR}/R. Asymptotic forms are used at every point.
class ElasticField {
public:
    explicit ElasticField(const ScatteringContext& ctx, std::optional<Obstacle> obstacle = std::nullopt);

    // Throws SingularPoint within kSingularRadius of the emitter or obstacle.
    Complex operator()(const Vec3& point) const;

    double c2() const { return c2_; }
    const std::optional<Obstacle>& obstacle() const { return obstacle_; }

    static constexpr double kSingularRadius = 1e-9;

private:
    ScatteringContext ctx_;
    std::optional<Obstacle> obstacle_;
    double c2_ = 1.0;
    double c_ = 1.0;
};

Complex wave_field(const ScatteringContext& ctx, const std::optional<Obstacle>& obstacle, const Vec3& point);

}  // namespace mottbox::mott
