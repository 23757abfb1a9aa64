#include "mottbox/mott.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mottbox/error.hpp"
#include "mottbox/quadrature.hpp"

namespace mottbox::mott {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConvergenceTol = 1e-13;
constexpr int kMaxAngularNodes = 1 << 16;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

ScatteringContext ScatteringContext::from_energy(double e_alpha, double delta_e) {
    if (!(std::isfinite(e_alpha) && e_alpha > 0.0)) {
        throw ValidationError("ScatteringContext: e_alpha must be finite and > 0");
    }
    if (!(finite_nonneg(delta_e) && delta_e < e_alpha)) {
        throw ValidationError("ScatteringContext: need 0 <= delta_e < e_alpha");
    }
    const double k = std::sqrt(2.0 * e_alpha);
    const double kp = std::sqrt(2.0 * (e_alpha - delta_e));
    return {e_alpha, k, delta_e, kp, k, kp};
}

ScatteringContext ScatteringContext::from_wavenumber(double k, double delta_e) {
    if (!(std::isfinite(k) && k > 0.0)) throw ValidationError("ScatteringContext: k must be finite and > 0");
    return from_energy(0.5 * k * k, delta_e);
}

void validate(const Obstacle& obstacle) {
    if (!obstacle.position.finite()) throw ValidationError("Obstacle: position must be finite");
    if (!(std::isfinite(obstacle.width) && obstacle.width > 0.0)) {
        throw ValidationError("Obstacle: width must be finite and > 0");
    }
    if (!finite_nonneg(obstacle.g0) || !finite_nonneg(obstacle.g1)) {
        throw ValidationError("Obstacle: couplings g0, g1 must be finite and >= 0");
    }
    if (!finite_nonneg(obstacle.delta_e)) throw ValidationError("Obstacle: delta_e must be finite and >= 0");
}

void validate_asymptotic(const ScatteringContext& ctx, const Obstacle& obstacle) {
    validate(obstacle);
    const double ratio = obstacle.position.norm() / obstacle.width;
    if (!(ratio >= kMinDistanceRatio)) {
        std::ostringstream msg;
        msg << "Obstacle too close to the emitter for the asymptotic form: a/s = " << ratio
            << " (need >= " << kMinDistanceRatio << ")";
        throw ValidationError(msg.str());
    }
    if (!(obstacle.delta_e < ctx.e_alpha)) {
        throw ValidationError("Obstacle: excitation energy must be below the alpha energy");
    }
}

double inelastic_velocity(const ScatteringContext& ctx, const Obstacle& obstacle) {
    return std::sqrt(2.0 * (ctx.e_alpha - obstacle.delta_e));
}

double form_factor(const Obstacle& obstacle, Channel channel, const Vec3& r) {
    const double s = obstacle.width;
    return obstacle.coupling(channel) * std::exp(-r.norm2() / (2.0 * s * s));
}

double transferred_momentum(double k, double theta) { return 2.0 * k * std::sin(0.5 * theta); }

Complex angular_amplitude(const ScatteringContext& ctx, const Obstacle& obstacle, Channel channel,
                          double theta) {
    validate_asymptotic(ctx, obstacle);
    const double g = obstacle.coupling(channel);
    if (g == 0.0) return {0.0, 0.0};
    const double a = obstacle.position.norm();
    const double s = obstacle.width;
    const double q = transferred_momentum(ctx.k, theta);
    const double fourier = g * std::pow(2.0 * kPi, 1.5) * s * s * s * std::exp(-0.5 * q * q * s * s);
    return std::polar(fourier / (2.0 * kPi * a), ctx.k * a);
}

AngularAmplitude angular_table(const ScatteringContext& ctx, const Obstacle& obstacle, Channel channel,
                               std::span<const double> thetas) {
    AngularAmplitude table{channel, {thetas.begin(), thetas.end()}, {}};
    table.values.reserve(thetas.size());
    for (double t : thetas) table.values.push_back(angular_amplitude(ctx, obstacle, channel, t));
    return table;
}

double flux_free(const ScatteringContext& ctx) { return 4.0 * kPi * ctx.v_alpha; }

double flux_through_sphere(const std::function<Complex(const Vec3&)>& field, double radius, double step,
                           int n_theta, int n_phi) {
    if (!(radius > 0.0) || !(step > 0.0) || step * 2.0 >= radius) {
        throw ValidationError("flux_through_sphere: need radius > 2 step > 0");
    }
    if (n_phi < 1) throw ValidationError("flux_through_sphere: n_phi must be >= 1");
    const double dphi = 2.0 * kPi / n_phi;
    // Integrate over mu = cos(theta) so the measure is dmu dphi.
    const auto radial_current = [&](double mu) {
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * dphi;
            const Vec3 dir{sin_t * std::cos(phi), sin_t * std::sin(phi), mu};
            const auto at = [&](double r) { return field(dir * r); };
            const Complex f = at(radius);
            const Complex df = (at(radius - 2.0 * step) - 8.0 * at(radius - step) + 8.0 * at(radius + step) -
                                at(radius + 2.0 * step)) /
                               (12.0 * step);
            ring += (std::conj(f) * df).imag();
        }
        return ring * dphi * radius * radius;
    };
    return quad_1d(radial_current, -1.0, 1.0, n_theta);
}

double flux_free_numeric(const ScatteringContext& ctx, double radius) {
    const double k = ctx.k;
    const auto bare = [k](const Vec3& p) {
        const double r = p.norm();
        return std::polar(1.0 / r, k * r);
    };
    return flux_through_sphere(bare, radius, 2e-3 / k);
}

AngularIntegrals angular_integrals(const ScatteringContext& ctx, const Obstacle& obstacle, int n_start) {
    validate_asymptotic(ctx, obstacle);
    if (n_start < 2) throw ValidationError("angular_integrals: n_start must be >= 2");
    const auto integrate = [&](Channel ch, int n) {
        return quad_1d([&](double t) { return std::sin(t) * std::norm(angular_amplitude(ctx, obstacle, ch, t)); },
                       0.0, kPi, n);
    };
    AngularIntegrals out;
    int n = n_start;
    double e_prev = integrate(Channel::elastic, n);
    double i_prev = integrate(Channel::inelastic, n);
    while (n < kMaxAngularNodes) {
        const int n2 = 2 * n;
        const double e = integrate(Channel::elastic, n2);
        const double i = integrate(Channel::inelastic, n2);
        const bool ok = std::fabs(e - e_prev) <= kConvergenceTol * std::fabs(e) &&
                        std::fabs(i - i_prev) <= kConvergenceTol * std::fabs(i);
        e_prev = e;
        i_prev = i;
        n = n2;
        if (ok) {
            out.converged = true;
            break;
        }
    }
    out.elastic = e_prev;
    out.inelastic = i_prev;
    out.nodes = n;
    return out;
}

double flux_total(const ScatteringContext& ctx, const Obstacle& obstacle, int n_start) {
    const auto ints = angular_integrals(ctx, obstacle, n_start);
    const double v = ctx.v_alpha;
    const double vp = inelastic_velocity(ctx, obstacle);
    return 4.0 * kPi * v + 2.0 * kPi * v * ints.elastic + 2.0 * kPi * vp * ints.inelastic;
}

double normalization_c2(const ScatteringContext& ctx, const Obstacle& obstacle, int n_start) {
    const auto ints = angular_integrals(ctx, obstacle, n_start);
    const double ratio = inelastic_velocity(ctx, obstacle) / ctx.v_alpha;
    return 1.0 / (1.0 + 0.5 * ints.elastic + 0.5 * ratio * ints.inelastic);
}

ElasticField::ElasticField(const ScatteringContext& ctx, std::optional<Obstacle> obstacle)
    : ctx_(ctx), obstacle_(std::move(obstacle)) {
    if (obstacle_) {
        c2_ = normalization_c2(ctx_, *obstacle_);
        c_ = std::sqrt(c2_);
    }
}

Complex ElasticField::operator()(const Vec3& point) const {
    const double r = point.norm();
    if (r < kSingularRadius) throw SingularPoint("wave field evaluated at the emitter");
    const Complex spherical = std::polar(1.0 / r, ctx_.k * r);
    if (!obstacle_) return spherical;

    const Vec3 rel = point - obstacle_->position;
    const double d = rel.norm();
    if (d < kSingularRadius) throw SingularPoint("wave field evaluated at the obstacle centre");
    const double theta = angle_between(UnitVector(obstacle_->position), UnitVector(rel));
    const Complex scattered = std::polar(1.0 / d, ctx_.k * d) * angular_amplitude(ctx_, *obstacle_, Channel::elastic, theta);
    return c_ * (spherical + scattered);
}

Complex wave_field(const ScatteringContext& ctx, const std::optional<Obstacle>& obstacle, const Vec3& point) {
    return ElasticField(ctx, obstacle)(point);
}

}  // namespace mottbox::mott
