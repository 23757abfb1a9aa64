#include "mottbox/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "mottbox/error.hpp"

namespace mottbox {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi's initial guess for the i-th largest root.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

[[noreturn]] void throw_non_finite(std::vector<double> point) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "non-finite integrand value at (";
    for (std::size_t i = 0; i < point.size(); ++i) msg << (i ? ", " : "") << point[i];
    msg << ")";
    throw NonFiniteIntegrand(msg.str(), std::move(point));
}

}  // namespace

std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const GaussLegendreRule>(compute_rule(n));
    return slot;
}

double quad_1d(const std::function<double(double)>& f, double lo, double hi, int n) {
    if (n < 2) throw ValidationError("quad_1d: node count must be >= 2");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("quad_1d: bounds must be finite");
    const auto rule = gauss_legendre(n);
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
        const double x = mid + half * rule->nodes[i];
        const double fx = f(x);
        if (!std::isfinite(fx)) throw_non_finite({x});
        sum += rule->weights[i] * fx;
    }
    return half * sum;
}

Complex quad_3d(const std::function<Complex(const Vec3&)>& f, double half_width, int n_per_axis) {
    if (n_per_axis < 2) throw ValidationError("quad_3d: node count must be >= 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ValidationError("quad_3d: half_width must be finite and > 0");
    }
    const auto rule = gauss_legendre(n_per_axis);
    const auto& x = rule->nodes;
    const auto& w = rule->weights;
    Complex total{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        Complex plane{0.0, 0.0};
        for (std::size_t j = 0; j < x.size(); ++j) {
            Complex line{0.0, 0.0};
            for (std::size_t l = 0; l < x.size(); ++l) {
                const Vec3 p{half_width * x[i], half_width * x[j], half_width * x[l]};
                const Complex v = f(p);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw_non_finite({p.x, p.y, p.z});
                line += w[l] * v;
            }
            plane += w[j] * line;
        }
        total += w[i] * plane;
    }
    return total * (half_width * half_width * half_width);
}

}  // namespace mottbox
