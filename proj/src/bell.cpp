#include "mottbox/bell.hpp"

#include <cmath>
#include <vector>

#include "mottbox/error.hpp"
#include "mottbox/parallel.hpp"

namespace mottbox::bell {

HiddenVariable::HiddenVariable(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0)) throw ValidationError("HiddenVariable: lambda must lie in [0, 1)");
}

PolarizedState::PolarizedState(UnitVector axis_, int sign_) : axis(axis_), sign(sign_) {
    if (sign != 1 && sign != -1) throw ValidationError("PolarizedState: sign must be +1 or -1");
}

int ThresholdResponse::operator()(const PolarizedState& state, const ApparatusSetting& setting,
                                  HiddenVariable hv) const {
    const double theta = angle_between(state.axis, setting.orientation);
    const double c = std::cos(0.5 * theta);
    return hv.lambda() < c * c ? state.sign : -state.sign;
}

const ResponseFunction& default_response() {
    static const ThresholdResponse instance;
    return instance;
}

int response(const PolarizedState& state, const ApparatusSetting& setting, HiddenVariable hv) {
    return default_response()(state, setting, hv);
}

TrialOutcome epr_trial(const ApparatusSetting& a, const ApparatusSetting& b, HiddenVariable hv1,
                       HiddenVariable hv2, const ResponseFunction& resp) {
    const int r1 = hv1.lambda() < 0.5 ? 1 : -1;
    const PolarizedState second(a.orientation, -r1);
    return {r1, resp(second, b, hv2)};
}

CorrelationEstimate correlation_mc(const ApparatusSetting& a, const ApparatusSetting& b,
                                   std::uint64_t n, RngStream& rng, unsigned threads,
                                   const ResponseFunction& resp) {
    if (n == 0) throw ValidationError("correlation_mc: need at least one trial");
    const std::uint64_t base = rng.position();

    // Integer sums keep the reduction exact, so chunking cannot change the result.
    constexpr std::size_t kChunks = 64;
    std::vector<std::int64_t> partial(kChunks, 0);
    const std::size_t n_chunks = static_cast<std::size_t>(std::min<std::uint64_t>(kChunks, n));
    parallel_chunks(n_chunks, threads, [&](std::size_t c_begin, std::size_t c_end) {
        for (std::size_t c = c_begin; c < c_end; ++c) {
            const std::uint64_t t0 = n * c / n_chunks;
            const std::uint64_t t1 = n * (c + 1) / n_chunks;
            std::int64_t sum = 0;
            for (std::uint64_t t = t0; t < t1; ++t) {
                const HiddenVariable hv1(rng.uniform_at(base + 2 * t));
                const HiddenVariable hv2(rng.uniform_at(base + 2 * t + 1));
                const auto out = epr_trial(a, b, hv1, hv2, resp);
                sum += out.r1 * out.r2;
            }
            partial[c] = sum;
        }
    });
    rng.skip(2 * n);

    std::int64_t total = 0;
    for (auto s : partial) total += s;
    const double nd = static_cast<double>(n);
    const double mean = static_cast<double>(total) / nd;
    // Products are +-1, so sum of squares is n.
    double std_error = 0.0;
    if (n > 1) {
        const double var = std::max(0.0, (nd - nd * mean * mean) / (nd - 1.0));
        std_error = std::sqrt(var / nd);
    }
    return {mean, std_error, n};
}

double correlation_quantum(const ApparatusSetting& a, const ApparatusSetting& b) {
    return -dot(a.orientation.vec(), b.orientation.vec());
}

BellResult bell_test(const ApparatusSetting& a, const ApparatusSetting& b, const ApparatusSetting& c,
                     const CorrelationFn& correlation) {
    // Sequenced so stateful estimators see a fixed call order.
    const double e_ab = correlation(a, b);
    const double e_ac = correlation(a, c);
    const double e_bc = correlation(b, c);
    const double lhs = std::fabs(e_ab - e_ac);
    const double rhs = 1.0 + e_bc;
    return {lhs, rhs, lhs > rhs};
}

}  // namespace mottbox::bell
