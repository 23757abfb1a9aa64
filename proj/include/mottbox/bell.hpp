#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "mottbox/rng.hpp"
#include "mottbox/vec3.hpp"

namespace mottbox::bell {

// Internal state of one measurement apparatus, uniform on [0, 1).
class HiddenVariable {
public:
    explicit HiddenVariable(double lambda);
    double lambda() const { return lambda_; }

private:
    double lambda_;
};

// |+>_axis (sign = +1) or |->_axis (sign = -1).
struct PolarizedState {
    UnitVector axis;
    int sign;

    PolarizedState(UnitVector axis_, int sign_);
};

struct ApparatusSetting {
    UnitVector orientation;
};

struct CorrelationEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_trials = 0;
};

// Outcome R(state, setting, lambda) of a spin measurement. Implementations
// must be deterministic, return only +1 or -1, reproduce a polarized state
// measured along its own axis for every lambda, and average to
// sign * (axis . orientation) over uniform lambda.
class ResponseFunction {
public:
    virtual ~ResponseFunction() = default;
    virtual int operator()(const PolarizedState& state, const ApparatusSetting& setting,
                           HiddenVariable hv) const = 0;
};

// sign * (+1 if lambda < cos^2(theta/2) else -1), theta the angle between
// the polarization axis and the apparatus orientation. lambda exactly at
// the threshold gives -1.
class ThresholdResponse final : public ResponseFunction {
public:
    int operator()(const PolarizedState& state, const ApparatusSetting& setting,
                   HiddenVariable hv) const override;
};

const ResponseFunction& default_response();

int response(const PolarizedState& state, const ApparatusSetting& setting, HiddenVariable hv);

struct TrialOutcome {
    int r1;
    int r2;
};

// One EPR-Bohm pair. Apparatus 1 (setting a) is read first: r1 = +1 iff
// lambda1 < 1/2. Particle 2 is then left in |-r1>_a and measured by
// apparatus 2 with lambda2. hv1 only feeds apparatus 1, hv2 only apparatus 2.
TrialOutcome epr_trial(const ApparatusSetting& a, const ApparatusSetting& b, HiddenVariable hv1,
                       HiddenVariable hv2, const ResponseFunction& resp = default_response());

// Sample mean of r1 * r2 over n trials. Trial t draws lambda1 and lambda2
// from counters p + 2t and p + 2t + 1 of `rng`, where p is the stream
// position on entry; the stream is advanced by 2n. Results do not depend on
// `threads` (0 = hardware concurrency). Throws ValidationError for n == 0.
CorrelationEstimate correlation_mc(const ApparatusSetting& a, const ApparatusSetting& b,
                                   std::uint64_t n, RngStream& rng, unsigned threads = 1,
                                   const ResponseFunction& resp = default_response());

// Singlet-state prediction -(a . b).
double correlation_quantum(const ApparatusSetting& a, const ApparatusSetting& b);

using CorrelationFn = std::function<double(const ApparatusSetting&, const ApparatusSetting&)>;

struct BellResult {
    double lhs;
    double rhs;
    bool violated;
};

// |E(a,b) - E(a,c)| <= 1 + E(b,c); `violated` when lhs > rhs. The
// correlation is called for (a,b), (a,c), (b,c) in that order.
BellResult bell_test(const ApparatusSetting& a, const ApparatusSetting& b, const ApparatusSetting& c,
                     const CorrelationFn& correlation);

}  // namespace mottbox::bell
