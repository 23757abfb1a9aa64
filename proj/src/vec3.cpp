#include "mottbox/vec3.hpp"

#include <algorithm>
#include <string>

#include "mottbox/error.hpp"

namespace mottbox {

UnitVector::UnitVector(const Vec3& v) {
    const double n = v.norm();
    if (!v.finite() || !(n > 0.0)) {
        throw ValidationError("UnitVector: cannot normalize a zero or non-finite vector");
    }
    v_ = v / n;
}

UnitVector UnitVector::in_xz_plane(double theta) {
    return UnitVector(Vec3{std::sin(theta), 0.0, std::cos(theta)});
}

double angle_between(const UnitVector& u, const UnitVector& v) {
    const double d = dot(u.vec(), v.vec());
    // Rounding can push |d| a hair above one for (anti)parallel inputs.
    return std::acos(std::clamp(d, -1.0, 1.0));
}

}  // namespace mottbox
