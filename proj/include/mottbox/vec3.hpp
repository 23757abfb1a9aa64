#pragma once

#include <cmath>
#include <complex>

namespace mottbox {

using Complex = std::complex<double>;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr bool operator==(const Vec3&) const = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    constexpr double norm2() const { return x * x + y * y + z * z; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// A direction. Construction normalizes the argument; zero or non-finite
// vectors are rejected with ValidationError.
class UnitVector {
public:
    explicit UnitVector(const Vec3& v);
    UnitVector(double x, double y, double z) : UnitVector(Vec3{x, y, z}) {}

    static UnitVector x_axis() { return UnitVector(1.0, 0.0, 0.0); }
    static UnitVector y_axis() { return UnitVector(0.0, 1.0, 0.0); }
    static UnitVector z_axis() { return UnitVector(0.0, 0.0, 1.0); }

    // Unit vector in the x-z plane at polar angle `theta` from +z.
    static UnitVector in_xz_plane(double theta);

    const Vec3& vec() const { return v_; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }

    UnitVector operator-() const { return UnitVector(-v_, Normalized{}); }
    operator const Vec3&() const { return v_; }  // NOLINT(google-explicit-constructor)
    bool operator==(const UnitVector& o) const { return v_ == o.v_; }

private:
    struct Normalized {};
    UnitVector(const Vec3& v, Normalized) : v_(v) {}

    Vec3 v_;
};


// Angle in [0, pi] between two directions. The dot product is clamped to
// [-1, 1] before arccos.
double angle_between(const UnitVector& u, const UnitVector& v);

}  // namespace mottbox
