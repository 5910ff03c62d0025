#pragma once

#include <cmath>
#include <numbers>

namespace replica::sim {

/// World-frame vector in meters. z is up and z = 0 is the floor.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) noexcept { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) noexcept { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) noexcept { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) noexcept { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) noexcept { return a -= b; }
    friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

    double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
    double planar_norm() const noexcept { return std::hypot(x, y); }
    bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(const Vec3& a, const Vec3& b) noexcept { return (a - b).norm(); }
inline double planar_distance(const Vec3& a, const Vec3& b) noexcept { return (a - b).planar_norm(); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(a, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

/// Rotates v about the vertical axis by yaw radians.
inline Vec3 rotate_yaw(const Vec3& v, double yaw) noexcept {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

struct Pose {
    Vec3 position;
    double yaw = 0.0;  // radians in (-pi, pi]

    friend constexpr bool operator==(const Pose&, const Pose&) = default;
};

}  // namespace replica::sim
