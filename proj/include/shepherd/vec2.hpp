#pragma once

#include <cmath>

namespace shepherd {

// 2D position / force vector in world units. Components are expected to stay
// finite; boundary code validates inputs, the math here does not.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr bool operator==(const Vec2& r) const { return x == r.x && y == r.y; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }

    // z-component of the 3D cross product; |cross| is the area spanned and
    // gives perpendicular distance when the other operand is unit length.
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }

    double norm() const { return std::hypot(x, y); }
    constexpr double norm_sq() const { return x * x + y * y; }

    // Unit vector, or {0,0} when the norm is at or below eps. Degenerate
    // directions contribute zero force instead of NaN.
    Vec2 unit(double eps = 1e-12) const {
        const double n = norm();
        if (n <= eps) return {0.0, 0.0};
        return {x / n, y / n};
    }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline Vec2 clamp(const Vec2& v, const Vec2& lo, const Vec2& hi) {
    auto c = [](double t, double a, double b) { return t < a ? a : (t > b ? b : t); };
    return {c(v.x, lo.x, hi.x), c(v.y, lo.y, hi.y)};
}

}  // namespace shepherd
