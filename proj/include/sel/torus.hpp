#pragma once

#include <cmath>
#include <numbers>

namespace sel {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kPi = std::numbers::pi;

/// Plain 2-vector used for displacements, velocities and gradients.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Reduce a scalar coordinate to [0, 2pi).
inline double wrap_coordinate(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    // fmod can return exactly 2pi after the correction when a is a tiny
    // negative number; fold that case back to 0.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Point on the torus [0, 2pi)^2; coordinates are kept reduced.
struct TorusPoint {
    double x1 = 0.0;
    double x2 = 0.0;

    static TorusPoint wrap(double a, double b) { return {wrap_coordinate(a), wrap_coordinate(b)}; }

    TorusPoint shifted(Vec2 d) const { return wrap(x1 + d.x, x2 + d.y); }
};

/// Representative of a-b in [-pi, pi)^2.
inline Vec2 displacement(TorusPoint a, TorusPoint b) {
    auto rep = [](double d) {
        double r = std::fmod(d + kPi, kTwoPi);
        if (r < 0) r += kTwoPi;
        return r - kPi;
    };
    return {rep(a.x1 - b.x1), rep(a.x2 - b.x2)};
}

/// Integer lattice mode with signed components.
struct Mode {
    int k1 = 0;
    int k2 = 0;

    double norm2() const { return double(k1) * k1 + double(k2) * k2; }
    /// k^perp = (-k2, k1).
    Vec2 perp() const { return {double(-k2), double(k1)}; }
    double dot(TorusPoint p) const { return k1 * p.x1 + k2 * p.x2; }
    double dot(Vec2 v) const { return k1 * v.x + k2 * v.y; }
    bool operator==(const Mode&) const = default;
};

}  // namespace sel
