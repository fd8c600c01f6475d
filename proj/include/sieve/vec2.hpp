#pragma once

#include <cmath>
#include <complex>

namespace sieve {

using Complex = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 b) const { return {x + b.x, y + b.y}; }
    Vec2 operator-(Vec2 b) const { return {x - b.x, y - b.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 b) { x += b.x; y += b.y; return *this; }
    Vec2& operator-=(Vec2 b) { x -= b.x; y -= b.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    // counterclockwise rotation by pi/2; pairs with positive vorticity
    Vec2 perp() const { return {-y, x}; }

    double dot(Vec2 b) const { return x * b.x + y * b.y; }
    double cross(Vec2 b) const { return x * b.y - y * b.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
    double norm_inf() const { return std::max(std::fabs(x), std::fabs(y)); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline Complex to_complex(Vec2 v) { return {v.x, v.y}; }
inline Vec2 to_vec(Complex z) { return {z.real(), z.imag()}; }

// i*conj(z) as a vector: converts the complex kernel form sum conj(g) into
// the velocity vector (perp of the conjugated gradient).
inline Vec2 perp_conj(Complex g) {
    Complex u = Complex(0.0, 1.0) * std::conj(g);
    return {u.real(), u.imag()};
}

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool contains(Vec2 p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    // Euclidean distance from p to the rectangle (0 if inside).
    double distance(Vec2 p) const {
        double dx = std::max({x0 - p.x, 0.0, p.x - x1});
        double dy = std::max({y0 - p.y, 0.0, p.y - y1});
        return std::hypot(dx, dy);
    }
    Rect expanded(double m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
    bool overlaps(const Rect& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
};

} // namespace sieve
