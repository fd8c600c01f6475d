#include "sieve/conformal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace sieve {

ObstacleMap::ObstacleMap(ObstacleShape shape) : shape_(shape) {
    if (shape_.kind == ShapeKind::disk) {
        beta_ = 1.0;
        c2_ = 0.0;
        c_ = 0.0;
    } else {
        beta_ = 2.0 / (shape_.p + shape_.q);
        c2_ = shape_.p * shape_.p - shape_.q * shape_.q;
        c_ = std::sqrt(std::max(0.0, c2_));
    }
}

Complex ObstacleMap::focal_sqrt(Complex z) const {
    // principal roots of (z - c), (z + c): the two half-line cuts overlap and
    // cancel on (-inf, -c], leaving a single cut on the focal segment; the
    // product behaves like +z at infinity in every direction
    return std::sqrt(z - c_) * std::sqrt(z + c_);
}

Complex ObstacleMap::forward(Complex z) const {
    if (shape_.kind == ShapeKind::disk) return z;
    return (z + focal_sqrt(z)) / (shape_.p + shape_.q);
}

Complex ObstacleMap::inverse(Complex zeta) const {
    if (std::abs(zeta) < 1.0 - 1e-12)
        throw std::invalid_argument("map inverse: |zeta| must be >= 1");
    if (shape_.kind == ShapeKind::disk) return zeta;
    return 0.5 * (shape_.p + shape_.q) * zeta + 0.5 * (shape_.p - shape_.q) / zeta;
}

Complex ObstacleMap::derivative(Complex z) const {
    if (shape_.kind == ShapeKind::disk) return {1.0, 0.0};
    Complex f = focal_sqrt(z);
    return (1.0 + z / f) / (shape_.p + shape_.q);
}

Complex ObstacleMap::second_derivative(Complex z) const {
    if (shape_.kind == ShapeKind::disk) return {0.0, 0.0};
    Complex f = focal_sqrt(z);
    return -c2_ / (f * f * f * (shape_.p + shape_.q));
}

Complex ObstacleMap::third_derivative(Complex z) const {
    if (shape_.kind == ShapeKind::disk) return {0.0, 0.0};
    Complex f = focal_sqrt(z);
    return 3.0 * c2_ * z / (f * f * f * f * f * (shape_.p + shape_.q));
}

Complex ObstacleMap::h(Complex z) const {
    if (shape_.kind == ShapeKind::disk) return {0.0, 0.0};
    // h = T - beta z = (f - z)/(p+q) = -c^2 / ((p+q)(f + z)); the latter form
    // avoids cancellation in the far field
    Complex f = focal_sqrt(z);
    return -c2_ / ((shape_.p + shape_.q) * (f + z));
}

namespace {
Vec2 sample_exterior(const ObstacleShape& shape, std::mt19937_64& rng, double rmax) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> rad(0.0, 1.0);
    for (;;) {
        double t = ang(rng);
        double rb = shape.boundary_radius(t);
        double r = rb + (rmax - rb) * rad(rng) * rad(rng); // bias toward boundary
        Vec2 x{r * std::cos(t), r * std::sin(t)};
        if (!shape.contains_local(x)) return x;
    }
}
} // namespace

LipschitzReport estimate_lipschitz(const ObstacleMap& map, int npairs,
                                   std::uint64_t seed, double rmax) {
    std::mt19937_64 rng(seed);
    LipschitzReport rep;
    for (int k = 0; k < npairs; ++k) {
        Vec2 a = sample_exterior(map.shape(), rng, rmax);
        Vec2 b = sample_exterior(map.shape(), rng, rmax);
        double d = (a - b).norm();
        if (d < 1e-9) continue;
        Complex Ta = map.forward(to_complex(a));
        Complex Tb = map.forward(to_complex(b));
        rep.lip_forward = std::max(rep.lip_forward, std::abs(Ta - Tb) / d);
        double dz = std::abs(Ta - Tb);
        if (dz > 1e-9)
            rep.lip_inverse = std::max(rep.lip_inverse, d / dz);
    }
    // derivative magnitudes on the boundary dominate the quotients; include
    // a boundary sweep so short sampling runs do not understate the constant
    for (int k = 0; k < 512; ++k) {
        double t = 2.0 * std::numbers::pi * k / 512;
        Complex z = to_complex(map.shape().boundary_point(t)) * (1.0 + 1e-9);
        double dT = std::abs(map.derivative(z));
        rep.lip_forward = std::max(rep.lip_forward, dT);
        if (dT > 1e-12) rep.lip_inverse = std::max(rep.lip_inverse, 1.0 / dT);
    }
    return rep;
}

MapDiagnostics map_diagnostics(const ObstacleMap& map, std::uint64_t seed) {
    MapDiagnostics d;
    d.beta = map.beta();
    for (int k = 0; k < 1000; ++k) {
        double t = 2.0 * std::numbers::pi * k / 1000;
        Complex zb = to_complex(map.shape().boundary_point(t));
        d.h_sup = std::max(d.h_sup, std::abs(map.h(zb)));
        Complex zf = std::polar(1.0 + 1000.0 * (k + 1) / 1000.0, t * 7.0);
        d.h_sup = std::max(d.h_sup, std::abs(map.h(zf)));
    }
    auto lip = estimate_lipschitz(map, 20000, seed);
    d.lip_forward = lip.lip_forward;
    d.lip_inverse = lip.lip_inverse;
    return d;
}

AnnulusBounds annulus_bounds(const LocalMap& m, double r, int samples) {
    AnnulusBounds b{1e300, 0.0};
    for (int k = 0; k < samples; ++k) {
        double t = 2.0 * std::numbers::pi * k / samples;
        Vec2 x = m.center + Vec2{r * std::cos(t), r * std::sin(t)};
        Vec2 local = (x - m.center) / m.eps;
        if (m.base->shape().contains_local(local)) continue;
        double v = std::abs(m.forward(x)) * m.eps / r;
        b.lower = std::min(b.lower, v);
        b.upper = std::max(b.upper, v);
    }
    return b;
}

} // namespace sieve
