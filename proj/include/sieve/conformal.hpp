#pragma once

#include "sieve/geometry.hpp"
#include "sieve/vec2.hpp"

#include <cstdint>

namespace sieve {

// Riemann map T of the obstacle exterior onto the exterior of the unit disk,
// normalized T(z) = beta z + h(z) at infinity with h bounded and h' decaying.
// Disk: identity. Ellipse with semi-axes (p,q): inverse is the Joukowski map
//   T^{-1}(zeta) = (p+q) zeta / 2 + (p-q) / (2 zeta),
// forward map T(z) = (z + sqrt(z^2 - c^2)) / (p+q), c^2 = p^2 - q^2, with the
// square root branched along the focal segment [-c, c] (product of two
// principal half-line roots), so beta = 2/(p+q).
class ObstacleMap {
public:
    explicit ObstacleMap(ObstacleShape shape);

    const ObstacleShape& shape() const { return shape_; }
    double beta() const { return beta_; }

    Complex forward(Complex z) const;    // T, defined on closure of K^c
    Complex inverse(Complex zeta) const; // T^{-1}, needs |zeta| >= 1
    Complex derivative(Complex z) const; // T'
    Complex second_derivative(Complex z) const;
    Complex third_derivative(Complex z) const;
    Complex h(Complex z) const;          // T(z) - beta z, cancellation-free form

private:
    ObstacleShape shape_;
    double beta_ = 1.0;
    double c2_ = 0.0; // p^2 - q^2
    double c_ = 0.0;

    Complex focal_sqrt(Complex z) const; // sqrt(z^2 - c^2), cut on [-c, c]
};

// Rescaled map of inclusion (i,j): T^eps(x) = T((x - z) / eps); carries the
// complex derivative (T^eps)'(x) = T'((x-z)/eps) / eps.
struct LocalMap {
    const ObstacleMap* base = nullptr;
    Vec2 center{};
    double eps = 1.0;

    Complex forward(Vec2 x) const {
        return base->forward(to_complex(x - center) / eps);
    }
    Vec2 inverse(Complex zeta) const {
        return center + to_vec(base->inverse(zeta) * eps);
    }
    Complex fprime(Vec2 x) const {
        return base->derivative(to_complex(x - center) / eps) / eps;
    }
    Complex fsecond(Vec2 x) const {
        return base->second_derivative(to_complex(x - center) / eps) / (eps * eps);
    }
    Complex fthird(Vec2 x) const {
        return base->third_derivative(to_complex(x - center) / eps) / (eps * eps * eps);
    }
};

struct LipschitzReport {
    double lip_forward = 0.0;
    double lip_inverse = 0.0;
};

// Sampled Lipschitz constants over the exterior annulus 1 <= |.| <= rmax
// (pairs drawn from a seeded generator; supremum over sampled quotients).
LipschitzReport estimate_lipschitz(const ObstacleMap& map, int npairs,
                                   std::uint64_t seed, double rmax = 4.0);

struct MapDiagnostics {
    double beta = 1.0;
    double h_sup = 0.0;      // sampled sup |h| on boundary + far field
    double lip_forward = 0.0;
    double lip_inverse = 0.0;
};

MapDiagnostics map_diagnostics(const ObstacleMap& map, std::uint64_t seed);

// Sampled bounds of |T^eps(x)| * eps / r over the circle |x - z| = r
// (the image of a circle around the inclusion sits in an annulus whose radii
// scale like r/eps).
struct AnnulusBounds {
    double lower = 0.0;
    double upper = 0.0;
};
AnnulusBounds annulus_bounds(const LocalMap& m, double r, int samples = 256);

} // namespace sieve
