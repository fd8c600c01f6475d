#pragma once

#include "sieve/vec2.hpp"

#include <string>

namespace sieve {

enum class FieldKind { radial_bump, gaussian_truncated, patch_indicator_smooth };

FieldKind field_kind_from_string(const std::string& s);
std::string field_kind_name(FieldKind k);

// Radial compactly supported vorticity profile about a center. All kinds
// vanish identically for |x - center| >= R0.
//   radial_bump:            amp * exp(1 - 1/(1 - (r/R0)^2)), value amp at r=0
//   gaussian_truncated:     amp * (exp(-r^2/(2 s^2)) - exp(-R0^2/(2 s^2))),
//                           s = R0/3.5 (continuous at the support edge)
//   patch_indicator_smooth: amp on r <= a*R0, quintic smoothstep down to 0 at
//                           R0 (a = plateau fraction, default 0.7)
class VorticitySpec {
public:
    static VorticitySpec radial_bump(Vec2 center, double R0, double amp);
    static VorticitySpec gaussian_truncated(Vec2 center, double R0, double amp);
    static VorticitySpec patch_smooth(Vec2 center, double R0, double amp,
                                      double plateau_frac = 0.7);
    static VorticitySpec make(FieldKind kind, Vec2 center, double R0, double amp);

    double operator()(Vec2 x) const { return profile((x - center_).norm()); }
    double profile(double r) const;
    // 2 pi * integral of profile(s) s ds over [0, r] (analytic for the
    // truncated gaussian, adaptive 1D quadrature otherwise)
    double mass_within(double r) const;
    double total_mass() const { return mass_within(R0_); }

    Vec2 center() const { return center_; }
    double R0() const { return R0_; }
    double amplitude() const { return amplitude_; }
    FieldKind kind() const { return kind_; }
    // support bounding box
    Rect bbox() const {
        return {center_.x - R0_, center_.y - R0_, center_.x + R0_, center_.y + R0_};
    }

private:
    VorticitySpec(FieldKind kind, Vec2 center, double R0, double amp, double aux);

    FieldKind kind_;
    Vec2 center_;
    double R0_;
    double amplitude_;
    double aux_;   // sigma for the gaussian, plateau fraction for the patch
    double edge_;  // gaussian offset exp(-R0^2/(2 sigma^2))
};

// quintic smoothstep: 0 for t<=0, 1 for t>=1, C^2 across both ends
double smoothstep5(double t);
double smoothstep5_derivative(double t);
double smoothstep3(double t);
double smoothstep3_derivative(double t);

} // namespace sieve
