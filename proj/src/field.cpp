#include "sieve/field.hpp"

#include "sieve/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sieve {

FieldKind field_kind_from_string(const std::string& s) {
    if (s == "radial_bump") return FieldKind::radial_bump;
    if (s == "gaussian_truncated") return FieldKind::gaussian_truncated;
    if (s == "patch_indicator_smooth") return FieldKind::patch_indicator_smooth;
    throw std::invalid_argument("unknown field kind: " + s);
}

std::string field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::radial_bump: return "radial_bump";
        case FieldKind::gaussian_truncated: return "gaussian_truncated";
        case FieldKind::patch_indicator_smooth: return "patch_indicator_smooth";
    }
    return "?";
}

double smoothstep5(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double smoothstep5_derivative(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double u = t * (1.0 - t);
    return 30.0 * u * u;
}

double smoothstep3(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

double smoothstep3_derivative(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 6.0 * t * (1.0 - t);
}

VorticitySpec::VorticitySpec(FieldKind kind, Vec2 center, double R0, double amp, double aux)
    : kind_(kind), center_(center), R0_(R0), amplitude_(amp), aux_(aux), edge_(0.0) {
    if (!(R0 > 0.0)) throw std::invalid_argument("vorticity: R0 must be positive");
    if (kind_ == FieldKind::gaussian_truncated)
        edge_ = std::exp(-R0_ * R0_ / (2.0 * aux_ * aux_));
}

VorticitySpec VorticitySpec::radial_bump(Vec2 c, double R0, double amp) {
    return VorticitySpec(FieldKind::radial_bump, c, R0, amp, 0.0);
}

VorticitySpec VorticitySpec::gaussian_truncated(Vec2 c, double R0, double amp) {
    return VorticitySpec(FieldKind::gaussian_truncated, c, R0, amp, R0 / 3.5);
}

VorticitySpec VorticitySpec::patch_smooth(Vec2 c, double R0, double amp, double plateau_frac) {
    if (!(plateau_frac > 0.0) || plateau_frac >= 1.0)
        throw std::invalid_argument("vorticity: plateau fraction must lie in (0,1)");
    return VorticitySpec(FieldKind::patch_indicator_smooth, c, R0, amp, plateau_frac);
}

VorticitySpec VorticitySpec::make(FieldKind kind, Vec2 c, double R0, double amp) {
    switch (kind) {
        case FieldKind::radial_bump: return radial_bump(c, R0, amp);
        case FieldKind::gaussian_truncated: return gaussian_truncated(c, R0, amp);
        case FieldKind::patch_indicator_smooth: return patch_smooth(c, R0, amp);
    }
    throw std::invalid_argument("vorticity: bad kind");
}

double VorticitySpec::profile(double r) const {
    if (r >= R0_) return 0.0; // exact zero outside the support
    switch (kind_) {
        case FieldKind::radial_bump: {
            double t = r / R0_;
            double d = 1.0 - t * t;
            if (d <= 1e-14) return 0.0;
            return amplitude_ * std::exp(1.0 - 1.0 / d);
        }
        case FieldKind::gaussian_truncated: {
            double s2 = aux_ * aux_;
            return amplitude_ * (std::exp(-r * r / (2.0 * s2)) - edge_);
        }
        case FieldKind::patch_indicator_smooth: {
            double a = aux_ * R0_;
            if (r <= a) return amplitude_;
            return amplitude_ * smoothstep5((R0_ - r) / (R0_ - a));
        }
    }
    return 0.0;
}

double VorticitySpec::mass_within(double r) const {
    r = std::min(r, R0_);
    if (r <= 0.0) return 0.0;
    if (kind_ == FieldKind::gaussian_truncated) {
        double s2 = aux_ * aux_;
        double g = 1.0 - std::exp(-r * r / (2.0 * s2));
        return 2.0 * std::numbers::pi * amplitude_ * (s2 * g - edge_ * r * r / 2.0);
    }
    if (kind_ == FieldKind::patch_indicator_smooth) {
        // plateau part is exact; quadrature only over the transition ring
        double a = aux_ * R0_;
        double plateau_mass = std::numbers::pi * amplitude_ * std::min(r, a) * std::min(r, a);
        if (r <= a) return plateau_mass;
        auto g = [this](double s) { return profile(s) * s; };
        return plateau_mass +
               2.0 * std::numbers::pi * integrate_1d(g, a, r, 24, 32);
    }
    auto g = [this](double s) { return profile(s) * s; };
    return 2.0 * std::numbers::pi * integrate_1d(g, 0.0, r, 24, 32);
}

} // namespace sieve
