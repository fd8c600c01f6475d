#include "sieve/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sieve {

ObstacleShape ObstacleShape::ellipse(double p, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("ellipse: q must be positive");
    if (q > p) throw std::invalid_argument("ellipse: requires q <= p");
    if (p > 1.0) throw std::invalid_argument("ellipse: p must be <= 1 (obstacle fits in [-1,1]^2)");
    return {ShapeKind::ellipse, p, q};
}

double ObstacleShape::boundary_radius(double theta) const {
    double c = std::cos(theta), s = std::sin(theta);
    double d = (c / p) * (c / p) + (s / q) * (s / q);
    return 1.0 / std::sqrt(d);
}

double ObstacleShape::area() const { return std::numbers::pi * p * q; }

PerforatedDomain PerforatedDomain::build(LatticeParams params, ObstacleShape shape) {
    if (!(params.eps > 0.0) || params.eps >= 1.0)
        throw std::invalid_argument("lattice: eps must lie in (0,1)");
    if (!(params.alpha > 0.0))
        throw std::invalid_argument("lattice: alpha must be positive");
    if (params.mu < 0.0 || params.mu > 1.0)
        throw std::invalid_argument("lattice: mu must lie in [0,1]");

    PerforatedDomain d;
    d.params_ = params;
    d.shape_ = shape;
    d.eps_alpha_ = std::pow(params.eps, params.alpha);
    d.pitch_ = 2.0 * (params.eps + d.eps_alpha_);

    // A representable boundary like (1+0.2)/0.4 evaluates just below the
    // integer; the nudge keeps the floor from dropping a column.
    double ratio = (1.0 + 2.0 * d.eps_alpha_) / d.pitch_;
    d.n1_ = static_cast<int>(std::floor(ratio + 1e-12));
    if (d.n1_ < 1)
        throw std::invalid_argument("lattice: eps too large, no obstacle fits in the unit segment");
    d.n2_ = static_cast<int>(std::floor(std::pow(static_cast<double>(d.n1_), params.mu) + 1e-12));
    if (d.n2_ < 1) d.n2_ = 1;

    d.centers_.reserve(static_cast<std::size_t>(d.n1_) * d.n2_);
    for (int j = 1; j <= d.n2_; ++j)
        for (int i = 1; i <= d.n1_; ++i)
            d.centers_.push_back(d.center(i, j));

    d.rect_ = Rect{0.0, 0.0, d.pitch_ * d.n1_ - 2.0 * d.eps_alpha_,
                   d.pitch_ * d.n2_ - 2.0 * d.eps_alpha_};
    double half = 0.5 * d.pitch_;
    Vec2 z11 = d.center(1, 1);
    Vec2 znn = d.center(d.n1_, d.n2_);
    d.block_ = Rect{z11.x - half, z11.y - half, znn.x + half, znn.y + half};
    return d;
}

Vec2 PerforatedDomain::center(int i, int j) const {
    return {params_.eps + pitch_ * (i - 1), params_.eps + pitch_ * (j - 1)};
}

Rect PerforatedDomain::tile(int i, int j) const {
    Vec2 z = center(i, j);
    double half = 0.5 * pitch_;
    return {z.x - half, z.y - half, z.x + half, z.y + half};
}

std::optional<std::pair<int, int>> PerforatedDomain::tile_index(Vec2 x) const {
    // tiles are the infinity-balls of radius pitch/2 about the centers; they
    // tile the block, so rounding to the nearest center index is exact
    int i = static_cast<int>(std::lround((x.x - params_.eps) / pitch_)) + 1;
    int j = static_cast<int>(std::lround((x.y - params_.eps) / pitch_)) + 1;
    if (i < 1 || i > n1_ || j < 1 || j > n2_) return std::nullopt;
    Vec2 z = center(i, j);
    if ((x - z).norm_inf() > 0.5 * pitch_ + 1e-15) return std::nullopt;
    return std::make_pair(i, j);
}

bool PerforatedDomain::in_inclusion(Vec2 x, int* i_out, int* j_out) const {
    // inclusions have infinity-radius eps < pitch/2, so only the nearest
    // lattice tile can contain x
    auto idx = tile_index(x);
    if (!idx) return false;
    Vec2 z = center(idx->first, idx->second);
    Vec2 local = (x - z) / params_.eps;
    if (local.norm_inf() > 1.0) return false;
    if (!shape_.contains_local(local)) return false;
    if (i_out) *i_out = idx->first;
    if (j_out) *j_out = idx->second;
    return true;
}

bool PerforatedDomain::contains(Vec2 x) const { return !in_inclusion(x); }

double PerforatedDomain::distance_to_inclusion(Vec2 x, int i, int j) const {
    Vec2 z = center(i, j);
    Vec2 v = x - z;
    if (shape_.kind == ShapeKind::disk) {
        return std::max(0.0, v.norm() - params_.eps);
    }
    Vec2 local = v / params_.eps;
    if (shape_.contains_local(local)) return 0.0;
    // coarse boundary scan then golden-section refinement of the angle
    constexpr int coarse = 64;
    double best_t = 0.0, best_d = 1e300;
    for (int k = 0; k < coarse; ++k) {
        double t = 2.0 * std::numbers::pi * k / coarse;
        double dd = (local - shape_.boundary_point(t)).norm2();
        if (dd < best_d) { best_d = dd; best_t = t; }
    }
    double a = best_t - 2.0 * std::numbers::pi / coarse;
    double b = best_t + 2.0 * std::numbers::pi / coarse;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), dpt = a + gr * (b - a);
    auto f = [&](double t) { return (local - shape_.boundary_point(t)).norm2(); };
    double fc = f(c), fd = f(dpt);
    for (int it = 0; it < 48; ++it) {
        if (fc < fd) { b = dpt; dpt = c; fd = fc; c = b - gr * (b - a); fc = f(c); }
        else { a = c; c = dpt; fc = fd; dpt = a + gr * (b - a); fd = f(dpt); }
    }
    return params_.eps * std::sqrt(std::min(fc, fd));
}

double PerforatedDomain::distance_to_inclusions(Vec2 x) const {
    // candidate tiles: the nearest index and its neighbors (distance to a
    // farther inclusion exceeds the running bound by construction)
    double ic = (x.x - params_.eps) / pitch_ + 1.0;
    double jc = (x.y - params_.eps) / pitch_ + 1.0;
    int i0 = std::clamp(static_cast<int>(std::lround(ic)), 1, n1_);
    int j0 = std::clamp(static_cast<int>(std::lround(jc)), 1, n2_);
    double best = 1e300;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            int i = i0 + di, j = j0 + dj;
            if (i < 1 || i > n1_ || j < 1 || j > n2_) continue;
            best = std::min(best, distance_to_inclusion(x, i, j));
        }
    }
    if (best == 1e300) {
        // x far outside the block: measure against the clamped corner inclusion
        best = distance_to_inclusion(x, i0, j0);
    }
    return best;
}

double PerforatedDomain::inclusion_area_total() const {
    return shape_.area() * params_.eps * params_.eps * inclusion_count();
}

double PerforatedDomain::hausdorff_gap(int grid_per_pitch) const {
    // sup over the rectangle of the distance to the inclusion union; the
    // reverse direction is zero because every inclusion lies inside R
    double hx = pitch_ / grid_per_pitch;
    int nx = std::max(2, static_cast<int>(std::ceil(rect_.width() / hx)) + 1);
    int ny = std::max(2, static_cast<int>(std::ceil(rect_.height() / hx)) + 1);
    double sup = 0.0;
    for (int jy = 0; jy < ny; ++jy) {
        double y = rect_.y0 + rect_.height() * jy / (ny - 1);
        for (int ix = 0; ix < nx; ++ix) {
            double x = rect_.x0 + rect_.width() * ix / (nx - 1);
            sup = std::max(sup, distance_to_inclusions({x, y}));
        }
    }
    // inclusion-to-rectangle direction, sampled on boundaries (expected 0)
    double sup2 = 0.0;
    for (const Vec2& z : centers_) {
        for (int k = 0; k < 64; ++k) {
            double t = 2.0 * std::numbers::pi * k / 64;
            Vec2 pnt = z + params_.eps * shape_.boundary_point(t);
            sup2 = std::max(sup2, rect_.distance(pnt));
        }
    }
    return std::max(sup, sup2);
}

bool PerforatedDomain::count_inequality_ok() const {
    double lhs = n1_ * pitch_;
    double bound = 1.0 + 2.0 * eps_alpha_;
    return lhs <= bound + 1e-9 && (n1_ + 1) * pitch_ > bound - 1e-9;
}

} // namespace sieve
