#include "sieve/biotsavart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sieve {

namespace {
constexpr double kTwoPiInv = 0.15915494309189533577;

inline Complex safe_inv(Complex d) {
    double n2 = std::norm(d);
    if (n2 < 1e-280) return {0.0, 0.0};
    return std::conj(d) / n2;
}
} // namespace

Vec2 velocity_plane(const SourceQuadrature& src, Vec2 x) {
    Complex xc = to_complex(x);
    Complex g = src.integrate_c([&](Vec2 y) { return safe_inv(xc - to_complex(y)); },
                                x, Sing::velocity_kernel);
    return perp_conj(g) * kTwoPiInv;
}

double log_potential(const SourceQuadrature& src, Vec2 x) {
    double v = src.integrate_r(
        [&](Vec2 y) {
            double r2 = (x - y).norm2();
            return r2 < 1e-280 ? 0.0 : 0.5 * std::log(r2);
        },
        x, Sing::log_kernel);
    return v * kTwoPiInv;
}

static void check_disk_sources(const SourceQuadrature& src) {
    const VorticitySpec& f = src.field();
    if (f.center().norm() - f.R0() < 1.0 - 1e-9)
        throw std::invalid_argument(
            "exterior-disk velocity needs the source support outside the unit disk");
}

Vec2 velocity_exterior_disk(const SourceQuadrature& src, Vec2 x) {
    check_disk_sources(src);
    Complex xc = to_complex(x);
    if (std::abs(xc) < 1.0 - 1e-12)
        throw std::invalid_argument("evaluation point inside the unit disk");
    Complex inv_x = safe_inv(xc);
    Complex g = src.integrate_c(
        [&](Vec2 y) {
            Complex yc = to_complex(y);
            Complex ystar = std::conj(safe_inv(yc));
            return safe_inv(xc - yc) - safe_inv(xc - ystar) + inv_x;
        },
        x, Sing::velocity_kernel);
    return perp_conj(g) * kTwoPiInv;
}

double stream_exterior_disk(const SourceQuadrature& src, Vec2 x) {
    check_disk_sources(src);
    Complex xc = to_complex(x);
    double v = src.integrate_r(
        [&](Vec2 y) {
            Complex yc = to_complex(y);
            Complex ystar = std::conj(safe_inv(yc));
            double a = std::abs(xc - yc), b = std::abs(xc - ystar);
            if (a < 1e-140 || b < 1e-140) return 0.0;
            return std::log(a) - std::log(b) + std::log(std::abs(xc));
        },
        x, Sing::log_kernel);
    return v * kTwoPiInv;
}

Vec2 velocity_exterior_obstacle(const LocalMap& map, const SourceQuadrature& src, Vec2 x) {
    Complex zeta = map.forward(x);
    Complex fp = map.fprime(x);
    Complex inv_zeta = safe_inv(zeta);
    Complex g = src.integrate_c(
        [&](Vec2 y) {
            Complex eta = map.forward(y);
            Complex estar = std::conj(safe_inv(eta));
            return safe_inv(zeta - eta) - safe_inv(zeta - estar) + inv_zeta;
        },
        x, Sing::velocity_kernel);
    return perp_conj(fp * g) * kTwoPiInv;
}

double stream_exterior_obstacle(const LocalMap& map, const SourceQuadrature& src, Vec2 x) {
    Complex zeta = map.forward(x);
    double v = src.integrate_r(
        [&](Vec2 y) {
            Complex eta = map.forward(y);
            Complex estar = std::conj(safe_inv(eta));
            double a = std::abs(zeta - eta), b = std::abs(zeta - estar);
            if (a < 1e-140 || b < 1e-140) return 0.0;
            return std::log(a) - std::log(b) + std::log(std::abs(zeta));
        },
        x, Sing::log_kernel);
    return v * kTwoPiInv;
}

Vec2 blob_velocity_direct(const std::vector<Vec2>& pos, const std::vector<double>& gamma,
                          Vec2 x, double delta) {
    Complex xc = to_complex(x);
    Complex acc = 0.0;
    double d2 = 2.0 * delta * delta;
    for (std::size_t k = 0; k < pos.size(); ++k) {
        Complex dz = xc - to_complex(pos[k]);
        double r2 = std::norm(dz);
        if (r2 < 1e-280) continue;
        double moll = d2 > 0.0 ? -std::expm1(-r2 / d2) : 1.0;
        acc += gamma[k] * moll * std::conj(dz) / r2;
    }
    return perp_conj(acc) * kTwoPiInv;
}

VortexTree::VortexTree(std::vector<Complex> pts, std::vector<double> gamma,
                       int order, double theta, int leaf)
    : pts_(std::move(pts)), gam_(std::move(gamma)), order_(order), theta_(theta),
      leaf_(std::max(leaf, 4)) {
    if (pts_.size() != gam_.size())
        throw std::invalid_argument("vortex tree: size mismatch");
    idx_.resize(pts_.size());
    std::iota(idx_.begin(), idx_.end(), 0);
    if (pts_.empty()) return;
    double x0 = pts_[0].real(), x1 = x0, y0 = pts_[0].imag(), y1 = y0;
    for (const Complex& p : pts_) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
    Complex c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    double half = 0.5 * std::max(x1 - x0, y1 - y0) + 1e-300;
    build(0, (int)pts_.size(), c, half, 0);
}

int VortexTree::build(int begin, int end, Complex center, double half, int depth) {
    int ni = (int)nodes_.size();
    nodes_.emplace_back();
    {
        Node& n = nodes_[ni];
        n.center = center;
        n.begin = begin;
        n.end = end;
        double r = 0.0;
        for (int k = begin; k < end; ++k) r = std::max(r, std::abs(pts_[k] - center));
        n.radius = r;
        n.moments.assign(order_, Complex{});
        for (int k = begin; k < end; ++k) {
            Complex d = pts_[k] - center;
            Complex pw = gam_[k];
            for (int m = 0; m < order_; ++m) {
                n.moments[m] += pw;
                pw *= d;
            }
        }
    }
    if (end - begin <= leaf_ || depth >= 24) {
        nodes_[ni].is_leaf = true;
        return ni;
    }
    // partition the range into quadrants (stable to keep determinism)
    auto quad = [&](int k) {
        int qx = pts_[k].real() >= center.real() ? 1 : 0;
        int qy = pts_[k].imag() >= center.imag() ? 1 : 0;
        return qx + 2 * qy;
    };
    std::vector<std::pair<Complex, double>> tmp;
    std::vector<int> tmpi;
    tmp.reserve(end - begin);
    tmpi.reserve(end - begin);
    int bounds[5];
    int pos = begin;
    for (int q = 0; q < 4; ++q) {
        bounds[q] = pos;
        for (int k = begin; k < end; ++k)
            if (quad(k) == q) {
                tmp.emplace_back(pts_[k], gam_[k]);
                tmpi.push_back(idx_[k]);
                ++pos;
            }
    }
    bounds[4] = pos;
    for (int k = begin; k < end; ++k) {
        pts_[k] = tmp[k - begin].first;
        gam_[k] = tmp[k - begin].second;
        idx_[k] = tmpi[k - begin];
    }
    double h2 = 0.5 * half;
    const Complex offs[4] = {{-h2, -h2}, {h2, -h2}, {-h2, h2}, {h2, h2}};
    for (int q = 0; q < 4; ++q) {
        if (bounds[q + 1] - bounds[q] == 0) continue;
        int ci = build(bounds[q], bounds[q + 1], center + offs[q], h2, depth + 1);
        nodes_[ni].child[q] = ci;
    }
    return ni;
}

Vec2 VortexTree::velocity(Vec2 x, double delta) const {
    Complex xc = to_complex(x);
    double near_r = std::max(8.0 * delta, 0.0);
    Complex near_acc = 0.0;
    double d2 = 2.0 * delta * delta;
    Complex far = eval(xc, near_r, [&](int, Complex p, double g) {
        Complex dz = xc - p;
        double r2 = std::norm(dz);
        if (r2 < 1e-280) return;
        double moll = d2 > 0.0 ? -std::expm1(-r2 / d2) : 1.0;
        near_acc += g * moll * std::conj(dz) / r2;
    });
    return perp_conj(far + near_acc) * kTwoPiInv;
}

} // namespace sieve
