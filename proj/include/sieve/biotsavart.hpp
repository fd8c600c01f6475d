#pragma once

#include "sieve/conformal.hpp"
#include "sieve/quadrature.hpp"
#include "sieve/vec2.hpp"

#include <vector>

namespace sieve {

// Velocity induced on the whole plane by the source field:
//   u(x) = (1/2pi) int (x-y)^perp / |x-y|^2 f(y) dy.
// The integral runs over the nodes cached in src (masked when src carries a
// perforated domain).
Vec2 velocity_plane(const SourceQuadrature& src, Vec2 x);

// psi(x) = (1/2pi) int ln|x-y| f(y) dy
double log_potential(const SourceQuadrature& src, Vec2 x);

// Exterior of the closed unit disk at the origin: image vortex plus the
// circulation-neutralizing vortex at the center. Requires supp f to avoid the
// disk and |x| >= 1.
Vec2 velocity_exterior_disk(const SourceQuadrature& src, Vec2 x);
double stream_exterior_disk(const SourceQuadrature& src, Vec2 x);

// Exterior of a single scaled obstacle via its conformal map. x must lie in
// the closed exterior of the inclusion; sources from the whole fluid domain
// are allowed.
Vec2 velocity_exterior_obstacle(const LocalMap& map, const SourceQuadrature& src, Vec2 x);
// Stream function of the same field; constant on the inclusion boundary for
// every fixed source point.
double stream_exterior_obstacle(const LocalMap& map, const SourceQuadrature& src, Vec2 x);

// Mollified point-vortex sums. delta is the blob width; the kernel factor is
// 1 - exp(-r^2 / (2 delta^2)).
Vec2 blob_velocity_direct(const std::vector<Vec2>& pos, const std::vector<double>& gamma,
                          Vec2 x, double delta);

// Quadtree with complex multipole expansions for sums sum_k gamma_k/(w - p_k).
// Nodes are accepted when w is separated from the box by both the opening
// ratio and the caller's near radius, so near points always reach the direct
// branch where an exact (e.g. mollified) kernel can be applied.
class VortexTree {
public:
    VortexTree(std::vector<Complex> pts, std::vector<double> gamma,
               int order = 22, double theta = 0.45, int leaf = 32);

    long size() const { return (long)pts_.size(); }

    // near_visit(original_index, point, gamma) is called for every particle
    // within near_radius of w; everything else lands in the returned far sum.
    template <class F>
    Complex eval(Complex w, double near_radius, F&& near_visit) const {
        Complex acc = 0.0;
        if (!nodes_.empty()) eval_node(0, w, near_radius, acc, near_visit);
        return acc;
    }

    Vec2 velocity(Vec2 x, double delta) const;

private:
    struct Node {
        Complex center;
        double radius = 0.0; // covering radius of the points
        int child[4] = {-1, -1, -1, -1};
        int begin = 0, end = 0; // point range for leaves
        bool is_leaf = false;
        std::vector<Complex> moments;
    };

    std::vector<Complex> pts_;
    std::vector<double> gam_;
    std::vector<int> idx_; // permutation into original order
    std::vector<Node> nodes_;
    int order_;
    double theta_;
    int leaf_;

    int build(int begin, int end, Complex center, double half, int depth);

    template <class F>
    void eval_node(int ni, Complex w, double near_radius, Complex& acc, F&& near_visit) const {
        const Node& n = nodes_[ni];
        double d = std::abs(w - n.center);
        if (d > n.radius / theta_ && d > n.radius + near_radius) {
            Complex iv = 1.0 / (w - n.center);
            Complex pw = iv;
            for (const Complex& m : n.moments) {
                acc += m * pw;
                pw *= iv;
            }
            return;
        }
        if (n.is_leaf) {
            for (int k = n.begin; k < n.end; ++k) {
                Complex dz = w - pts_[k];
                double r = std::abs(dz);
                if (r <= near_radius) {
                    near_visit(idx_[k], pts_[k], gam_[k]);
                } else {
                    acc += gam_[k] / dz;
                }
            }
            return;
        }
        for (int c = 0; c < 4; ++c)
            if (n.child[c] >= 0) eval_node(n.child[c], w, near_radius, acc, near_visit);
    }
};

} // namespace sieve
