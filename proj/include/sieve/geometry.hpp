#pragma once

#include "sieve/vec2.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sieve {

enum class ShapeKind { disk, ellipse };

// Reference obstacle K, centered at the origin, contained in [-1,1]^2 with
// infinity-norm radius exactly 1 (the disk is the p=q=1 ellipse; semi-axes
// p >= q along x resp. y).
struct ObstacleShape {
    ShapeKind kind = ShapeKind::disk;
    double p = 1.0;
    double q = 1.0;

    static ObstacleShape disk() { return {ShapeKind::disk, 1.0, 1.0}; }
    static ObstacleShape ellipse(double p, double q);

    bool contains_local(Vec2 u) const {
        double a = u.x / p, b = u.y / q;
        return a * a + b * b < 1.0;
    }
    // boundary in polar form about the center: r(theta)
    double boundary_radius(double theta) const;
    Vec2 boundary_point(double theta) const {
        return {p * std::cos(theta), q * std::sin(theta)};
    }
    double area() const;
    std::string name() const { return kind == ShapeKind::disk ? "disk" : "ellipse"; }
};

struct LatticeParams {
    double eps = 0.1;
    double alpha = 1.0;
    double mu = 0.0;
};

// Horizontal strip of scaled obstacles near the segment [0,1] x {0}: centers
//   z_{i,j} = (eps, eps) + 2(eps + eps^alpha) (i-1, j-1),   1<=i<=n1, 1<=j<=n2,
// with n1 = floor((1 + 2 eps^alpha) / (2(eps + eps^alpha))), n2 = floor(n1^mu).
// The fluid domain is the plane minus the closed inclusions z_{i,j} + eps*K.
class PerforatedDomain {
public:
    static PerforatedDomain build(LatticeParams params, ObstacleShape shape);

    const LatticeParams& params() const { return params_; }
    const ObstacleShape& shape() const { return shape_; }
    double eps() const { return params_.eps; }
    double eps_alpha() const { return eps_alpha_; }
    // lattice pitch 2(eps + eps^alpha)
    double pitch() const { return pitch_; }
    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int inclusion_count() const { return n1_ * n2_; }

    Vec2 center(int i, int j) const; // 1-based
    const std::vector<Vec2>& centers() const { return centers_; }
    // bounding rectangle R = [0, pitch*n1 - 2 eps^alpha] x [0, pitch*n2 - 2 eps^alpha]
    Rect rect() const { return rect_; }
    // lattice tile of inclusion (i,j): the infinity-ball of radius pitch/2 at z_{i,j}
    Rect tile(int i, int j) const;
    // all tiles together (the strip block)
    Rect block() const { return block_; }

    // membership in the fluid domain (complement of the closed inclusions)
    bool contains(Vec2 x) const;
    bool in_inclusion(Vec2 x, int* i_out = nullptr, int* j_out = nullptr) const;
    // lattice tile index containing x, if x lies in the strip block
    std::optional<std::pair<int, int>> tile_index(Vec2 x) const;

    // Euclidean distance from x to the union of inclusions (0 inside one)
    double distance_to_inclusions(Vec2 x) const;
    double distance_to_inclusion(Vec2 x, int i, int j) const;

    double inclusion_area_total() const;
    // sampled two-sided Hausdorff estimate between the inclusion union and R;
    // grid_per_pitch controls the sample density
    double hausdorff_gap(int grid_per_pitch = 24) const;

    // lattice count inequality n1 * pitch <= 1 + 2 eps^alpha < (n1+1) * pitch
    bool count_inequality_ok() const;

private:
    LatticeParams params_;
    ObstacleShape shape_;
    double eps_alpha_ = 0.0;
    double pitch_ = 0.0;
    int n1_ = 0;
    int n2_ = 0;
    std::vector<Vec2> centers_;
    Rect rect_{};
    Rect block_{};
};

} // namespace sieve
