#pragma once

#include "sieve/field.hpp"
#include "sieve/geometry.hpp"
#include "sieve/vec2.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace sieve {

// Gauss-Legendre rule on [-1,1]; nodes/weights cached per order.
struct GaussRule {
    const std::vector<double>* x;
    const std::vector<double>* w;
    static GaussRule get(int order);
};

// composite Gauss-Legendre on [a,b]
double integrate_1d(const std::function<double(double)>& g, double a, double b,
                    int panels, int order);

// Halton low-discrepancy sequence value (index >= 0, prime base).
double halton(long long index, int base);

enum class Scheme { tensor_gauss, montecarlo };

Scheme scheme_from_string(const std::string& s);
std::string scheme_name(Scheme s);

// Resolution knobs for source integrals and norms. "order" is the tensor
// Gauss order on background cells near the obstacle strip; cells far from it
// drop to far_order. Strip tiles are integrated in polar coordinates around
// the inclusion center (exact annulus geometry, no masking discontinuity).
// Kernel singularities switch nearby cells to a fan/chord decomposition with
// geometrically graded radial panels centered at the singular point.
struct QuadratureSpec {
    Scheme scheme = Scheme::tensor_gauss;
    int order = 16;
    long mc_samples = 200000;

    int strip_theta = 4;   // GL order per octant panel (8 panels per tile)
    int strip_radial = 5;  // GL order per radial segment (2 segments)
    int fan_theta = 16;    // theta nodes per wedge at requadrature
    int fan_radial = 6;    // GL order per graded radial panel
    int fan_panels = 8;    // graded panels toward the singular point
    double fan_sigma = 0.22;
    double near_factor = 2.0; // cells within near_factor * diam switch to fan
    double bg_cell = 0.0;     // background cell size; 0 = auto (R0/8)
    int far_order = 6;
    double refine_factor = 1.5;

    QuadratureSpec refined() const;
};

enum class Sing { none, log_kernel, velocity_kernel };

namespace detail {
struct NodeSet {
    std::vector<Vec2> y;
    std::vector<double> w;
    void clear() { y.clear(); w.clear(); }
    void push(Vec2 p, double wt) { y.push_back(p); w.push_back(wt); }
};

// signed triangle-fan / subdivision integration nodes of a rectangle with a
// singular point x0 (weights are plain area weights)
void rect_singular_nodes(const Rect& r, Vec2 x0, const QuadratureSpec& s, NodeSet& out);
// polar chord nodes of the scaled obstacle (z + eps*K) around pivot x0
void shape_chord_nodes(const ObstacleShape& shape, Vec2 z, double eps, Vec2 x0,
                       const QuadratureSpec& s, NodeSet& out);
// plain tensor nodes
void rect_tensor_nodes(const Rect& r, int order, NodeSet& out);
// annulus nodes: tile minus inclusion, polar around the center
void annulus_nodes(const ObstacleShape& shape, Vec2 z, double eps, double half_pitch,
                   int theta_order, int radial_order, NodeSet& out);
// inclusion interior, polar around the center
void shape_interior_nodes(const ObstacleShape& shape, Vec2 z, double eps,
                          int theta_order, int radial_order, NodeSet& out);
} // namespace detail

// Cached, f-weighted, domain-masked source nodes for integrals of the form
// integral_{Omega^eps} k(x,y) f(y) dy. Masking is exact: lattice tiles are
// integrated as annuli in polar coordinates, so no node ever falls inside an
// inclusion and no indicator discontinuity is sampled.
class SourceQuadrature {
public:
    SourceQuadrature(const VorticitySpec& f, const PerforatedDomain* dom,
                     QuadratureSpec spec = {});

    struct Cell {
        Rect box;
        bool strip = false;
        Vec2 z{};      // inclusion center when strip
        double diam = 0.0;
        std::vector<Vec2> y;
        std::vector<double> wf; // quad weight * f(y)
    };

    const std::vector<Cell>& cells() const { return cells_; }
    const QuadratureSpec& spec() const { return spec_; }
    const VorticitySpec& field() const { return f_; }
    const PerforatedDomain* domain() const { return dom_; }
    double mass() const { return mass_; }
    SourceQuadrature refined() const { return {f_, dom_, spec_.refined()}; }

    // Fused integral pass: kernel(y) -> array<Complex, N>; returns the
    // componentwise integral with f weighting. If sing is set, cells near
    // *sing are requadratured around the singular point with graded panels.
    template <int N, class K>
    std::array<Complex, N> integrate(K&& kernel, std::optional<Vec2> sing = {},
                                     Sing kind = Sing::none) const {
        std::vector<std::array<Complex, N>> partial;
        partial.reserve(cells_.size());
        detail::NodeSet scratch;
        for (const Cell& c : cells_) {
            std::array<Complex, N> acc{};
            if (sing && kind != Sing::none && is_near(c, *sing)) {
                requad_cell(c, *sing, scratch);
                for (std::size_t i = 0; i < scratch.y.size(); ++i) {
                    double fw = scratch.w[i] * f_(scratch.y[i]);
                    if (fw == 0.0) continue;
                    auto v = kernel(scratch.y[i]);
                    for (int k = 0; k < N; ++k) acc[k] += fw * v[k];
                }
            } else {
                for (std::size_t i = 0; i < c.y.size(); ++i) {
                    auto v = kernel(c.y[i]);
                    for (int k = 0; k < N; ++k) acc[k] += c.wf[i] * v[k];
                }
            }
            partial.push_back(acc);
        }
        // pairwise reduction across cells, componentwise
        std::array<Complex, N> out{};
        std::size_t n = partial.size();
        while (n > 1) {
            std::size_t half = (n + 1) / 2;
            for (std::size_t i = 0; i + half < n; ++i)
                for (int k = 0; k < N; ++k) partial[i][k] += partial[i + half][k];
            n = half;
        }
        if (!partial.empty()) out = partial[0];
        return out;
    }

    template <class K>
    Complex integrate_c(K&& kernel, std::optional<Vec2> sing = {},
                        Sing kind = Sing::none) const {
        auto wrap = [&](Vec2 y) { return std::array<Complex, 1>{kernel(y)}; };
        return integrate<1>(wrap, sing, kind)[0];
    }

    template <class K>
    double integrate_r(K&& kernel, std::optional<Vec2> sing = {},
                       Sing kind = Sing::none) const {
        auto wrap = [&](Vec2 y) { return std::array<Complex, 1>{Complex(kernel(y), 0.0)}; };
        return integrate<1>(wrap, sing, kind)[0].real();
    }

    long node_count() const;

private:
    VorticitySpec f_;
    const PerforatedDomain* dom_;
    QuadratureSpec spec_;
    std::vector<Cell> cells_;
    double mass_ = 0.0;

    bool is_near(const Cell& c, Vec2 x) const {
        return c.box.distance(x) <= spec_.near_factor * c.diam;
    }
    void requad_cell(const Cell& c, Vec2 x0, detail::NodeSet& out) const;
    void build();
};

// Evaluation-point grids for L^p norms: node/weight cells over a region.
// Strip tiles use polar nodes around the center with radial splits at the
// cutoff plateau ring so cutoff kinks never cross a panel.
class RegionQuadrature {
public:
    struct Cell {
        std::vector<Vec2> x;
        std::vector<double> w;
        int i = 0, j = 0;          // lattice index when strip or interior
        bool strip = false;        // tile annulus (cutoff support region)
        bool interior = false;     // inclusion interior
    };

    const std::vector<Cell>& cells() const { return cells_; }
    double total_area() const;
    long node_count() const;

    // union of lattice tile annuli (covers every cutoff support exactly)
    static RegionQuadrature strip_supports(const PerforatedDomain& dom,
                                           int theta_order, int radial_order);
    static RegionQuadrature inclusion_interiors(const PerforatedDomain& dom,
                                                int theta_order, int radial_order);
    // window = strip tiles intersecting win (+ optional inclusion interiors)
    // + tensor cells tiling win minus the strip block
    static RegionQuadrature window(const PerforatedDomain* dom, Rect win,
                                   double cell_size, int order,
                                   int theta_order, int radial_order,
                                   bool include_interiors);
    static RegionQuadrature rect_plain(Rect r, double cell_size, int order);
    static RegionQuadrature disk(Vec2 c, double radius, int theta_order,
                                 int radial_order);

private:
    std::vector<Cell> cells_;
};

struct NormResult {
    double value = 0.0;
    double err_estimate = 0.0;
    bool flagged = false;
    long evals = 0;
};

// L^p norm (p = 1, 2, or inf as p <= 0) of g over the region, with the error
// estimated from a second (refined) node set; flagged when the two levels
// disagree by more than 10%.
NormResult lp_norm_two_level(const std::function<double(Vec2)>& g, double p,
                             const RegionQuadrature& coarse,
                             const RegionQuadrature& fine);

double lp_norm_cells(const std::function<double(Vec2)>& g, double p,
                     const RegionQuadrature& grid);

// Halton Monte Carlo over a rectangle with an optional mask; cross-check path.
NormResult mc_norm(const std::function<double(Vec2)>& g, double p, Rect box,
                   const std::function<bool(Vec2)>& mask, long samples);

} // namespace sieve
