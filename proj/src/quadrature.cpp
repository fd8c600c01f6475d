#include "sieve/quadrature.hpp"

#include "sieve/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace sieve {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RuleData {
    std::vector<double> x, w;
};

// Legendre nodes by Newton iteration on the recurrence; weights from P'_n.
std::unique_ptr<RuleData> make_rule(int n) {
    auto rd = std::make_unique<RuleData>();
    rd->x.resize(n);
    rd->w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one polishing step after convergence
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        rd->x[i] = -x;
        rd->x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rd->w[i] = w;
        rd->w[n - 1 - i] = w;
    }
    if (n % 2 == 1) rd->x[n / 2] = 0.0;
    return rd;
}

const RuleData& rule_cached(int order) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<RuleData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
    return *it->second;
}

inline double wrap_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a < -kPi) a += 2.0 * kPi;
    return a;
}

// a minus b as up to four disjoint rectangles
void rect_minus_rect(const Rect& a, const Rect& b, std::vector<Rect>& out) {
    if (!a.overlaps(b)) {
        out.push_back(a);
        return;
    }
    double ix0 = std::max(a.x0, b.x0), ix1 = std::min(a.x1, b.x1);
    if (b.x0 > a.x0) out.push_back({a.x0, a.y0, b.x0, a.y1});
    if (b.x1 < a.x1) out.push_back({b.x1, a.y0, a.x1, a.y1});
    if (b.y0 > a.y0) out.push_back({ix0, a.y0, ix1, b.y0});
    if (b.y1 < a.y1) out.push_back({ix0, b.y1, ix1, a.y1});
    std::erase_if(out, [](const Rect& r) {
        return r.x1 - r.x0 <= 0.0 || r.y1 - r.y0 <= 0.0;
    });
}

// graded radial panels on [r_lo, r_hi], clustered toward r_lo
void graded_radial(double r_lo, double r_hi, int panels, double sigma, int order,
                   double theta, double wtheta, Vec2 pivot, detail::NodeSet& out) {
    if (r_hi <= r_lo) return;
    GaussRule g = GaussRule::get(order);
    double span = r_hi - r_lo;
    Vec2 e{std::cos(theta), std::sin(theta)};
    double hi = r_hi;
    for (int p = 0; p < panels; ++p) {
        double lo = (p == panels - 1) ? r_lo : r_lo + span * std::pow(sigma, p + 1);
        double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
        for (std::size_t k = 0; k < g.x->size(); ++k) {
            double r = c + h * (*g.x)[k];
            double w = wtheta * h * (*g.w)[k] * r;
            out.push(pivot + e * r, w);
        }
        hi = lo;
        if (hi <= r_lo) break;
    }
}

} // namespace

GaussRule GaussRule::get(int order) {
    if (order < 1) throw std::invalid_argument("gauss order must be positive");
    const RuleData& rd = rule_cached(order);
    return {&rd.x, &rd.w};
}

double integrate_1d(const std::function<double(double)>& g, double a, double b,
                    int panels, int order) {
    if (panels < 1) panels = 1;
    GaussRule r = GaussRule::get(order);
    double total = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double c = lo + 0.5 * h;
        double sum = 0.0;
        for (std::size_t k = 0; k < r.x->size(); ++k)
            sum += (*r.w)[k] * g(c + 0.5 * h * (*r.x)[k]);
        total += 0.5 * h * sum;
    }
    return total;
}

double halton(long long index, int base) {
    double f = 1.0, result = 0.0;
    long long i = index + 1;
    while (i > 0) {
        f /= base;
        result += f * (i % base);
        i /= base;
    }
    return result;
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "tensor_gauss") return Scheme::tensor_gauss;
    if (s == "montecarlo") return Scheme::montecarlo;
    throw std::invalid_argument("unknown quadrature scheme: " + s);
}

std::string scheme_name(Scheme s) {
    return s == Scheme::tensor_gauss ? "tensor_gauss" : "montecarlo";
}

QuadratureSpec QuadratureSpec::refined() const {
    QuadratureSpec r = *this;
    auto up = [&](int v) { return (int)std::ceil(v * refine_factor); };
    r.order = up(order);
    r.far_order = up(far_order);
    r.strip_theta = up(strip_theta);
    r.strip_radial = up(strip_radial);
    r.fan_theta = up(fan_theta);
    r.fan_radial = up(fan_radial);
    r.fan_panels = fan_panels + 2;
    r.mc_samples = mc_samples * 2;
    return r;
}

namespace detail {

void rect_tensor_nodes(const Rect& r, int order, NodeSet& out) {
    GaussRule g = GaussRule::get(order);
    double cx = 0.5 * (r.x0 + r.x1), hx = 0.5 * (r.x1 - r.x0);
    double cy = 0.5 * (r.y0 + r.y1), hy = 0.5 * (r.y1 - r.y0);
    for (std::size_t a = 0; a < g.x->size(); ++a)
        for (std::size_t b = 0; b < g.x->size(); ++b)
            out.push({cx + hx * (*g.x)[a], cy + hy * (*g.x)[b]},
                     hx * hy * (*g.w)[a] * (*g.w)[b]);
}

// Triangle fan around an interior (or boundary) pivot: one wedge per edge,
// radial panels graded toward the pivot so r-Jacobian absorbs 1/r kernels.
static void rect_fan_nodes(const Rect& r, Vec2 x0, const QuadratureSpec& s, NodeSet& out) {
    const Vec2 corners[5] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}};
    GaussRule gt = GaussRule::get(s.fan_theta);
    for (int e = 0; e < 4; ++e) {
        Vec2 va = corners[e], vb = corners[e + 1];
        double ta = std::atan2(va.y - x0.y, va.x - x0.x);
        double tb = std::atan2(vb.y - x0.y, vb.x - x0.x);
        double delta = wrap_angle(tb - ta);
        if (std::abs(delta) < 1e-14) continue;
        Vec2 edge = vb - va;
        for (std::size_t k = 0; k < gt.x->size(); ++k) {
            double th = ta + delta * 0.5 * ((*gt.x)[k] + 1.0);
            double wth = std::abs(delta) * 0.5 * (*gt.w)[k] * (delta > 0 ? 1.0 : -1.0);
            Vec2 dir{std::cos(th), std::sin(th)};
            double denom = edge.x * dir.y - edge.y * dir.x;
            if (std::abs(denom) < 1e-300) continue;
            double rr = (edge.x * (va.y - x0.y) - edge.y * (va.x - x0.x)) / denom;
            if (rr <= 0.0) continue;
            graded_radial(0.0, rr, s.fan_panels, s.fan_sigma, s.fan_radial, th, wth, x0, out);
        }
    }
}

// Exterior pivot: adaptive quadtree splitting toward x0, spectral leaves.
static void rect_subdiv_nodes(const Rect& r, Vec2 x0, const QuadratureSpec& s, NodeSet& out) {
    struct Item {
        Rect box;
        int depth;
    };
    std::vector<Item> stack{{r, 0}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        double diam = std::max(it.box.width(), it.box.height());
        double d = it.box.distance(x0);
        if (d >= 0.7 * diam || it.depth >= 12) {
            rect_tensor_nodes(it.box, s.fan_radial + 2, out);
            continue;
        }
        double mx = 0.5 * (it.box.x0 + it.box.x1), my = 0.5 * (it.box.y0 + it.box.y1);
        stack.push_back({{it.box.x0, it.box.y0, mx, my}, it.depth + 1});
        stack.push_back({{mx, it.box.y0, it.box.x1, my}, it.depth + 1});
        stack.push_back({{it.box.x0, my, mx, it.box.y1}, it.depth + 1});
        stack.push_back({{mx, my, it.box.x1, it.box.y1}, it.depth + 1});
    }
}

void rect_singular_nodes(const Rect& r, Vec2 x0, const QuadratureSpec& s, NodeSet& out) {
    if (r.distance(x0) <= 1e-12 * std::max(r.width(), r.height()))
        rect_fan_nodes(r, x0, s, out);
    else
        rect_subdiv_nodes(r, x0, s, out);
}

void shape_chord_nodes(const ObstacleShape& shape, Vec2 z, double eps, Vec2 x0,
                       const QuadratureSpec& s, NodeSet& out) {
    Vec2 u = (x0 - z) / eps;
    double level = (u.x / shape.p) * (u.x / shape.p) + (u.y / shape.q) * (u.y / shape.q);
    bool inside = level < 1.0 - 1e-12;

    auto chord = [&](double th, double& r_lo, double& r_hi) -> bool {
        // intersect the ray x0 + r e(theta) with the scaled boundary
        double ex = std::cos(th) / (eps * shape.p), ey = std::sin(th) / (eps * shape.q);
        double ux = (x0.x - z.x) / (eps * shape.p), uy = (x0.y - z.y) / (eps * shape.q);
        double A = ex * ex + ey * ey;
        double B = 2.0 * (ux * ex + uy * ey);
        double C = ux * ux + uy * uy - 1.0;
        double disc = B * B - 4.0 * A * C;
        if (disc <= 0.0) return false;
        double sq = std::sqrt(disc);
        double r1 = (-B - sq) / (2.0 * A), r2 = (-B + sq) / (2.0 * A);
        if (r2 <= 0.0) return false;
        r_lo = std::max(r1, 0.0);
        r_hi = r2;
        return r_hi > r_lo;
    };

    if (inside) {
        GaussRule gt = GaussRule::get(s.fan_theta);
        for (int p = 0; p < 4; ++p) {
            double a = 2.0 * kPi * p / 4, b = 2.0 * kPi * (p + 1) / 4;
            for (std::size_t k = 0; k < gt.x->size(); ++k) {
                double th = 0.5 * (a + b) + 0.5 * (b - a) * (*gt.x)[k];
                double wth = 0.5 * (b - a) * (*gt.w)[k];
                double lo, hi;
                if (!chord(th, lo, hi)) continue;
                graded_radial(lo, hi, s.fan_panels, s.fan_sigma, s.fan_radial, th, wth, x0, out);
            }
        }
        return;
    }

    // exterior pivot: find the wedge of directions meeting the inclusion
    double tc = std::atan2(z.y - x0.y, z.x - x0.x);
    auto offset = [&](double phi) {
        Vec2 bp = z + shape.boundary_point(phi) * eps;
        return wrap_angle(std::atan2(bp.y - x0.y, bp.x - x0.x) - tc);
    };
    double dmin = 0.0, dmax = 0.0;
    double amin = 0.0, amax = 0.0;
    const int M = 128;
    for (int k = 0; k < M; ++k) {
        double phi = 2.0 * kPi * k / M;
        double d = offset(phi);
        if (d < dmin) { dmin = d; amin = phi; }
        if (d > dmax) { dmax = d; amax = phi; }
    }
    auto polish = [&](double phi0, int sign) {
        // golden-section maximization of sign * offset around phi0
        const double gr = 0.6180339887498949;
        double a = phi0 - 2.0 * kPi / M, b = phi0 + 2.0 * kPi / M;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        for (int it = 0; it < 60; ++it) {
            if (sign * offset(c) > sign * offset(d)) b = d; else a = c;
            c = b - gr * (b - a);
            d = a + gr * (b - a);
        }
        return offset(0.5 * (a + b));
    };
    dmin = polish(amin, -1);
    dmax = polish(amax, +1);
    double tm = tc + 0.5 * (dmin + dmax);
    double th_half = 0.5 * (dmax - dmin);
    if (th_half <= 0.0) return;

    // sine substitution clusters theta nodes at the tangency edges, where the
    // chord length vanishes like a square root
    GaussRule gt = GaussRule::get(2 * s.fan_theta);
    for (std::size_t k = 0; k < gt.x->size(); ++k) {
        double ssub = (*gt.x)[k];
        double th = tm + th_half * std::sin(0.5 * kPi * ssub);
        // dtheta = th_half * (pi/2) cos(pi s / 2) ds
        double wth = th_half * 0.5 * kPi * std::cos(0.5 * kPi * ssub) * (*gt.w)[k];
        double lo, hi;
        if (!chord(th, lo, hi)) continue;
        graded_radial(lo, hi, s.fan_panels, s.fan_sigma, s.fan_radial, th, wth, x0, out);
    }
}

void annulus_nodes(const ObstacleShape& shape, Vec2 z, double eps, double half_pitch,
                   int theta_order, int radial_order, NodeSet& out) {
    GaussRule gt = GaussRule::get(theta_order);
    GaussRule gr = GaussRule::get(radial_order);
    double ring = 0.5 * (eps + half_pitch); // cutoff plateau ring in inf-norm
    for (int oct = 0; oct < 8; ++oct) {
        double a = 2.0 * kPi * oct / 8, b = 2.0 * kPi * (oct + 1) / 8;
        for (std::size_t k = 0; k < gt.x->size(); ++k) {
            double th = 0.5 * (a + b) + 0.5 * (b - a) * (*gt.x)[k];
            double wth = 0.5 * (b - a) * (*gt.w)[k];
            double m = std::max(std::abs(std::cos(th)), std::abs(std::sin(th)));
            double r_tile = half_pitch / m;
            double r_in = eps * shape.boundary_radius(th);
            double r_ring = std::min(std::max(ring / m, r_in), r_tile);
            double edges[3] = {r_in, r_ring, r_tile};
            for (int seg = 0; seg < 2; ++seg) {
                double lo = edges[seg], hi = edges[seg + 1];
                if (hi <= lo) continue;
                double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
                for (std::size_t l = 0; l < gr.x->size(); ++l) {
                    double r = c + h * (*gr.x)[l];
                    out.push(z + Vec2{std::cos(th), std::sin(th)} * r,
                             wth * h * (*gr.w)[l] * r);
                }
            }
        }
    }
}

void shape_interior_nodes(const ObstacleShape& shape, Vec2 z, double eps,
                          int theta_order, int radial_order, NodeSet& out) {
    GaussRule gt = GaussRule::get(theta_order);
    GaussRule gr = GaussRule::get(radial_order);
    for (int p = 0; p < 4; ++p) {
        double a = 2.0 * kPi * p / 4, b = 2.0 * kPi * (p + 1) / 4;
        for (std::size_t k = 0; k < gt.x->size(); ++k) {
            double th = 0.5 * (a + b) + 0.5 * (b - a) * (*gt.x)[k];
            double wth = 0.5 * (b - a) * (*gt.w)[k];
            double rb = eps * shape.boundary_radius(th);
            double edges[3] = {0.0, 0.5 * rb, rb};
            for (int seg = 0; seg < 2; ++seg) {
                double c = 0.5 * (edges[seg] + edges[seg + 1]);
                double h = 0.5 * (edges[seg + 1] - edges[seg]);
                for (std::size_t l = 0; l < gr.x->size(); ++l) {
                    double r = c + h * (*gr.x)[l];
                    out.push(z + Vec2{std::cos(th), std::sin(th)} * r,
                             wth * h * (*gr.w)[l] * r);
                }
            }
        }
    }
}

} // namespace detail

SourceQuadrature::SourceQuadrature(const VorticitySpec& f, const PerforatedDomain* dom,
                                   QuadratureSpec spec)
    : f_(f), dom_(dom), spec_(spec) {
    build();
}

void SourceQuadrature::build() {
    Rect bbox = f_.bbox();
    detail::NodeSet ns;

    auto push_cell = [&](Rect box, bool strip, Vec2 z, double diam) {
        Cell c;
        c.box = box;
        c.strip = strip;
        c.z = z;
        c.diam = diam;
        c.y.reserve(ns.y.size());
        c.wf.reserve(ns.y.size());
        for (std::size_t i = 0; i < ns.y.size(); ++i) {
            double fv = f_(ns.y[i]);
            if (fv == 0.0) continue;
            c.y.push_back(ns.y[i]);
            c.wf.push_back(ns.w[i] * fv);
        }
        if (!c.y.empty()) cells_.push_back(std::move(c));
    };

    if (dom_) {
        double half = 0.5 * dom_->pitch();
        for (int j = 1; j <= dom_->n2(); ++j) {
            for (int i = 1; i <= dom_->n1(); ++i) {
                Rect t = dom_->tile(i, j);
                if (!t.overlaps(bbox)) continue;
                ns.clear();
                detail::annulus_nodes(dom_->shape(), dom_->center(i, j), dom_->eps(),
                                      half, spec_.strip_theta, spec_.strip_radial, ns);
                push_cell(t, true, dom_->center(i, j), dom_->pitch());
            }
        }
    }

    double cell = spec_.bg_cell > 0.0 ? spec_.bg_cell : f_.R0() / 8.0;
    int nx = std::max(1, (int)std::ceil(bbox.width() / cell));
    int ny = std::max(1, (int)std::ceil(bbox.height() / cell));
    double hx = bbox.width() / nx, hy = bbox.height() / ny;
    Rect block = dom_ ? dom_->block() : Rect{0, 0, -1, -1};
    Rect near_block = dom_ ? block.expanded(2.0 * dom_->pitch()) : Rect{0, 0, -1, -1};
    std::vector<Rect> pieces;
    for (int b = 0; b < ny; ++b) {
        for (int a = 0; a < nx; ++a) {
            Rect cr{bbox.x0 + a * hx, bbox.y0 + b * hy,
                    bbox.x0 + (a + 1) * hx, bbox.y0 + (b + 1) * hy};
            pieces.clear();
            if (dom_)
                rect_minus_rect(cr, block, pieces);
            else
                pieces.push_back(cr);
            for (const Rect& p : pieces) {
                int order = spec_.order;
                if (dom_ && !p.overlaps(near_block)) order = spec_.far_order;
                ns.clear();
                detail::rect_tensor_nodes(p, order, ns);
                push_cell(p, false, p.center(), std::max(p.width(), p.height()));
            }
        }
    }

    std::vector<double> parts;
    parts.reserve(cells_.size());
    for (const Cell& c : cells_) {
        std::vector<double> w = c.wf;
        parts.push_back(pairwise_sum(w));
    }
    mass_ = pairwise_sum(parts);
}

void SourceQuadrature::requad_cell(const Cell& c, Vec2 x0, detail::NodeSet& out) const {
    out.clear();
    if (c.strip) {
        detail::rect_singular_nodes(c.box, x0, spec_, out);
        detail::NodeSet hole;
        detail::shape_chord_nodes(dom_->shape(), c.z, dom_->eps(), x0, spec_, hole);
        for (std::size_t i = 0; i < hole.y.size(); ++i)
            out.push(hole.y[i], -hole.w[i]);
    } else {
        detail::rect_singular_nodes(c.box, x0, spec_, out);
    }
}

long SourceQuadrature::node_count() const {
    long n = 0;
    for (const Cell& c : cells_) n += (long)c.y.size();
    return n;
}

double RegionQuadrature::total_area() const {
    std::vector<double> parts;
    for (const Cell& c : cells_) {
        std::vector<double> w = c.w;
        parts.push_back(pairwise_sum(w));
    }
    return pairwise_sum(parts);
}

long RegionQuadrature::node_count() const {
    long n = 0;
    for (const Cell& c : cells_) n += (long)c.x.size();
    return n;
}

RegionQuadrature RegionQuadrature::strip_supports(const PerforatedDomain& dom,
                                                  int theta_order, int radial_order) {
    RegionQuadrature rq;
    double half = 0.5 * dom.pitch();
    detail::NodeSet ns;
    for (int j = 1; j <= dom.n2(); ++j) {
        for (int i = 1; i <= dom.n1(); ++i) {
            ns.clear();
            detail::annulus_nodes(dom.shape(), dom.center(i, j), dom.eps(), half,
                                  theta_order, radial_order, ns);
            Cell c;
            c.x = ns.y;
            c.w = ns.w;
            c.i = i;
            c.j = j;
            c.strip = true;
            rq.cells_.push_back(std::move(c));
        }
    }
    return rq;
}

RegionQuadrature RegionQuadrature::inclusion_interiors(const PerforatedDomain& dom,
                                                       int theta_order, int radial_order) {
    RegionQuadrature rq;
    detail::NodeSet ns;
    for (int j = 1; j <= dom.n2(); ++j) {
        for (int i = 1; i <= dom.n1(); ++i) {
            ns.clear();
            detail::shape_interior_nodes(dom.shape(), dom.center(i, j), dom.eps(),
                                         theta_order, radial_order, ns);
            Cell c;
            c.x = ns.y;
            c.w = ns.w;
            c.i = i;
            c.j = j;
            c.interior = true;
            rq.cells_.push_back(std::move(c));
        }
    }
    return rq;
}

RegionQuadrature RegionQuadrature::window(const PerforatedDomain* dom, Rect win,
                                          double cell_size, int order,
                                          int theta_order, int radial_order,
                                          bool include_interiors) {
    RegionQuadrature rq;
    detail::NodeSet ns;
    if (dom) {
        double half = 0.5 * dom->pitch();
        for (int j = 1; j <= dom->n2(); ++j) {
            for (int i = 1; i <= dom->n1(); ++i) {
                if (!dom->tile(i, j).overlaps(win)) continue;
                ns.clear();
                detail::annulus_nodes(dom->shape(), dom->center(i, j), dom->eps(),
                                      half, theta_order, radial_order, ns);
                Cell c;
                c.x = ns.y;
                c.w = ns.w;
                c.i = i;
                c.j = j;
                c.strip = true;
                rq.cells_.push_back(std::move(c));
                if (include_interiors) {
                    ns.clear();
                    detail::shape_interior_nodes(dom->shape(), dom->center(i, j),
                                                 dom->eps(), theta_order, radial_order, ns);
                    Cell ic;
                    ic.x = ns.y;
                    ic.w = ns.w;
                    ic.i = i;
                    ic.j = j;
                    ic.interior = true;
                    rq.cells_.push_back(std::move(ic));
                }
            }
        }
    }
    int nx = std::max(1, (int)std::ceil(win.width() / cell_size));
    int ny = std::max(1, (int)std::ceil(win.height() / cell_size));
    double hx = win.width() / nx, hy = win.height() / ny;
    Rect block = dom ? dom->block() : Rect{0, 0, -1, -1};
    std::vector<Rect> pieces;
    for (int b = 0; b < ny; ++b) {
        for (int a = 0; a < nx; ++a) {
            Rect cr{win.x0 + a * hx, win.y0 + b * hy,
                    win.x0 + (a + 1) * hx, win.y0 + (b + 1) * hy};
            pieces.clear();
            if (dom)
                rect_minus_rect(cr, block, pieces);
            else
                pieces.push_back(cr);
            for (const Rect& p : pieces) {
                ns.clear();
                detail::rect_tensor_nodes(p, order, ns);
                Cell c;
                c.x = ns.y;
                c.w = ns.w;
                rq.cells_.push_back(std::move(c));
            }
        }
    }
    return rq;
}

RegionQuadrature RegionQuadrature::rect_plain(Rect r, double cell_size, int order) {
    return window(nullptr, r, cell_size, order, 0, 0, false);
}

RegionQuadrature RegionQuadrature::disk(Vec2 c, double radius, int theta_order,
                                        int radial_order) {
    RegionQuadrature rq;
    detail::NodeSet ns;
    detail::shape_interior_nodes(ObstacleShape::disk(), c, radius, theta_order,
                                 radial_order, ns);
    Cell cell;
    cell.x = ns.y;
    cell.w = ns.w;
    rq.cells_.push_back(std::move(cell));
    return rq;
}

double lp_norm_cells(const std::function<double(Vec2)>& g, double p,
                     const RegionQuadrature& grid) {
    const auto& cells = grid.cells();
    std::vector<double> part(cells.size(), 0.0);
    bool inf = p <= 0.0;
    parallel_for(cells.size(), [&](std::size_t ci) {
        const auto& c = cells[ci];
        double acc = 0.0;
        for (std::size_t k = 0; k < c.x.size(); ++k) {
            double v = std::abs(g(c.x[k]));
            if (inf)
                acc = std::max(acc, v);
            else
                acc += c.w[k] * (p == 2.0 ? v * v : std::pow(v, p));
        }
        part[ci] = acc;
    });
    if (inf) {
        double m = 0.0;
        for (double v : part) m = std::max(m, v);
        return m;
    }
    double s = pairwise_sum(part);
    return p == 2.0 ? std::sqrt(std::max(s, 0.0)) : std::pow(std::max(s, 0.0), 1.0 / p);
}

NormResult lp_norm_two_level(const std::function<double(Vec2)>& g, double p,
                             const RegionQuadrature& coarse,
                             const RegionQuadrature& fine) {
    NormResult r;
    double a = lp_norm_cells(g, p, coarse);
    double b = lp_norm_cells(g, p, fine);
    r.value = b;
    r.err_estimate = std::abs(b - a);
    r.flagged = r.err_estimate > 0.1 * std::max(std::abs(b), 1e-300);
    r.evals = coarse.node_count() + fine.node_count();
    return r;
}

NormResult mc_norm(const std::function<double(Vec2)>& g, double p, Rect box,
                   const std::function<bool(Vec2)>& mask, long samples) {
    NormResult r;
    bool inf = p <= 0.0;
    double acc = 0.0, acc_half = 0.0, mx = 0.0;
    for (long i = 0; i < samples; ++i) {
        Vec2 x{box.x0 + box.width() * halton(i, 2),
               box.y0 + box.height() * halton(i, 3)};
        double v = 0.0;
        if (!mask || mask(x)) {
            v = std::abs(g(x));
            mx = std::max(mx, v);
        }
        double t = inf ? 0.0 : (p == 2.0 ? v * v : std::pow(v, p));
        acc += t;
        if (i < samples / 2) acc_half += t;
    }
    r.evals = samples;
    if (inf) {
        r.value = mx;
        r.err_estimate = 0.0;
        return r;
    }
    double area = box.area();
    double full = acc / samples * area;
    double halfe = acc_half / std::max(samples / 2, 1L) * area;
    r.value = p == 2.0 ? std::sqrt(std::max(full, 0.0)) : std::pow(std::max(full, 0.0), 1.0 / p);
    double vhalf = p == 2.0 ? std::sqrt(std::max(halfe, 0.0)) : std::pow(std::max(halfe, 0.0), 1.0 / p);
    r.err_estimate = std::abs(r.value - vhalf);
    r.flagged = r.err_estimate > 0.1 * std::max(r.value, 1e-300);
    return r;
}

} // namespace sieve
