#include "sieve/corrector.hpp"

#include "sieve/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace sieve {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPiInv = 0.15915494309189533577;

double smooth5(double t) { return ((6.0 * t - 15.0) * t + 10.0) * t * t * t; }
double smooth5_d(double t) {
    double u = t * (1.0 - t);
    return 30.0 * u * u;
}
double smooth3(double t) { return (3.0 - 2.0 * t) * t * t; }
double smooth3_d(double t) { return 6.0 * t * (1.0 - t); }
} // namespace

CutoffProfile cutoff_profile_from_string(const std::string& s) {
    if (s == "quintic") return CutoffProfile::quintic;
    if (s == "cubic") return CutoffProfile::cubic;
    if (s == "cosine") return CutoffProfile::cosine;
    throw std::invalid_argument("unknown cutoff profile: " + s);
}

std::string cutoff_profile_name(CutoffProfile p) {
    switch (p) {
        case CutoffProfile::quintic: return "quintic";
        case CutoffProfile::cubic: return "cubic";
        default: return "cosine";
    }
}

CutoffFamily::CutoffFamily(const PerforatedDomain* dom, CutoffProfile profile)
    : dom_(dom), profile_(profile) {
    if (!dom_) throw std::invalid_argument("cutoff family needs a domain");
}

double CutoffFamily::profile_value(double s) const {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    double t = 2.0 * s - 1.0;
    switch (profile_) {
        case CutoffProfile::quintic: return 1.0 - smooth5(t);
        case CutoffProfile::cubic: return 1.0 - smooth3(t);
        default: return 0.5 * (1.0 + std::cos(kPi * t));
    }
}

double CutoffFamily::profile_derivative(double s) const {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    double t = 2.0 * s - 1.0;
    switch (profile_) {
        case CutoffProfile::quintic: return -2.0 * smooth5_d(t);
        case CutoffProfile::cubic: return -2.0 * smooth3_d(t);
        default: return -kPi * std::sin(kPi * t);
    }
}

double CutoffFamily::profile_sup_derivative() const {
    switch (profile_) {
        case CutoffProfile::quintic: return 3.75;
        case CutoffProfile::cubic: return 3.0;
        default: return kPi;
    }
}

double CutoffFamily::grad_bound() const {
    return profile_sup_derivative() / dom_->eps_alpha();
}

double CutoffFamily::support_measure() const {
    double e = dom_->eps(), ea = dom_->eps_alpha();
    return 4.0 * e * ea + 3.0 * ea * ea;
}

CutoffValue CutoffFamily::eval(Vec2 x, int i, int j) const {
    Vec2 d = x - dom_->center(i, j);
    double ax = std::abs(d.x), ay = std::abs(d.y);
    double ninf = std::max(ax, ay);
    double s = (ninf - dom_->eps()) / dom_->eps_alpha();
    CutoffValue cv;
    cv.phi = profile_value(s);
    double dp = profile_derivative(s);
    if (dp != 0.0) {
        // gradient of the inf-norm: unit vector along the dominant coordinate
        Vec2 dir = ax >= ay ? Vec2{d.x >= 0.0 ? 1.0 : -1.0, 0.0}
                            : Vec2{0.0, d.y >= 0.0 ? 1.0 : -1.0};
        cv.grad = dir * (dp / dom_->eps_alpha());
        cv.grad_perp = cv.grad.perp();
    }
    return cv;
}

CutoffValue CutoffFamily::eval_active(Vec2 x, int* i_out, int* j_out) const {
    auto ti = dom_->tile_index(x);
    if (!ti) {
        if (i_out) *i_out = 0;
        if (j_out) *j_out = 0;
        return {};
    }
    if (i_out) *i_out = ti->first;
    if (j_out) *j_out = ti->second;
    return eval(x, ti->first, ti->second);
}

CorrectorField::CorrectorField(const PerforatedDomain* dom, const ObstacleMap* map,
                               const SourceQuadrature* src, const CutoffFamily* cut)
    : dom_(dom), map_(map), src_(src), cut_(cut) {
    if (!dom_ || !map_ || !src_ || !cut_)
        throw std::invalid_argument("corrector field: null component");
    dcut_ = 1e-4 * dom_->eps();
}

LocalMap CorrectorField::local_map(int i, int j) const {
    return LocalMap{map_, dom_->center(i, j), dom_->eps()};
}

Vec2 CorrectorField::plane_velocity(Vec2 x) const { return velocity_plane(*src_, x); }

Vec2 CorrectorField::obstacle_velocity(Vec2 x, int i, int j) const {
    return velocity_exterior_obstacle(local_map(i, j), *src_, x);
}

double CorrectorField::transition_potential(Vec2 x, int i, int j) const {
    LocalMap m = local_map(i, j);
    Complex zeta = m.forward(x);
    Complex fp = m.fprime(x), fs = m.fsecond(x), ft = m.fthird(x);
    double log_beta = std::log(map_->beta());
    double log_zeta = std::log(std::abs(zeta));
    Complex xc = to_complex(x);
    double eps = dom_->eps();
    auto ker = [&](Vec2 y) {
        Complex d = xc - to_complex(y);
        Complex eta = m.forward(y);
        double ad = std::abs(d);
        Complex ratio = ad >= dcut_ ? (zeta - eta) / d
                                    : fp - 0.5 * fs * d + (1.0 / 6.0) * ft * d * d;
        Complex estar = eta / std::norm(eta); // image 1 / conj(eta)
        // ln(eps |zeta-eta| / (beta |x-y|)) + ln(|zeta| / |zeta-eta*|)
        double k = std::log(eps * std::abs(ratio)) - log_beta;
        k += log_zeta - std::log(std::abs(zeta - estar));
        return std::array<Complex, 1>{Complex(k, 0.0)};
    };
    auto v = src_->integrate<1>(ker);
    return v[0].real() * kTwoPiInv;
}

ErrorTerms CorrectorField::error_terms(Vec2 x) const {
    int i = 0, j = 0;
    CutoffValue cv = cut_->eval_active(x, &i, &j);
    ErrorTerms w;
    if (i == 0) return w;
    bool need_grad = cv.grad.x != 0.0 || cv.grad.y != 0.0;
    bool need_phi = cv.phi != 0.0;
    if (!need_grad && !need_phi) return w;

    LocalMap m = local_map(i, j);
    Complex zeta = m.forward(x);
    Complex fp = m.fprime(x), fs = m.fsecond(x), ft = m.fthird(x);
    double log_beta = std::log(map_->beta());
    double log_zeta = std::log(std::abs(zeta));
    Complex inv_zeta = std::conj(zeta) / std::norm(zeta);
    Complex xc = to_complex(x);
    double eps = dom_->eps();

    // all four kernels are smooth in y (the diagonal singularities are
    // removable), so the cached smooth-path nodes suffice
    auto ker = [&](Vec2 y) {
        Complex d = xc - to_complex(y);
        Complex eta = m.forward(y);
        double ad = std::abs(d);
        Complex ratio, k3;
        if (ad >= dcut_) {
            ratio = (zeta - eta) / d;
            k3 = 1.0 / d - fp / (zeta - eta);
        } else {
            ratio = fp - 0.5 * fs * d + (1.0 / 6.0) * ft * d * d;
            k3 = (-0.5 * fs + (1.0 / 6.0) * ft * d) / ratio;
        }
        Complex estar = eta / std::norm(eta); // image 1 / conj(eta)
        double k1 = log_beta - std::log(eps * std::abs(ratio));
        double k2 = std::log(std::abs(zeta - estar)) - log_zeta;
        Complex k4 = fp * (1.0 / (zeta - estar) - inv_zeta);
        return std::array<Complex, 4>{Complex(k1, 0.0), Complex(k2, 0.0), k3, k4};
    };
    auto I = src_->integrate<4>(ker);
    if (need_grad) {
        w.w1 = cv.grad_perp * (I[0].real() * kTwoPiInv);
        w.w2 = cv.grad_perp * (I[1].real() * kTwoPiInv);
    }
    if (need_phi) {
        w.w3 = perp_conj(I[2]) * (cv.phi * kTwoPiInv);
        w.w4 = perp_conj(I[3]) * (cv.phi * kTwoPiInv);
    }
    return w;
}

Vec2 CorrectorField::velocity(Vec2 x) const {
    if (dom_->in_inclusion(x)) return {};
    int i = 0, j = 0;
    CutoffValue cv = cut_->eval_active(x, &i, &j);
    Vec2 out{};
    if (i == 0) return plane_velocity(x);
    if (cv.phi < 1.0) out += plane_velocity(x) * (1.0 - cv.phi);
    if (cv.phi > 0.0) out += obstacle_velocity(x, i, j) * cv.phi;
    if (cv.grad.x != 0.0 || cv.grad.y != 0.0)
        out += cv.grad_perp * transition_potential(x, i, j);
    return out;
}

namespace {

struct StripSums {
    double w1 = 0, w2 = 0, w3 = 0, w4 = 0, ws = 0;
};

StripSums strip_pass(const CorrectorField& cf, const RegionQuadrature& grid) {
    const auto& cells = grid.cells();
    std::vector<StripSums> part(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const auto& c = cells[ci];
        std::vector<double> s1(c.x.size()), s2(c.x.size()), s3(c.x.size()),
            s4(c.x.size()), ss(c.x.size());
        parallel_for(c.x.size(), [&](std::size_t k) {
            ErrorTerms w = cf.error_terms(c.x[k]);
            double wt = c.w[k];
            s1[k] = wt * w.w1.norm2();
            s2[k] = wt * w.w2.norm2();
            s3[k] = wt * w.w3.norm2();
            s4[k] = wt * w.w4.norm2();
            ss[k] = wt * w.sum().norm2();
        });
        part[ci] = {pairwise_sum(s1), pairwise_sum(s2), pairwise_sum(s3),
                    pairwise_sum(s4), pairwise_sum(ss)};
    }
    StripSums total;
    std::vector<double> tmp(part.size());
    auto reduce = [&](double StripSums::*f) {
        for (std::size_t k = 0; k < part.size(); ++k) tmp[k] = part[k].*f;
        return pairwise_sum(tmp);
    };
    total.w1 = reduce(&StripSums::w1);
    total.w2 = reduce(&StripSums::w2);
    total.w3 = reduce(&StripSums::w3);
    total.w4 = reduce(&StripSums::w4);
    total.ws = reduce(&StripSums::ws);
    return total;
}

double interior_pass(const CorrectorField& cf, const RegionQuadrature& grid) {
    const auto& cells = grid.cells();
    std::vector<double> part(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const auto& c = cells[ci];
        std::vector<double> s(c.x.size());
        parallel_for(c.x.size(), [&](std::size_t k) {
            s[k] = c.w[k] * cf.plane_velocity(c.x[k]).norm2();
        });
        part[ci] = pairwise_sum(s);
    }
    return pairwise_sum(part);
}

} // namespace

CorrectorReport corrector_report(const PerforatedDomain& dom, const ObstacleMap& map,
                                 const VorticitySpec& f, const QuadratureSpec& qspec,
                                 CutoffProfile profile, int x_theta, int x_radial) {
    CutoffFamily cut(&dom, profile);

    struct Level {
        StripSums s;
        double incl = 0;
        long xn = 0, yn = 0;
    };
    auto run = [&](const QuadratureSpec& qs, int xt, int xr) {
        SourceQuadrature src(f, &dom, qs);
        CorrectorField cf(&dom, &map, &src, &cut);
        RegionQuadrature xs = RegionQuadrature::strip_supports(dom, xt, xr);
        RegionQuadrature xi = RegionQuadrature::inclusion_interiors(
            dom, std::max(3, xt - 2), std::max(3, xr - 2));
        Level lv;
        lv.s = strip_pass(cf, xs);
        lv.incl = interior_pass(cf, xi);
        lv.xn = xs.node_count() + xi.node_count();
        lv.yn = src.node_count();
        return lv;
    };

    Level a = run(qspec, x_theta, x_radial);
    int xt2 = (int)std::ceil(x_theta * qspec.refine_factor);
    int xr2 = (int)std::ceil(x_radial * qspec.refine_factor);
    Level b = run(qspec.refined(), xt2, xr2);

    auto finish = [](const Level& lv) {
        CorrectorReport r;
        r.w1 = std::sqrt(std::max(lv.s.w1, 0.0));
        r.w2 = std::sqrt(std::max(lv.s.w2, 0.0));
        r.w3 = std::sqrt(std::max(lv.s.w3, 0.0));
        r.w4 = std::sqrt(std::max(lv.s.w4, 0.0));
        r.w_strip = std::sqrt(std::max(lv.s.ws, 0.0));
        r.w_inclusions = std::sqrt(std::max(lv.incl, 0.0));
        r.w_total = std::sqrt(std::max(lv.s.ws + lv.incl, 0.0));
        return r;
    };
    CorrectorReport ra = finish(a), rb = finish(b);
    double scale = std::max(rb.w_total, 1e-300);
    double err = 0.0;
    auto upd = [&](double va, double vb) { err = std::max(err, std::abs(vb - va) / scale); };
    upd(ra.w1, rb.w1);
    upd(ra.w2, rb.w2);
    upd(ra.w3, rb.w3);
    upd(ra.w4, rb.w4);
    upd(ra.w_strip, rb.w_strip);
    upd(ra.w_inclusions, rb.w_inclusions);
    upd(ra.w_total, rb.w_total);
    rb.err_rel = err;
    rb.flagged = err > 0.1;
    rb.x_nodes = a.xn + b.xn;
    rb.y_nodes = b.yn;
    return rb;
}

} // namespace sieve
