#include "sieve/transport.hpp"

#include "sieve/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sieve {

namespace {

constexpr double kTwoPiInv = 0.15915494309189533577;
constexpr double kTwoPi = 6.2831853071795864769;
constexpr double kEuler = 0.57721566490153286061;

// Stream function of one Gaussian blob, psi'(r) = (1 - exp(-r^2/2d^2))/(2 pi r).
double psi_blob(double r, double delta) {
    const double u = r * r / (2.0 * delta * delta);
    if (u < 1e-14)
        return kTwoPiInv * (std::log(std::sqrt(2.0) * delta) - 0.5 * kEuler);
    return kTwoPiInv * (std::log(r) + 0.5 * expint_e1(u));
}

} // namespace

double expint_e1(double x) {
    if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
    if (x <= 1.0) {
        // E1 = -gamma - ln x - sum_{n>=1} (-x)^n/(n n!)
        double sum = 0.0, term = 1.0;
        for (int n = 1; n <= 40; ++n) {
            term *= -x / n;
            sum += term / n;
            if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return -kEuler - std::log(x) - sum;
    }
    // modified Lentz continued fraction e^{-x}/(x+1- 1/(x+3- 4/(x+5- ...)))
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int n = 1; n <= 200; ++n) {
        const double a = -double(n) * double(n);
        b += 2.0;
        d = b + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(-x);
}

VelocityBackend backend_from_string(const std::string& s) {
    if (s == "plane") return VelocityBackend::plane;
    if (s == "corrector") return VelocityBackend::corrector;
    if (s == "mfs") return VelocityBackend::mfs;
    throw std::invalid_argument("unknown velocity backend: " + s);
}

std::string backend_name(VelocityBackend b) {
    switch (b) {
    case VelocityBackend::plane: return "plane";
    case VelocityBackend::corrector: return "corrector";
    default: return "mfs";
    }
}

struct VortexSystem::Stage {
    std::vector<Vec2> src;                  // frozen source positions
    double gamma_sum = 0.0;
    std::unique_ptr<VortexTree> tree;       // built above tree_threshold
    std::vector<std::vector<Complex>> eta;  // mapped sources, one array per tile
    MfsSolution mfs;
    bool has_mfs = false;
};

VortexSystem::VortexSystem(const PerforatedDomain* dom, const ObstacleMap* map,
                           const VorticitySpec& omega0, const TransportParams& params,
                           CutoffProfile profile)
    : dom_(dom), map_(map), params_(params),
      cache_mu_(std::make_shared<std::mutex>()) {
    if (!(params_.h > 0.0) || !(params_.dt > 0.0))
        throw std::invalid_argument("transport needs positive h and dt");
    if (dom_ && !map_)
        throw std::invalid_argument("transport needs an obstacle map when a domain is set");
    if (dom_) cut_.emplace(dom_, profile);

    seed_center_ = omega0.center();
    const double R0 = omega0.R0();
    const double h = params_.h;
    const long n = std::lround(std::ceil(2.0 * R0 / h - 1e-12));
    for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) {
            const Vec2 x{seed_center_.x - R0 + (a + 0.5) * h,
                         seed_center_.y - R0 + (b + 0.5) * h};
            const double v = omega0(x);
            if (v == 0.0) continue;
            if (dom_ && dom_->in_inclusion(x)) continue;
            pos_.push_back(x);
            val_.push_back(v);
            wgt_.push_back(h * h);
            gam_.push_back(v * h * h);
        }
    }
    if (pos_.empty())
        throw std::invalid_argument("vorticity seeding produced no particles");
    delta_ = params_.blob_factor * h;
    std::vector<double> tmp = gam_;
    mass0_ = pairwise_sum(tmp);
}

std::shared_ptr<const VortexSystem::Stage>
VortexSystem::make_stage(const std::vector<Vec2>& particle_pos) const {
    auto st = std::make_shared<Stage>();
    st->src = particle_pos;
    std::vector<double> tmp = gam_;
    st->gamma_sum = pairwise_sum(tmp);

    const std::size_t n = particle_pos.size();
    if ((long)n >= params_.tree_threshold) {
        std::vector<Complex> pts(n);
        for (std::size_t k = 0; k < n; ++k) pts[k] = to_complex(particle_pos[k]);
        st->tree = std::make_unique<VortexTree>(std::move(pts), gam_);
    }

    if (dom_ && params_.backend == VelocityBackend::corrector) {
        const int nt = dom_->inclusion_count();
        st->eta.resize((std::size_t)nt);
        for (int t = 0; t < nt; ++t) {
            const int i = t % dom_->n1() + 1;
            const int j = t / dom_->n1() + 1;
            const LocalMap lm{map_, dom_->center(i, j), dom_->eps()};
            auto& et = st->eta[(std::size_t)t];
            et.resize(n);
            parallel_for(n, [&](std::size_t k) { et[k] = lm.forward(particle_pos[k]); });
        }
    }

    if (dom_ && params_.backend == VelocityBackend::mfs) {
        const double dl = delta_;
        const auto& gam = gam_;
        const auto& src = st->src;
        auto psi = [&src, &gam, dl](Vec2 x) {
            double s = 0.0;
            for (std::size_t k = 0; k < src.size(); ++k)
                s += gam[k] * psi_blob((x - src[k]).norm(), dl);
            return s;
        };
        st->mfs = solve_stream_problem(*dom_, params_.mfs, psi);
        st->has_mfs = true;
    }
    return st;
}

const VortexSystem::Stage& VortexSystem::stage_cached() const {
    std::lock_guard<std::mutex> lk(*cache_mu_);
    if (!cache_) cache_ = make_stage(pos_);
    return *cache_;
}

Vec2 VortexSystem::eval_one(const Stage& st, Vec2 x) const {
    const double d2 = 2.0 * delta_ * delta_;
    auto plane_blob = [&]() -> Vec2 {
        if (st.tree) return st.tree->velocity(x, delta_);
        return blob_velocity_direct(st.src, gam_, x, delta_);
    };

    if (params_.backend == VelocityBackend::plane || !dom_) return plane_blob();

    if (params_.backend == VelocityBackend::mfs) {
        Vec2 u = plane_blob();
        if (st.has_mfs) u += mfs_correction_velocity(st.mfs, x);
        return u;
    }

    int i = 0, j = 0;
    const CutoffValue cv = cut_->eval_active(x, &i, &j);
    if (cv.phi == 0.0) return plane_blob();

    const double eps = dom_->eps();
    const LocalMap lm{map_, dom_->center(i, j), eps};
    Complex zeta = lm.forward(x);
    const double az = std::abs(zeta);
    // transient stage positions may dip inside the obstacle; extend the field
    // continuously by projecting onto the mapped boundary circle
    if (az < 1.0 && az > 0.0) zeta /= az;
    const Complex xc = to_complex(x);
    const Complex fp = lm.fprime(x);
    const double beta = map_->beta();
    const double dcut = 1e-4 * eps;
    const bool need_d = cv.grad_perp.norm2() > 0.0;

    const auto& et = st.eta[(std::size_t)((j - 1) * dom_->n1() + (i - 1))];
    Complex smap{0.0, 0.0}, simg{0.0, 0.0};
    double dsum = 0.0;
    for (std::size_t k = 0; k < st.src.size(); ++k) {
        const double g = gam_[k];
        const Complex dd = xc - to_complex(st.src[k]);
        const double r2 = std::norm(dd);
        const Complex e = et[k];
        const Complex dm = zeta - e;
        const Complex estar = e / std::max(std::norm(e), 1e-300); // image 1 / conj(e)
        const Complex dimg = zeta - estar;
        if (r2 > 1e-300) {
            const double moll = -std::expm1(-r2 / d2);
            if (std::norm(dm) > 1e-300) smap += g * moll / dm;
        }
        if (std::norm(dimg) > 1e-300) simg += g / dimg;
        if (need_d) {
            double lr;
            if (r2 >= dcut * dcut) {
                lr = 0.5 * std::log(std::max(std::norm(dm), 1e-300) / (beta * beta * r2)) +
                     std::log(eps);
            } else {
                const Complex ratio =
                    fp - lm.fsecond(x) * dd * 0.5 + lm.fthird(x) * dd * dd / 6.0;
                lr = std::log(eps * std::abs(ratio) / beta);
            }
            dsum += g * (lr + 0.5 * std::log(std::max(std::norm(zeta), 1e-300)) -
                         0.5 * std::log(std::max(std::norm(dimg), 1e-300)));
        }
    }
    const Complex gsum = fp * (smap - simg + st.gamma_sum / zeta);
    const Vec2 uobs = perp_conj(gsum) * kTwoPiInv;
    Vec2 out = (cv.phi < 1.0) ? plane_blob() * (1.0 - cv.phi) + uobs * cv.phi : uobs;
    if (need_d) out += cv.grad_perp * (dsum * kTwoPiInv);
    return out;
}

std::vector<Vec2> VortexSystem::eval_field(const Stage& st,
                                           const std::vector<Vec2>& at) const {
    std::vector<Vec2> out(at.size());
    parallel_for(at.size(), [&](std::size_t k) { out[k] = eval_one(st, at[k]); });
    return out;
}

Vec2 VortexSystem::velocity(Vec2 x) const { return eval_one(stage_cached(), x); }

std::vector<Vec2> VortexSystem::velocities_at_particles() const {
    return eval_field(stage_cached(), pos_);
}

void VortexSystem::step(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step needs dt > 0");
    const std::size_t n = pos_.size();

    const std::vector<Vec2> v1 = eval_field(stage_cached(), pos_);
    double vmax = 0.0;
    for (const Vec2& v : v1) vmax = std::max(vmax, v.norm());
    if (vmax * dt > params_.cfl * params_.h) ++cfl_violations_;

    std::vector<Vec2> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = pos_[k] + v1[k] * (0.5 * dt);
    const std::vector<Vec2> v2 = eval_field(*make_stage(p), p);

    for (std::size_t k = 0; k < n; ++k) p[k] = pos_[k] + v2[k] * (0.5 * dt);
    const std::vector<Vec2> v3 = eval_field(*make_stage(p), p);

    for (std::size_t k = 0; k < n; ++k) p[k] = pos_[k] + v3[k] * dt;
    const std::vector<Vec2> v4 = eval_field(*make_stage(p), p);

    const double c = dt / 6.0;
    for (std::size_t k = 0; k < n; ++k)
        pos_[k] += (v1[k] + (v2[k] + v3[k]) * 2.0 + v4[k]) * c;
    t_ += dt;
    {
        std::lock_guard<std::mutex> lk(*cache_mu_);
        cache_.reset();
    }
    if (dom_) {
        for (const Vec2& q : pos_) {
            if (dom_->in_inclusion(q)) {
                penetration_ = true;
                break;
            }
        }
    }
}

void VortexSystem::run_to(double t_end) {
    while (t_end - t_ > 1e-12 * std::max(1.0, std::abs(t_end)))
        step(std::min(params_.dt, t_end - t_));
}

VortexDiagnostics VortexSystem::diagnostics(int contour_samples) const {
    VortexDiagnostics d;
    d.t = t_;
    const std::size_t n = pos_.size();
    std::vector<double> a1(n), a2(n), am(n);
    for (std::size_t k = 0; k < n; ++k) {
        a1[k] = wgt_[k] * std::abs(val_[k]);
        a2[k] = wgt_[k] * val_[k] * val_[k];
        am[k] = gam_[k];
        d.linf = std::max(d.linf, std::abs(val_[k]));
        d.bounding_radius = std::max(d.bounding_radius, (pos_[k] - seed_center_).norm());
    }
    d.l1 = pairwise_sum(a1);
    d.l2 = std::sqrt(pairwise_sum(a2));
    d.mass = pairwise_sum(am);

    const std::vector<Vec2> vel = velocities_at_particles();
    for (const Vec2& v : vel) d.max_speed = std::max(d.max_speed, v.norm());

    if (dom_) {
        d.min_boundary_dist = std::numeric_limits<double>::infinity();
        for (const Vec2& q : pos_)
            d.min_boundary_dist = std::min(d.min_boundary_dist, dom_->distance_to_inclusions(q));

        const Stage& st = stage_cached();
        const ObstacleShape& sh = dom_->shape();
        const double eps = dom_->eps();
        const int S = std::max(16, contour_samples);
        for (int j = 1; j <= dom_->n2(); ++j) {
            for (int i = 1; i <= dom_->n1(); ++i) {
                const Vec2 c = dom_->center(i, j);
                std::vector<double> acc((std::size_t)S);
                parallel_for((std::size_t)S, [&](std::size_t s) {
                    const double th = kTwoPi * (double)s / S;
                    const Vec2 bp = sh.boundary_point(th);
                    const Vec2 x = c + bp * eps;
                    const Vec2 tang{-sh.p * std::sin(th) * eps, sh.q * std::cos(th) * eps};
                    acc[s] = eval_one(st, x).dot(tang);
                });
                const double gamma = pairwise_sum(acc) * (kTwoPi / S);
                d.circulations.push_back(gamma);
                d.max_abs_circulation = std::max(d.max_abs_circulation, std::abs(gamma));
            }
        }
    } else {
        d.min_boundary_dist = std::numeric_limits<double>::infinity();
    }
    d.penetration = penetration_;
    return d;
}

} // namespace sieve
