#include "sieve/analysis.hpp"

#include "sieve/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sieve {

namespace {

FitResult fit_line(const std::vector<double>& lx, const std::vector<double>& ly) {
    const double n = (double)lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30) throw std::invalid_argument("degenerate abscissae in fit");
    FitResult r;
    r.slope = (n * sxy - sx * sy) / det;
    r.intercept = (sy - r.slope * sx) / n;
    for (std::size_t k = 0; k < lx.size(); ++k)
        r.max_residual = std::max(r.max_residual,
                                  std::abs(ly[k] - (r.intercept + r.slope * lx[k])));
    return r;
}

void check_fit_data(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit needs at least two matched points");
    for (std::size_t k = 0; k < x.size(); ++k)
        if (!(x[k] > 0.0) || !(y[k] > 0.0))
            throw std::invalid_argument("fit needs positive data");
}

Rect rect_union(Rect a, Rect b) {
    return {std::min(a.x0, b.x0), std::min(a.y0, b.y0),
            std::max(a.x1, b.x1), std::max(a.y1, b.y1)};
}

void check_sweep(const std::vector<double>& eps, std::size_t min_len) {
    if (eps.size() < min_len) throw std::invalid_argument("sweep too short");
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0) || !(eps[k] < 1.0))
            throw std::invalid_argument("sweep needs eps in (0,1)");
        if (k && !(eps[k] < eps[k - 1]))
            throw std::invalid_argument("sweep must be strictly decreasing");
    }
}

// L2 of g over the region, deterministic: per-cell pairwise sums, then a
// pairwise reduction across cells
template <typename G>
double region_l2(const RegionQuadrature& reg, G&& g) {
    const auto& cells = reg.cells();
    std::vector<double> part(cells.size(), 0.0);
    parallel_for(cells.size(), [&](std::size_t c) {
        const auto& cell = cells[c];
        std::vector<double> acc(cell.x.size());
        for (std::size_t k = 0; k < cell.x.size(); ++k)
            acc[k] = cell.w[k] * g(cell, cell.x[k]);
        part[c] = pairwise_sum(acc);
    });
    return std::sqrt(std::max(0.0, pairwise_sum(part)));
}

// far-field bound: sample |g| on the circle through the window corners and
// integrate the dipole envelope M (R/r)^2 outward
template <typename G>
double dipole_tail(Rect win, G&& g) {
    const Vec2 c = win.center();
    const double R = 0.5 * std::hypot(win.width(), win.height());
    double m = 0.0;
    for (int s = 0; s < 64; ++s) {
        const double th = 6.2831853071795864769 * (s + 0.5) / 64.0;
        m = std::max(m, g(c + Vec2{R * std::cos(th), R * std::sin(th)}).norm());
    }
    return m * R * std::sqrt(3.14159265358979323846);
}

} // namespace

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    check_fit_data(x, y);
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        lx[k] = std::log(x[k]);
        ly[k] = std::log(y[k]);
    }
    return fit_line(lx, ly);
}

FitResult fit_loglog_corrected(const std::vector<double>& x, const std::vector<double>& y) {
    check_fit_data(x, y);
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double l = std::abs(std::log(x[k]));
        if (l < 1e-12) throw std::invalid_argument("log correction undefined at x = 1");
        lx[k] = std::log(x[k]);
        ly[k] = std::log(y[k]) - std::log(l);
    }
    return fit_line(lx, ly);
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
    }
}

RateReport rate_study(const RateStudyParams& p, const VorticitySpec& f,
                      const QuadratureSpec& q) {
    check_sweep(p.eps_list, 4);
    RateReport r;
    r.slack = p.slack;
    r.predicted_slope = 0.5 * (2.0 - p.alpha - p.mu);

    const ObstacleMap map(p.shape);
    bool any_flagged = false;
    for (double eps : p.eps_list) {
        const PerforatedDomain dom =
            PerforatedDomain::build({eps, p.alpha, p.mu}, p.shape);
        const CorrectorReport rep =
            corrector_report(dom, map, f, q, p.profile, p.x_theta, p.x_radial);
        RateRow row;
        row.eps = eps;
        row.w1 = rep.w1;
        row.w2 = rep.w2;
        row.w3 = rep.w3;
        row.w4 = rep.w4;
        row.w_total = rep.w_total;
        row.w_inclusions = rep.w_inclusions;
        row.quad_err = rep.err_rel;
        row.flagged = rep.flagged;
        any_flagged = any_flagged || rep.flagged;
        r.sweep.push_back(row);
    }

    std::vector<double> xs, ys;
    for (const RateRow& row : r.sweep) {
        xs.push_back(row.eps);
        ys.push_back(row.w_total);
    }
    const FitResult plain = fit_loglog(xs, ys);
    const FitResult corrected = fit_loglog_corrected(xs, ys);
    r.fitted_slope = plain.slope;
    r.log_corrected_slope = corrected.slope;
    const bool use_corrected = std::abs(corrected.slope - plain.slope) > 0.05;
    r.used_slope = use_corrected ? corrected.slope : plain.slope;

    std::vector<double> xs_sub(xs.begin() + 1, xs.end());
    std::vector<double> ys_sub(ys.begin() + 1, ys.end());
    const FitResult sub = use_corrected ? fit_loglog_corrected(xs_sub, ys_sub)
                                        : fit_loglog(xs_sub, ys_sub);
    r.stability_delta = std::abs(sub.slope - r.used_slope);

    if (std::abs(p.mu - 1.0) < 1e-12) {
        for (const RateRow& row : r.sweep) {
            const double prof = std::sqrt(row.eps) +
                                std::sqrt(std::abs(std::log(row.eps))) *
                                    std::pow(row.eps, 1.0 - p.alpha);
            r.w3_profile_ratio.push_back(row.w3 / prof);
            r.w4_profile_ratio.push_back(row.w4 / prof);
        }
    }

    std::ostringstream note;
    if (any_flagged) {
        r.verdict = Verdict::inconclusive;
        note << "quadrature flagged in the sweep; ";
    } else if (r.stability_delta > 0.05) {
        r.verdict = Verdict::inconclusive;
        note << "fit unstable under removal of the largest eps (delta "
             << r.stability_delta << "); ";
    } else {
        r.verdict = (r.used_slope >= r.predicted_slope - p.slack) ? Verdict::pass
                                                                  : Verdict::fail;
    }
    note << "slope " << r.used_slope << (use_corrected ? " (log-corrected)" : " (plain)")
         << " vs predicted " << r.predicted_slope << " - " << p.slack;
    r.note = note.str();
    return r;
}

StaticReport static_convergence(const StaticStudyParams& p, const VorticitySpec& f,
                                const QuadratureSpec& q) {
    check_sweep(p.eps_list, 2);
    StaticReport rep;

    std::deque<PerforatedDomain> doms;
    Rect win = f.bbox();
    for (double eps : p.eps_list) {
        doms.push_back(PerforatedDomain::build({eps, p.alpha, p.mu}, p.shape));
        win = rect_union(win, doms.back().block());
    }
    win = win.expanded(p.window_pad);
    rep.window = win;
    const double cell =
        p.window_cell > 0 ? p.window_cell : std::max(win.width(), win.height()) / 28.0;

    bool all_converged = true;
    for (std::size_t d = 0; d < doms.size(); ++d) {
        const PerforatedDomain& dom = doms[d];
        const SourceQuadrature src(f, &dom, q);
        const MfsSolution sol = solve_exterior(dom, src, p.mfs);

        StaticRow row;
        row.eps = p.eps_list[d];
        row.mfs_residual = sol.residual_max;
        row.mfs_converged = sol.converged;
        all_converged = all_converged && sol.converged;

        const RegionQuadrature fluid = RegionQuadrature::window(
            &dom, win, cell, p.window_order, p.theta_order, p.radial_order, false);
        row.err_window = region_l2(fluid, [&](const RegionQuadrature::Cell&, Vec2 x) {
            return mfs_correction_velocity(sol, x).norm2();
        });
        const RegionQuadrature inner =
            RegionQuadrature::inclusion_interiors(dom, p.theta_order, p.radial_order);
        row.err_interior = region_l2(inner, [&](const RegionQuadrature::Cell&, Vec2 x) {
            return velocity_plane(src, x).norm2();
        });
        row.err_tail =
            dipole_tail(win, [&](Vec2 x) { return mfs_correction_velocity(sol, x); });
        row.err_total = std::sqrt(row.err_window * row.err_window +
                                  row.err_interior * row.err_interior +
                                  row.err_tail * row.err_tail);
        rep.rows.push_back(row);
    }

    rep.decreasing = true;
    for (std::size_t k = 1; k < rep.rows.size(); ++k)
        rep.decreasing = rep.decreasing && rep.rows[k].err_total < rep.rows[k - 1].err_total;
    if (!all_converged)
        rep.verdict = Verdict::inconclusive;
    else
        rep.verdict = rep.decreasing ? Verdict::pass : Verdict::fail;
    return rep;
}

DynamicReport dynamic_convergence(const DynamicStudyParams& p, const VorticitySpec& omega0) {
    check_sweep(p.eps_list, 2);
    if (!(p.t_end > 0.0)) throw std::invalid_argument("dynamic study needs t_end > 0");
    DynamicReport rep;
    rep.times = {0.0, 0.5 * p.t_end, p.t_end};

    TransportParams plane_params = p.transport;
    plane_params.backend = VelocityBackend::plane;
    plane_params.t_end = p.t_end;
    TransportParams corr_params = p.transport;
    corr_params.backend = VelocityBackend::corrector;
    corr_params.t_end = p.t_end;

    // reference evolution in the unobstructed plane, frozen at the snapshots
    std::vector<VortexSystem> plane_snaps;
    {
        VortexSystem sys(nullptr, nullptr, omega0, plane_params, p.profile);
        plane_snaps.push_back(sys);
        sys.run_to(rep.times[1]);
        plane_snaps.push_back(sys);
        sys.run_to(rep.times[2]);
        plane_snaps.push_back(sys);
    }

    const ObstacleMap map(p.shape);
    std::deque<PerforatedDomain> doms;
    std::ostringstream note;
    for (double eps : p.eps_list) {
        doms.push_back(PerforatedDomain::build({eps, p.alpha, p.mu}, p.shape));
        const PerforatedDomain& dom = doms.back();

        VortexSystem sys(&dom, &map, omega0, corr_params, p.profile);
        std::vector<VortexSystem> snaps;
        snaps.push_back(sys);
        sys.run_to(rep.times[1]);
        snaps.push_back(sys);
        sys.run_to(rep.times[2]);
        snaps.push_back(sys);

        DynamicRow row;
        row.eps = eps;
        row.particles = sys.size();
        row.penetration = sys.penetration_flag();
        row.cfl_violations = sys.cfl_violations();
        if (row.penetration) note << "penetration at eps " << eps << "; ";

        const double cell = p.window_cell > 0
                                ? p.window_cell
                                : std::max(p.window.width(), p.window.height()) / 24.0;
        const RegionQuadrature reg =
            RegionQuadrature::window(&dom, p.window, cell, p.window_order,
                                     p.theta_order, p.radial_order, true);
        for (int s = 0; s < 3; ++s) {
            const VortexSystem& es = snaps[(std::size_t)s];
            const VortexSystem& ps = plane_snaps[(std::size_t)s];
            es.velocity(p.window.center()); // build the cached stage off the parallel path
            ps.velocity(p.window.center());
            row.err[(std::size_t)s] =
                region_l2(reg, [&](const RegionQuadrature::Cell& c, Vec2 x) {
                    const Vec2 ue = c.interior ? Vec2{} : es.velocity(x);
                    return (ue - ps.velocity(x)).norm2();
                });
        }
        rep.rows.push_back(row);
    }

    for (int s = 0; s < 3; ++s) {
        bool dec = rep.rows.size() >= 2;
        for (std::size_t k = 1; k < rep.rows.size(); ++k)
            dec = dec && rep.rows[k].err[(std::size_t)s] < rep.rows[k - 1].err[(std::size_t)s];
        rep.decreasing[(std::size_t)s] = dec;
    }
    rep.verdict = rep.decreasing[2] ? Verdict::pass : Verdict::fail;
    rep.note = note.str();
    return rep;
}

LerayReport leray_check(const PerforatedDomain& dom, const ObstacleMap& map,
                        const SourceQuadrature& src, const MfsParams& mfs,
                        int x_theta, int x_radial, double bound) {
    LerayReport rep;
    rep.bound = bound;

    const MfsSolution sol = solve_exterior(dom, src, mfs);
    rep.mfs_residual = sol.residual_max;
    rep.mfs_converged = sol.converged;

    const CutoffFamily cut(&dom);
    const CorrectorField corr(&dom, &map, &src, &cut);

    const Rect win =
        rect_union(dom.block(), src.field().bbox()).expanded(std::max(1.0, 2.0 * dom.pitch()));
    const double cell = std::max(win.width(), win.height()) / 28.0;
    const RegionQuadrature fluid =
        RegionQuadrature::window(&dom, win, cell, 4, x_theta, x_radial, false);

    // one pass: the defect contributes only on the strip tiles, the solved
    // correction everywhere in the fluid
    const auto& cells = fluid.cells();
    std::vector<double> pa(cells.size(), 0.0), pb(cells.size(), 0.0);
    parallel_for(cells.size(), [&](std::size_t c) {
        const auto& cl = cells[c];
        std::vector<double> aa(cl.x.size(), 0.0), bb(cl.x.size(), 0.0);
        for (std::size_t k = 0; k < cl.x.size(); ++k) {
            const Vec2 x = cl.x[k];
            const Vec2 mc = mfs_correction_velocity(sol, x);
            if (cl.strip) {
                const Vec2 sw = corr.error_terms(x).sum();
                aa[k] = cl.w[k] * (mc + sw).norm2();
                bb[k] = cl.w[k] * sw.norm2();
            } else {
                aa[k] = cl.w[k] * mc.norm2();
            }
        }
        pa[c] = pairwise_sum(aa);
        pb[c] = pairwise_sum(bb);
    });
    rep.lhs_window = std::sqrt(std::max(0.0, pairwise_sum(pa)));
    rep.rhs = std::sqrt(std::max(0.0, pairwise_sum(pb)));
    rep.lhs_tail = dipole_tail(win, [&](Vec2 x) { return mfs_correction_velocity(sol, x); });
    rep.lhs = std::sqrt(rep.lhs_window * rep.lhs_window + rep.lhs_tail * rep.lhs_tail);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs
                              : std::numeric_limits<double>::infinity();
    rep.pass = rep.mfs_converged && rep.ratio <= bound;
    return rep;
}

} // namespace sieve
