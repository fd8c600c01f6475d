#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sieve/analysis.hpp"
#include "sieve/config.hpp"
#include "sieve/parallel.hpp"

namespace py = pybind11;
using namespace sieve;

namespace {

ObstacleShape shape_of(const std::string& name, double p, double q) {
    if (name == "disk") return ObstacleShape::disk();
    if (name == "ellipse") return ObstacleShape::ellipse(p, q);
    throw std::invalid_argument("unknown shape: " + name);
}

VorticitySpec field_of(const std::string& kind, double cx, double cy, double r0,
                       double amp) {
    if (kind == "radial_bump") return VorticitySpec::radial_bump({cx, cy}, r0, amp);
    if (kind == "gaussian") return VorticitySpec::gaussian_truncated({cx, cy}, r0, amp);
    if (kind == "patch") return VorticitySpec::patch_smooth({cx, cy}, r0, amp);
    throw std::invalid_argument("unknown field kind: " + kind);
}

py::dict diag_dict(const VortexDiagnostics& d) {
    py::dict out;
    out["t"] = d.t;
    out["l1"] = d.l1;
    out["l2"] = d.l2;
    out["linf"] = d.linf;
    out["mass"] = d.mass;
    out["circulations"] = d.circulations;
    out["max_abs_circulation"] = d.max_abs_circulation;
    out["min_boundary_dist"] = d.min_boundary_dist;
    out["bounding_radius"] = d.bounding_radius;
    out["max_speed"] = d.max_speed;
    out["penetration"] = d.penetration;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "lattice exterior-flow laboratory: geometry, corrected velocity "
              "fields, exterior solves, and vortex transport";

    m.def("version", [] { return std::string(kVersion); });
    m.def("expint_e1", &expint_e1, py::arg("x"));

    m.def(
        "domain_info",
        [](double eps, double alpha, double mu, const std::string& shape, double p,
           double q) {
            const PerforatedDomain dom =
                PerforatedDomain::build({eps, alpha, mu}, shape_of(shape, p, q));
            py::dict d;
            d["n1"] = dom.n1();
            d["n2"] = dom.n2();
            d["pitch"] = dom.pitch();
            d["eps_alpha"] = dom.eps_alpha();
            d["inclusions"] = dom.inclusion_count();
            d["count_ok"] = dom.count_inequality_ok();
            d["hausdorff_gap"] = dom.hausdorff_gap();
            py::list centers;
            for (int j = 1; j <= dom.n2(); ++j)
                for (int i = 1; i <= dom.n1(); ++i) {
                    const Vec2 c = dom.center(i, j);
                    centers.append(py::make_tuple(i, j, c.x, c.y));
                }
            d["centers"] = centers;
            return d;
        },
        py::arg("eps"), py::arg("alpha"), py::arg("mu"), py::arg("shape") = "disk",
        py::arg("p") = 1.0, py::arg("q") = 0.5);

    m.def(
        "map_report",
        [](const std::string& shape, double p, double q, std::uint64_t seed) {
            const ObstacleMap map(shape_of(shape, p, q));
            const MapDiagnostics d = map_diagnostics(map, seed);
            py::dict out;
            out["beta"] = d.beta;
            out["h_sup"] = d.h_sup;
            out["lip_forward"] = d.lip_forward;
            out["lip_inverse"] = d.lip_inverse;
            return out;
        },
        py::arg("shape") = "disk", py::arg("p") = 1.0, py::arg("q") = 0.5,
        py::arg("seed") = 1);

    m.def(
        "corrector_norms",
        [](double eps, double alpha, double mu, const std::string& shape, double p,
           double q, const std::string& kind, double cx, double cy, double r0,
           double amp, int order, int x_theta, int x_radial) {
            const ObstacleShape sh = shape_of(shape, p, q);
            const PerforatedDomain dom = PerforatedDomain::build({eps, alpha, mu}, sh);
            const ObstacleMap map(sh);
            const VorticitySpec f = field_of(kind, cx, cy, r0, amp);
            QuadratureSpec q2;
            q2.order = order;
            const CorrectorReport r = corrector_report(dom, map, f, q2,
                                                       CutoffProfile::quintic,
                                                       x_theta, x_radial);
            py::dict out;
            out["w1"] = r.w1;
            out["w2"] = r.w2;
            out["w3"] = r.w3;
            out["w4"] = r.w4;
            out["w_strip"] = r.w_strip;
            out["w_inclusions"] = r.w_inclusions;
            out["w_total"] = r.w_total;
            out["err_rel"] = r.err_rel;
            out["flagged"] = r.flagged;
            return out;
        },
        py::arg("eps"), py::arg("alpha"), py::arg("mu"), py::arg("shape") = "disk",
        py::arg("p") = 1.0, py::arg("q") = 0.5, py::arg("kind") = "radial_bump",
        py::arg("cx") = 0.5, py::arg("cy") = 0.9, py::arg("r0") = 0.4,
        py::arg("amp") = 5.0, py::arg("order") = 12, py::arg("x_theta") = 5,
        py::arg("x_radial") = 5);

    m.def(
        "corrector_velocity",
        [](double eps, double alpha, double mu, const std::string& shape, double p,
           double q, const std::string& kind, double cx, double cy, double r0,
           double amp, int order, const std::vector<std::pair<double, double>>& pts) {
            const ObstacleShape sh = shape_of(shape, p, q);
            const PerforatedDomain dom = PerforatedDomain::build({eps, alpha, mu}, sh);
            const ObstacleMap map(sh);
            const VorticitySpec f = field_of(kind, cx, cy, r0, amp);
            QuadratureSpec q2;
            q2.order = order;
            const SourceQuadrature src(f, &dom, q2);
            const CutoffFamily cut(&dom);
            const CorrectorField corr(&dom, &map, &src, &cut);
            std::vector<std::pair<double, double>> out(pts.size());
            parallel_for(pts.size(), [&](std::size_t k) {
                const Vec2 x{pts[k].first, pts[k].second};
                const Vec2 u = dom.in_inclusion(x) ? Vec2{} : corr.velocity(x);
                out[k] = {u.x, u.y};
            });
            return out;
        },
        py::arg("eps"), py::arg("alpha"), py::arg("mu"), py::arg("shape") = "disk",
        py::arg("p") = 1.0, py::arg("q") = 0.5, py::arg("kind") = "radial_bump",
        py::arg("cx") = 0.5, py::arg("cy") = 0.9, py::arg("r0") = 0.4,
        py::arg("amp") = 5.0, py::arg("order") = 12, py::arg("points") =
            std::vector<std::pair<double, double>>{});

    m.def(
        "exterior_report",
        [](double eps, double alpha, double mu, const std::string& shape, double p,
           double q, const std::string& kind, double cx, double cy, double r0,
           double amp, int order, int sources) {
            const ObstacleShape sh = shape_of(shape, p, q);
            const PerforatedDomain dom = PerforatedDomain::build({eps, alpha, mu}, sh);
            const VorticitySpec f = field_of(kind, cx, cy, r0, amp);
            QuadratureSpec q2;
            q2.order = order;
            const SourceQuadrature src(f, &dom, q2);
            MfsParams mp;
            mp.m = sources;
            const MfsSolution sol = solve_exterior(dom, src, mp);
            py::dict out;
            out["m"] = sol.m;
            out["inclusions"] = sol.n_inclusions;
            out["rank"] = sol.rank;
            out["cond_estimate"] = sol.cond_estimate;
            out["residual_max"] = sol.residual_max;
            out["residual_rms"] = sol.residual_rms;
            out["circulation_max"] = sol.circulation_max;
            out["converged"] = sol.converged;
            return out;
        },
        py::arg("eps"), py::arg("alpha"), py::arg("mu"), py::arg("shape") = "disk",
        py::arg("p") = 1.0, py::arg("q") = 0.5, py::arg("kind") = "radial_bump",
        py::arg("cx") = 0.5, py::arg("cy") = 0.9, py::arg("r0") = 0.4,
        py::arg("amp") = 5.0, py::arg("order") = 12, py::arg("sources") = 48);

    m.def(
        "evolve_summary",
        [](const std::string& backend, double eps, double alpha, double mu,
           const std::string& shape, double p, double q, const std::string& kind,
           double cx, double cy, double r0, double amp, double h, double dt,
           double t_end) {
            const ObstacleShape sh = shape_of(shape, p, q);
            const VorticitySpec f = field_of(kind, cx, cy, r0, amp);
            TransportParams tp;
            tp.backend = backend_from_string(backend);
            tp.h = h;
            tp.dt = dt;
            tp.t_end = t_end;
            std::optional<PerforatedDomain> dom;
            std::optional<ObstacleMap> map;
            if (tp.backend != VelocityBackend::plane) {
                dom.emplace(PerforatedDomain::build({eps, alpha, mu}, sh));
                map.emplace(sh);
            }
            VortexSystem sys(dom ? &*dom : nullptr, map ? &*map : nullptr, f, tp);
            sys.run_to(t_end);
            py::dict out = diag_dict(sys.diagnostics());
            out["particles"] = sys.size();
            out["cfl_violations"] = sys.cfl_violations();
            out["initial_mass"] = sys.initial_mass();
            return out;
        },
        py::arg("backend") = "plane", py::arg("eps") = 0.1, py::arg("alpha") = 1.0,
        py::arg("mu") = 0.0, py::arg("shape") = "disk", py::arg("p") = 1.0,
        py::arg("q") = 0.5, py::arg("kind") = "radial_bump", py::arg("cx") = 0.5,
        py::arg("cy") = 0.9, py::arg("r0") = 0.4, py::arg("amp") = 5.0,
        py::arg("h") = 0.05, py::arg("dt") = 0.01, py::arg("t_end") = 0.1);
}
