#include "CLI11.hpp"

#include "sieve/analysis.hpp"
#include "sieve/config.hpp"
#include "sieve/csvio.hpp"
#include "sieve/parallel.hpp"

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace sieve;

namespace {

RunConfig load_config(const std::string& path, const std::vector<std::string>& sets) {
    RunConfig cfg;
    if (!path.empty()) cfg = parse_config(read_text_file(path));
    for (const std::string& s : sets) apply_override(cfg, s);
    return cfg;
}

void write_manifest(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/manifest.txt", manifest_text(cfg));
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return cfg.output_dir + "/" + name;
}

// domain construction failures are configuration mistakes, not runtime faults
template <typename F>
auto configured(F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Rect auto_window(const PerforatedDomain& dom, const VorticitySpec& f, double pad) {
    const Rect b = dom.block();
    const Rect s = f.bbox();
    return Rect{std::min(b.x0, s.x0), std::min(b.y0, s.y0),
                std::max(b.x1, s.x1), std::max(b.y1, s.y1)}
        .expanded(pad);
}

int cmd_gen_domain(const RunConfig& cfg) {
    const PerforatedDomain dom = configured([&] { return make_domain(cfg); });
    const ObstacleMap map(dom.shape());

    {
        CsvWriter w(out_path(cfg, "centers.csv"), {"i", "j", "x", "y"});
        for (int j = 1; j <= dom.n2(); ++j) {
            for (int i = 1; i <= dom.n1(); ++i) {
                const Vec2 c = dom.center(i, j);
                w.begin_row();
                w.col(i);
                w.col(j);
                w.col(c.x);
                w.col(c.y);
                w.end_row();
            }
        }
    }

    const MapDiagnostics md = map_diagnostics(map, cfg.seed);
    {
        CsvWriter w(out_path(cfg, "report.csv"),
                    {"eps", "alpha", "mu", "shape", "n1", "n2", "pitch",
                     "inclusions", "hausdorff_gap", "count_ok", "beta", "h_sup",
                     "lip_forward", "lip_inverse"});
        w.begin_row();
        w.col(dom.eps());
        w.col(dom.params().alpha);
        w.col(dom.params().mu);
        w.col(dom.shape().name());
        w.col(dom.n1());
        w.col(dom.n2());
        w.col(dom.pitch());
        w.col(dom.inclusion_count());
        w.col(dom.hausdorff_gap());
        w.col((long long)(dom.count_inequality_ok() ? 1 : 0));
        w.col(md.beta);
        w.col(md.h_sup);
        w.col(md.lip_forward);
        w.col(md.lip_inverse);
        w.end_row();
    }
    std::cout << "domain: " << dom.n1() << " x " << dom.n2() << " inclusions, pitch "
              << format_double(dom.pitch()) << "\n";
    return 0;
}

int cmd_eval_field(const RunConfig& cfg, int grid) {
    if (grid < 2) throw ConfigError("--grid needs at least 2 points per side");
    const PerforatedDomain dom = configured([&] { return make_domain(cfg); });
    const ObstacleMap map(dom.shape());
    const VorticitySpec f = configured([&] { return make_field(cfg); });
    const SourceQuadrature src(f, &dom, make_qspec(cfg));
    const CutoffFamily cut(&dom, make_profile(cfg));
    const CorrectorField corr(&dom, &map, &src, &cut);

    const Rect win = cfg.window.size() == 4
                         ? Rect{cfg.window[0], cfg.window[1], cfg.window[2], cfg.window[3]}
                         : auto_window(dom, f, 0.5);

    const std::size_t n = (std::size_t)grid;
    std::vector<Vec2> pts(n * n);
    std::vector<Vec2> vel(n * n);
    std::vector<const char*> tag(n * n);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t a = 0; a < n; ++a)
            pts[b * n + a] = {win.x0 + (a + 0.5) * win.width() / (double)n,
                              win.y0 + (b + 0.5) * win.height() / (double)n};
    parallel_for(n * n, [&](std::size_t k) {
        const Vec2 x = pts[k];
        if (dom.in_inclusion(x)) {
            vel[k] = {};
            tag[k] = "interior";
            return;
        }
        vel[k] = corr.velocity(x);
        const CutoffValue cv = cut.eval_active(x);
        tag[k] = cv.phi == 0.0 ? "plane" : (cv.phi == 1.0 ? "obstacle" : "blend");
    });

    CsvWriter w(out_path(cfg, "field.csv"), {"x", "y", "u1", "u2", "provenance"});
    for (std::size_t k = 0; k < n * n; ++k) {
        w.begin_row();
        w.col(pts[k].x);
        w.col(pts[k].y);
        w.col(vel[k].x);
        w.col(vel[k].y);
        w.col(std::string(tag[k]));
        w.end_row();
    }
    std::cout << "evaluated " << n * n << " grid points\n";
    return 0;
}

int cmd_corrector_norms(const RunConfig& cfg) {
    const PerforatedDomain dom = configured([&] { return make_domain(cfg); });
    const ObstacleMap map(dom.shape());
    const VorticitySpec f = configured([&] { return make_field(cfg); });
    const CorrectorReport rep = corrector_report(dom, map, f, make_qspec(cfg),
                                                 make_profile(cfg), cfg.x_theta,
                                                 cfg.x_radial);

    const std::string path = out_path(cfg, "norms.csv");
    std::string content;
    if (fs::exists(path)) {
        content = read_text_file(path);
    } else {
        content = "eps,alpha,mu,shape,w1,w2,w3,w4,w_strip,w_inclusions,w_total,"
                  "err_rel,flagged\n";
    }
    content += format_double(dom.eps()) + "," + format_double(dom.params().alpha) + "," +
               format_double(dom.params().mu) + "," + dom.shape().name() + "," +
               format_double(rep.w1) + "," + format_double(rep.w2) + "," +
               format_double(rep.w3) + "," + format_double(rep.w4) + "," +
               format_double(rep.w_strip) + "," + format_double(rep.w_inclusions) + "," +
               format_double(rep.w_total) + "," + format_double(rep.err_rel) + "," +
               (rep.flagged ? "1" : "0") + "\n";
    write_text_file(path, content);

    std::cout << "defect norms: total " << format_double(rep.w_total) << " (err "
              << format_double(rep.err_rel) << (rep.flagged ? ", flagged" : "") << ")\n";
    return rep.flagged ? 1 : 0;
}

int cmd_solve_exterior(const RunConfig& cfg) {
    const PerforatedDomain dom = configured([&] { return make_domain(cfg); });
    const VorticitySpec f = configured([&] { return make_field(cfg); });
    const SourceQuadrature src(f, &dom, make_qspec(cfg));
    const MfsSolution sol = solve_exterior(dom, src, make_mfs(cfg));

    CsvWriter w(out_path(cfg, "mfs_report.csv"),
                {"m", "inclusions", "rank", "cond_estimate", "residual_max",
                 "residual_rms", "circulation_max", "projection_shift", "converged"});
    w.begin_row();
    w.col(sol.m);
    w.col(sol.n_inclusions);
    w.col((long long)sol.rank);
    w.col(sol.cond_estimate);
    w.col(sol.residual_max);
    w.col(sol.residual_rms);
    w.col(sol.circulation_max);
    w.col(sol.projection_shift);
    w.col((long long)(sol.converged ? 1 : 0));
    w.end_row();
    w.close();

    std::cout << "exterior solve: residual " << format_double(sol.residual_max)
              << (sol.converged ? " (converged)" : " (NOT converged)") << "\n";
    return sol.converged ? 0 : 1;
}

int cmd_evolve(const RunConfig& cfg) {
    const TransportParams tp = configured([&] { return make_transport(cfg); });
    const VorticitySpec omega0 = configured([&] { return make_field(cfg); });

    // the plane backend runs unobstructed; the others need the lattice
    std::optional<PerforatedDomain> dom;
    std::optional<ObstacleMap> map;
    if (tp.backend != VelocityBackend::plane) {
        dom.emplace(configured([&] { return make_domain(cfg); }));
        map.emplace(dom->shape());
    }
    VortexSystem sys(dom ? &*dom : nullptr, map ? &*map : nullptr, omega0, tp,
                     make_profile(cfg));

    CsvWriter diag(out_path(cfg, "diagnostics.csv"),
                   {"t", "l1", "l2", "linf", "mass", "max_abs_circulation",
                    "min_boundary_dist", "bounding_radius", "max_speed",
                    "penetration", "cfl_violations"});
    CsvWriter traj(out_path(cfg, "trajectory.csv"), {"t", "id", "x", "y", "value"});

    auto write_diag = [&]() {
        const VortexDiagnostics d = sys.diagnostics();
        diag.begin_row();
        diag.col(d.t);
        diag.col(d.l1);
        diag.col(d.l2);
        diag.col(d.linf);
        diag.col(d.mass);
        diag.col(d.max_abs_circulation);
        diag.col(d.min_boundary_dist);
        diag.col(d.bounding_radius);
        diag.col(d.max_speed);
        diag.col((long long)(d.penetration ? 1 : 0));
        diag.col((long long)sys.cfl_violations());
        diag.end_row();
    };
    auto write_traj = [&]() {
        const auto& p = sys.positions();
        const auto& v = sys.values();
        for (std::size_t k = 0; k < p.size(); ++k) {
            traj.begin_row();
            traj.col(sys.time());
            traj.col((long long)k);
            traj.col(p[k].x);
            traj.col(p[k].y);
            traj.col(v[k]);
            traj.end_row();
        }
    };

    write_diag();
    write_traj();
    const long nsteps = std::lround(std::ceil(tp.t_end / tp.dt - 1e-12));
    for (long s = 1; s <= nsteps; ++s) {
        sys.step(std::min(tp.dt, tp.t_end - sys.time()));
        write_diag();
        const bool last = s == nsteps;
        if (s % std::max(1, tp.traj_stride) == 0 || last) write_traj();
        if (sys.penetration_flag()) {
            diag.close();
            traj.close();
            std::cerr << "aborted: a particle entered an inclusion at t = "
                      << format_double(sys.time()) << "\n";
            return 1;
        }
    }
    std::cout << "evolved " << sys.size() << " particles to t = "
              << format_double(sys.time()) << " (" << sys.cfl_violations()
              << " cfl violations)\n";
    return 0;
}

int cmd_rate_study(const RunConfig& cfg) {
    RateStudyParams p;
    p.shape = configured([&] { return make_shape(cfg); });
    p.alpha = cfg.alpha;
    p.mu = cfg.mu;
    p.eps_list = cfg.eps_list;
    p.slack = cfg.slack;
    p.profile = make_profile(cfg);
    p.x_theta = cfg.x_theta;
    p.x_radial = cfg.x_radial;
    const VorticitySpec f = configured([&] { return make_field(cfg); });
    const RateReport rep =
        configured([&] { return rate_study(p, f, make_qspec(cfg)); });

    {
        CsvWriter w(out_path(cfg, "rates.csv"),
                    {"eps", "w1", "w2", "w3", "w4", "w_total", "w_inclusions",
                     "quad_err", "flagged", "w3_profile_ratio", "w4_profile_ratio"});
        for (std::size_t k = 0; k < rep.sweep.size(); ++k) {
            const RateRow& r = rep.sweep[k];
            w.begin_row();
            w.col(r.eps);
            w.col(r.w1);
            w.col(r.w2);
            w.col(r.w3);
            w.col(r.w4);
            w.col(r.w_total);
            w.col(r.w_inclusions);
            w.col(r.quad_err);
            w.col((long long)(r.flagged ? 1 : 0));
            w.col(rep.w3_profile_ratio.empty() ? 0.0 : rep.w3_profile_ratio[k]);
            w.col(rep.w4_profile_ratio.empty() ? 0.0 : rep.w4_profile_ratio[k]);
            w.end_row();
        }
    }

    std::string gp;
    gp += "set logscale xy\n";
    gp += "set xlabel 'eps'\n";
    gp += "set ylabel 'L2 defect norm'\n";
    gp += "set key left top\n";
    gp += "set title 'decay fit: slope " + format_double(rep.used_slope) +
          ", predicted " + format_double(rep.predicted_slope) + "'\n";
    gp += "set datafile separator ','\n";
    gp += "plot 'rates.csv' using 1:6 skip 1 with linespoints title 'total', \\\n";
    gp += "     'rates.csv' using 1:3 skip 1 with linespoints title 'transition', \\\n";
    gp += "     'rates.csv' using 1:5 skip 1 with linespoints title 'image'\n";
    write_text_file(out_path(cfg, "rates.gp"), gp);

    std::cout << "rate-study verdict: " << verdict_name(rep.verdict) << "\n"
              << "  fitted slope        " << format_double(rep.fitted_slope) << "\n"
              << "  log-corrected slope " << format_double(rep.log_corrected_slope) << "\n"
              << "  used slope          " << format_double(rep.used_slope) << "\n"
              << "  predicted - slack   " << format_double(rep.predicted_slope) << " - "
              << format_double(rep.slack) << "\n"
              << "  stability delta     " << format_double(rep.stability_delta) << "\n"
              << "  " << rep.note << "\n";
    return rep.verdict == Verdict::pass ? 0 : 1;
}

int cmd_convergence_study(const RunConfig& cfg) {
    DynamicStudyParams p;
    p.shape = configured([&] { return make_shape(cfg); });
    p.alpha = cfg.alpha;
    p.mu = cfg.mu;
    p.eps_list = cfg.eps_list;
    p.t_end = cfg.study_t_end;
    p.transport = configured([&] { return make_transport(cfg); });
    if (cfg.resolution > 0) p.transport.h = cfg.resolution;
    p.profile = make_profile(cfg);
    p.window_cell = cfg.window_cell;
    p.window_order = cfg.window_order;
    const VorticitySpec omega0 = configured([&] { return make_field(cfg); });
    if (cfg.window.size() == 4) {
        p.window = Rect{cfg.window[0], cfg.window[1], cfg.window[2], cfg.window[3]};
    } else {
        const PerforatedDomain biggest = configured([&] {
            return PerforatedDomain::build({cfg.eps_list.front(), cfg.alpha, cfg.mu},
                                           p.shape);
        });
        p.window = auto_window(biggest, omega0, 0.5);
    }

    const DynamicReport rep = configured([&] { return dynamic_convergence(p, omega0); });

    {
        CsvWriter w(out_path(cfg, "convergence.csv"),
                    {"eps", "err_t0", "err_mid", "err_final", "penetration",
                     "cfl_violations", "particles"});
        for (const DynamicRow& r : rep.rows) {
            w.begin_row();
            w.col(r.eps);
            w.col(r.err[0]);
            w.col(r.err[1]);
            w.col(r.err[2]);
            w.col((long long)(r.penetration ? 1 : 0));
            w.col((long long)r.cfl_violations);
            w.col((long long)r.particles);
            w.end_row();
        }
    }

    std::cout << "convergence-study verdict: " << verdict_name(rep.verdict) << "\n"
              << "  times: 0, " << format_double(rep.times[1]) << ", "
              << format_double(rep.times[2]) << "\n"
              << "  decrease at final time: " << (rep.decreasing[2] ? "yes" : "no")
              << "\n";
    for (const DynamicRow& r : rep.rows)
        std::cout << "  eps " << format_double(r.eps) << ": "
                  << format_double(r.err[0]) << " " << format_double(r.err[1]) << " "
                  << format_double(r.err[2]) << "\n";
    if (!rep.note.empty()) std::cout << "  " << rep.note << "\n";
    return rep.verdict == Verdict::pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for planar flow through a shrinking "
                 "lattice of obstacles"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path;
    std::vector<std::string> sets;
    std::string output_dir;
    int threads = 0;
    int grid = 64;
    app.add_option("--config", config_path, "path to a key = value config file");
    app.add_option("--set", sets, "override a key, e.g. --set domain.eps=0.05");
    app.add_option("--output-dir", output_dir, "directory for run outputs");
    app.add_option("--threads", threads, "worker threads (0 = automatic)");

    CLI::App* gen = app.add_subcommand("gen-domain", "lattice geometry and map report");
    CLI::App* ev = app.add_subcommand("eval-field", "corrected velocity on a grid");
    ev->add_option("--grid", grid, "points per side");
    CLI::App* cn = app.add_subcommand("corrector-norms", "defect norms (appends norms.csv)");
    CLI::App* se = app.add_subcommand("solve-exterior", "boundary-fitted exterior solve");
    CLI::App* evo = app.add_subcommand("evolve", "vortex transport run");
    evo->set_help_flag("--help", "print help"); // frees -h for the spacing flag
    std::string f_backend;
    double f_tend = -1, f_dt = -1, f_h = -1;
    evo->add_option("--t-end", f_tend, "final time");
    evo->add_option("--dt", f_dt, "time step");
    evo->add_option("-h,--h", f_h, "particle spacing");
    evo->add_option("--backend", f_backend, "plane | corrector | mfs");
    CLI::App* rs = app.add_subcommand("rate-study", "defect decay sweep and fit");
    CLI::App* cs = app.add_subcommand("convergence-study", "velocity gap vs the plane flow");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path, sets);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (f_tend > 0) cfg.t_end = f_tend;
        if (f_dt > 0) cfg.dt = f_dt;
        if (f_h > 0) cfg.h = f_h;
        if (!f_backend.empty())
            apply_override(cfg, "transport.backend=" + f_backend);
        if (threads > 0) set_threads(threads);
        write_manifest(cfg);

        if (gen->parsed()) return cmd_gen_domain(cfg);
        if (ev->parsed()) return cmd_eval_field(cfg, grid);
        if (cn->parsed()) return cmd_corrector_norms(cfg);
        if (se->parsed()) return cmd_solve_exterior(cfg);
        if (evo->parsed()) return cmd_evolve(cfg);
        if (rs->parsed()) return cmd_rate_study(cfg);
        if (cs->parsed()) return cmd_convergence_study(cfg);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
