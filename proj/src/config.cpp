#include "sieve/config.hpp"

#include "sieve/csvio.hpp"

#include <array>
#include <charconv>
#include <map>
#include <sstream>

namespace sieve {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e)
        throw ConfigError("invalid number for " + key + ": '" + v + "'");
    return out;
}

long to_long(const std::string& key, const std::string& v) {
    long out = 0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e)
        throw ConfigError("invalid integer for " + key + ": '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty entry in list " + key);
        out.push_back(to_double(key, item));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

void expect_one_of(const std::string& key, const std::string& v,
                   std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (v == a) return;
    std::string msg = "invalid value for " + key + ": '" + v + "' (expected one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ConfigError(msg + ")");
}

void assign(RunConfig& c, const std::string& full, const std::string& v) {
    const std::size_t dot = full.find('.');
    const std::string sec = dot == std::string::npos ? "" : full.substr(0, dot);
    const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);

    auto unknown = [&]() -> void {
        if (sec.empty()) throw ConfigError("unknown key '" + key + "'");
        throw ConfigError("unknown key '" + key + "' in [" + sec + "]");
    };

    if (sec.empty()) {
        if (key == "seed") c.seed = (std::uint64_t)to_long(full, v);
        else if (key == "output_dir") c.output_dir = v;
        else unknown();
    } else if (sec == "domain") {
        if (key == "eps") c.eps = to_double(full, v);
        else if (key == "alpha") c.alpha = to_double(full, v);
        else if (key == "mu") c.mu = to_double(full, v);
        else if (key == "shape") { expect_one_of(full, v, {"disk", "ellipse"}); c.shape = v; }
        else if (key == "ellipse_p") c.ellipse_p = to_double(full, v);
        else if (key == "ellipse_q") c.ellipse_q = to_double(full, v);
        else unknown();
    } else if (sec == "field") {
        if (key == "kind") {
            expect_one_of(full, v, {"radial_bump", "gaussian", "patch"});
            c.field_kind = v;
        } else if (key == "center_x") c.field_cx = to_double(full, v);
        else if (key == "center_y") c.field_cy = to_double(full, v);
        else if (key == "r0") c.field_r0 = to_double(full, v);
        else if (key == "amplitude") c.field_amp = to_double(full, v);
        else unknown();
    } else if (sec == "quadrature") {
        if (key == "scheme") {
            expect_one_of(full, v, {"tensor_gauss", "montecarlo"});
            c.quad_scheme = v;
        } else if (key == "order") c.quad_order = (int)to_long(full, v);
        else if (key == "samples") c.mc_samples = to_long(full, v);
        else if (key == "strip_theta") c.strip_theta = (int)to_long(full, v);
        else if (key == "strip_radial") c.strip_radial = (int)to_long(full, v);
        else if (key == "fan_theta") c.fan_theta = (int)to_long(full, v);
        else if (key == "fan_radial") c.fan_radial = (int)to_long(full, v);
        else if (key == "bg_cell") c.bg_cell = to_double(full, v);
        else if (key == "far_order") c.far_order = (int)to_long(full, v);
        else unknown();
    } else if (sec == "mfs") {
        if (key == "m") c.mfs_m = (int)to_long(full, v);
        else if (key == "rho") c.mfs_rho = to_double(full, v);
        else if (key == "tol_bc") c.mfs_tol = to_double(full, v);
        else if (key == "svd_cutoff") c.mfs_cutoff = to_double(full, v);
        else unknown();
    } else if (sec == "transport") {
        if (key == "h") c.h = to_double(full, v);
        else if (key == "dt") c.dt = to_double(full, v);
        else if (key == "t_end") c.t_end = to_double(full, v);
        else if (key == "blob_factor") c.blob_factor = to_double(full, v);
        else if (key == "cfl") c.cfl = to_double(full, v);
        else if (key == "backend") {
            expect_one_of(full, v, {"plane", "corrector", "mfs"});
            c.backend = v;
        } else if (key == "traj_stride") c.traj_stride = (int)to_long(full, v);
        else if (key == "tree_threshold") c.tree_threshold = to_long(full, v);
        else unknown();
    } else if (sec == "corrector") {
        if (key == "profile") {
            expect_one_of(full, v, {"quintic", "cubic", "cosine"});
            c.profile = v;
        } else if (key == "x_theta") c.x_theta = (int)to_long(full, v);
        else if (key == "x_radial") c.x_radial = (int)to_long(full, v);
        else unknown();
    } else if (sec == "study") {
        if (key == "eps_list") c.eps_list = to_list(full, v);
        else if (key == "slack") c.slack = to_double(full, v);
        else if (key == "window") {
            c.window = to_list(full, v);
            if (c.window.size() != 4)
                throw ConfigError("study.window needs four numbers x0,y0,x1,y1");
        } else if (key == "t_end") c.study_t_end = to_double(full, v);
        else if (key == "resolution") c.resolution = to_double(full, v);
        else if (key == "window_cell") c.window_cell = to_double(full, v);
        else if (key == "window_order") c.window_order = (int)to_long(full, v);
        else unknown();
    } else {
        throw ConfigError("unknown section [" + sec + "]");
    }
}

std::string join_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ",";
        s += format_double(v[k]);
    }
    return s;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    static const std::array<const char*, 7> sections = {
        "domain", "field", "quadrature", "mfs", "transport", "corrector", "study"};

    std::string section;
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<std::string, std::string>> entries;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header: " + line);
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const char* s : sections) known = known || section == s;
            if (!known) throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("malformed line: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key in line: " + line);
        entries.emplace_back(section.empty() ? key : section + "." + key, val);
    }
    for (const auto& [k, v] : entries) assign(cfg, k, v);
    return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override needs key=value, got: " + assignment);
    assign(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string manifest_text(const RunConfig& c) {
    std::string s;
    s += kVersion;
    s += "\n";
    s += "seed = " + std::to_string(c.seed) + "\n";
    s += "output_dir = " + c.output_dir + "\n";
    s += "[domain]\n";
    s += "eps = " + format_double(c.eps) + "\n";
    s += "alpha = " + format_double(c.alpha) + "\n";
    s += "mu = " + format_double(c.mu) + "\n";
    s += "shape = " + c.shape + "\n";
    s += "ellipse_p = " + format_double(c.ellipse_p) + "\n";
    s += "ellipse_q = " + format_double(c.ellipse_q) + "\n";
    s += "[field]\n";
    s += "kind = " + c.field_kind + "\n";
    s += "center_x = " + format_double(c.field_cx) + "\n";
    s += "center_y = " + format_double(c.field_cy) + "\n";
    s += "r0 = " + format_double(c.field_r0) + "\n";
    s += "amplitude = " + format_double(c.field_amp) + "\n";
    s += "[quadrature]\n";
    s += "scheme = " + c.quad_scheme + "\n";
    s += "order = " + std::to_string(c.quad_order) + "\n";
    s += "samples = " + std::to_string(c.mc_samples) + "\n";
    s += "strip_theta = " + std::to_string(c.strip_theta) + "\n";
    s += "strip_radial = " + std::to_string(c.strip_radial) + "\n";
    s += "fan_theta = " + std::to_string(c.fan_theta) + "\n";
    s += "fan_radial = " + std::to_string(c.fan_radial) + "\n";
    s += "bg_cell = " + format_double(c.bg_cell) + "\n";
    s += "far_order = " + std::to_string(c.far_order) + "\n";
    s += "[mfs]\n";
    s += "m = " + std::to_string(c.mfs_m) + "\n";
    s += "rho = " + format_double(c.mfs_rho) + "\n";
    s += "tol_bc = " + format_double(c.mfs_tol) + "\n";
    s += "svd_cutoff = " + format_double(c.mfs_cutoff) + "\n";
    s += "[transport]\n";
    s += "h = " + format_double(c.h) + "\n";
    s += "dt = " + format_double(c.dt) + "\n";
    s += "t_end = " + format_double(c.t_end) + "\n";
    s += "blob_factor = " + format_double(c.blob_factor) + "\n";
    s += "cfl = " + format_double(c.cfl) + "\n";
    s += "backend = " + c.backend + "\n";
    s += "traj_stride = " + std::to_string(c.traj_stride) + "\n";
    s += "tree_threshold = " + std::to_string(c.tree_threshold) + "\n";
    s += "[corrector]\n";
    s += "profile = " + c.profile + "\n";
    s += "x_theta = " + std::to_string(c.x_theta) + "\n";
    s += "x_radial = " + std::to_string(c.x_radial) + "\n";
    s += "[study]\n";
    s += "eps_list = " + join_list(c.eps_list) + "\n";
    s += "slack = " + format_double(c.slack) + "\n";
    s += "window = " + (c.window.empty() ? std::string("auto") : join_list(c.window)) + "\n";
    s += "t_end = " + format_double(c.study_t_end) + "\n";
    s += "resolution = " + format_double(c.resolution) + "\n";
    s += "window_cell = " + format_double(c.window_cell) + "\n";
    s += "window_order = " + std::to_string(c.window_order) + "\n";
    return s;
}

ObstacleShape make_shape(const RunConfig& cfg) {
    if (cfg.shape == "disk") return ObstacleShape::disk();
    return ObstacleShape::ellipse(cfg.ellipse_p, cfg.ellipse_q);
}

PerforatedDomain make_domain(const RunConfig& cfg) {
    return PerforatedDomain::build({cfg.eps, cfg.alpha, cfg.mu}, make_shape(cfg));
}

VorticitySpec make_field(const RunConfig& cfg) {
    const Vec2 c{cfg.field_cx, cfg.field_cy};
    if (cfg.field_kind == "gaussian")
        return VorticitySpec::gaussian_truncated(c, cfg.field_r0, cfg.field_amp);
    if (cfg.field_kind == "patch")
        return VorticitySpec::patch_smooth(c, cfg.field_r0, cfg.field_amp);
    return VorticitySpec::radial_bump(c, cfg.field_r0, cfg.field_amp);
}

QuadratureSpec make_qspec(const RunConfig& cfg) {
    QuadratureSpec q;
    q.scheme = scheme_from_string(cfg.quad_scheme);
    q.order = cfg.quad_order;
    q.mc_samples = cfg.mc_samples;
    q.strip_theta = cfg.strip_theta;
    q.strip_radial = cfg.strip_radial;
    q.fan_theta = cfg.fan_theta;
    q.fan_radial = cfg.fan_radial;
    q.bg_cell = cfg.bg_cell;
    q.far_order = cfg.far_order;
    return q;
}

MfsParams make_mfs(const RunConfig& cfg) {
    MfsParams m;
    m.m = cfg.mfs_m;
    m.rho = cfg.mfs_rho;
    m.tol_bc = cfg.mfs_tol;
    m.svd_cutoff = cfg.mfs_cutoff;
    return m;
}

TransportParams make_transport(const RunConfig& cfg) {
    TransportParams t;
    t.h = cfg.h;
    t.dt = cfg.dt;
    t.t_end = cfg.t_end;
    t.blob_factor = cfg.blob_factor;
    t.cfl = cfg.cfl;
    t.backend = backend_from_string(cfg.backend);
    t.traj_stride = cfg.traj_stride;
    t.tree_threshold = cfg.tree_threshold;
    t.mfs = make_mfs(cfg);
    return t;
}

CutoffProfile make_profile(const RunConfig& cfg) {
    return cutoff_profile_from_string(cfg.profile);
}

} // namespace sieve
