#pragma once

#include "sieve/field.hpp"
#include "sieve/geometry.hpp"
#include "sieve/mfs.hpp"
#include "sieve/quadrature.hpp"
#include "sieve/transport.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sieve {

inline constexpr const char* kVersion = "eulersieve 1.0.0";

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Fully resolved run configuration. Parsed from a UTF-8 key = value file with
// bracketed sections; unknown sections or keys are rejected with the offending
// name in the message.
struct RunConfig {
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    // [domain]
    double eps = 0.1, alpha = 1.0, mu = 0.0;
    std::string shape = "disk";
    double ellipse_p = 1.0, ellipse_q = 0.5;

    // [field]
    std::string field_kind = "radial_bump";
    double field_cx = 0.5, field_cy = 0.9;
    double field_r0 = 0.4, field_amp = 5.0;

    // [quadrature]
    std::string quad_scheme = "tensor_gauss";
    int quad_order = 16;
    long mc_samples = 200000;
    int strip_theta = 4, strip_radial = 5;
    int fan_theta = 16, fan_radial = 6;
    double bg_cell = 0.0;
    int far_order = 6;

    // [mfs]
    int mfs_m = 80;
    double mfs_rho = 0.5, mfs_tol = 1e-8, mfs_cutoff = 1e-12;

    // [transport]
    double h = 0.02, dt = 0.005, t_end = 0.5;
    double blob_factor = 2.0, cfl = 0.8;
    std::string backend = "corrector";
    int traj_stride = 5;
    long tree_threshold = 4000;

    // [corrector]
    std::string profile = "quintic";
    int x_theta = 6, x_radial = 6;

    // [study]
    std::vector<double> eps_list = {0.1, 0.05, 0.025, 0.0125};
    double slack = 0.15;
    std::vector<double> window; // x0,y0,x1,y1; empty selects an automatic window
    double study_t_end = 0.5;
    double resolution = 0.0; // particle spacing for studies; 0 falls back to [transport] h
    double window_cell = 0.0;
    int window_order = 4;
};

RunConfig parse_config(const std::string& text);
// "section.key=value" (or "key=value" for the top level), validated like the file
void apply_override(RunConfig& cfg, const std::string& assignment);
// canonical echo of every resolved key, first line = artifact version
std::string manifest_text(const RunConfig& cfg);

ObstacleShape make_shape(const RunConfig& cfg);
PerforatedDomain make_domain(const RunConfig& cfg);
VorticitySpec make_field(const RunConfig& cfg);
QuadratureSpec make_qspec(const RunConfig& cfg);
MfsParams make_mfs(const RunConfig& cfg);
TransportParams make_transport(const RunConfig& cfg);
CutoffProfile make_profile(const RunConfig& cfg);

} // namespace sieve
