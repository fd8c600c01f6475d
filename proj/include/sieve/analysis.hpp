#pragma once

#include "sieve/corrector.hpp"
#include "sieve/mfs.hpp"
#include "sieve/transport.hpp"

#include <array>
#include <string>
#include <vector>

namespace sieve {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0; // max |ln y - (intercept + slope ln x)|
};

// Least-squares line through (ln x_k, ln y_k). Throws on fewer than two
// points or nonpositive data.
FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y);
// Same after removing a |ln x| prefactor: fits ln y - ln|ln x| against ln x.
FitResult fit_loglog_corrected(const std::vector<double>& x, const std::vector<double>& y);

enum class Verdict { pass, fail, inconclusive };
std::string verdict_name(Verdict v);

struct RateRow {
    double eps = 0.0;
    double w1 = 0.0, w2 = 0.0, w3 = 0.0, w4 = 0.0;
    double w_total = 0.0;
    double w_inclusions = 0.0;
    double quad_err = 0.0;
    bool flagged = false;
};

struct RateReport {
    std::vector<RateRow> sweep;          // sorted by decreasing eps
    double fitted_slope = 0.0;           // plain ln-ln fit of the total norm
    double log_corrected_slope = 0.0;    // fit with the |ln eps| factor removed
    double used_slope = 0.0;             // corrected one when the two differ by > 0.05
    double predicted_slope = 0.0;        // (2 - alpha - mu) / 2
    double slack = 0.15;
    double stability_delta = 0.0;        // slope shift after dropping the largest eps
    std::vector<double> w3_profile_ratio; // mu = 1: norm / (eps^{1/2} + |ln eps|^{1/2} eps^{1-alpha})
    std::vector<double> w4_profile_ratio;
    Verdict verdict = Verdict::inconclusive;
    std::string note;
};

struct RateStudyParams {
    ObstacleShape shape = ObstacleShape::disk();
    double alpha = 1.0;
    double mu = 0.0;
    std::vector<double> eps_list; // strictly decreasing, length >= 4
    double slack = 0.15;
    CutoffProfile profile = CutoffProfile::quintic;
    int x_theta = 6;
    int x_radial = 6;
};

// Sweep the lattice over eps_list, measure the defect norms, and fit the
// decay exponent of the total against the predicted (2 - alpha - mu)/2.
// Any flagged quadrature or an unstable fit turns the verdict inconclusive.
RateReport rate_study(const RateStudyParams& p, const VorticitySpec& f,
                      const QuadratureSpec& q);

struct StaticRow {
    double eps = 0.0;
    double err_window = 0.0;   // fluid part of the common window
    double err_interior = 0.0; // zero-extension contribution inside inclusions
    double err_tail = 0.0;     // dipole bound outside the window
    double err_total = 0.0;
    double mfs_residual = 0.0;
    bool mfs_converged = true;
};

struct StaticReport {
    std::vector<StaticRow> rows;
    Rect window{};
    bool decreasing = false; // err_total strictly decreasing in the sweep order
    Verdict verdict = Verdict::inconclusive;
};

struct StaticStudyParams {
    ObstacleShape shape = ObstacleShape::disk();
    double alpha = 1.0;
    double mu = 0.0;
    std::vector<double> eps_list; // strictly decreasing
    MfsParams mfs;
    double window_pad = 1.0;  // margin added around the blocks and the source
    double window_cell = 0.0; // 0: auto (longest window edge / 28)
    int window_order = 4;
    int theta_order = 6;
    int radial_order = 4;
};

// Distance between the exterior flow and the unobstructed one, measured over
// a window shared by the whole sweep (plus interior and far-field parts).
StaticReport static_convergence(const StaticStudyParams& p, const VorticitySpec& f,
                                const QuadratureSpec& q);

struct DynamicRow {
    double eps = 0.0;
    std::array<double, 3> err{};     // at t = 0, T/2, T
    bool penetration = false;
    long cfl_violations = 0;
    std::size_t particles = 0;
};

struct DynamicReport {
    std::array<double, 3> times{};
    std::vector<DynamicRow> rows;
    std::array<bool, 3> decreasing{}; // strict decrease across the sweep, per time
    Verdict verdict = Verdict::inconclusive; // gated on the final time
    std::string note;
};

struct DynamicStudyParams {
    ObstacleShape shape = ObstacleShape::disk();
    double alpha = 1.0;
    double mu = 0.0;
    std::vector<double> eps_list; // strictly decreasing
    double t_end = 0.5;
    Rect window{-0.5, -0.5, 1.5, 1.5};
    TransportParams transport;
    CutoffProfile profile = CutoffProfile::quintic;
    double window_cell = 0.0; // 0: auto (longest window edge / 24)
    int window_order = 4;
    int theta_order = 6;
    int radial_order = 4;
};

// Evolve the same initial vorticity with the lattice corrector backend and
// with the plain plane backend; report the windowed L2 velocity gap at
// t = 0, T/2, T for each eps (the lattice field is extended by zero inside
// the inclusions).
DynamicReport dynamic_convergence(const DynamicStudyParams& p, const VorticitySpec& omega0);

struct LerayReport {
    double lhs = 0.0;        // || u - v || over the fluid region (with tail bound)
    double lhs_window = 0.0; // windowed part of the same
    double lhs_tail = 0.0;
    double rhs = 0.0;        // || defect || over the fluid region
    double ratio = 0.0;
    double bound = 1.02;
    double mfs_residual = 0.0;
    bool mfs_converged = true;
    bool pass = false;
};

// Orthogonality check: the solved exterior flow must sit at least as close to
// the unobstructed field as the corrector does, up to quadrature slack.
LerayReport leray_check(const PerforatedDomain& dom, const ObstacleMap& map,
                        const SourceQuadrature& src, const MfsParams& mfs,
                        int x_theta = 6, int x_radial = 6, double bound = 1.02);

} // namespace sieve
