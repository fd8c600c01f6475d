#pragma once

#include "sieve/biotsavart.hpp"
#include "sieve/geometry.hpp"
#include "sieve/quadrature.hpp"

#include <functional>
#include <vector>

namespace sieve {

struct MfsParams {
    int m = 80;              // sources per inclusion; collocation = 2m
    double rho = 0.5;        // inward copy factor for source placement
    double tol_bc = 1e-8;    // boundary stream-function misfit target
    double svd_cutoff = 1e-12;
    long max_unknowns = 40000;
};

// Stream-function correction: log sources inside each inclusion plus one
// additive constant per boundary, least-squares matched so that the total
// stream is constant on every inclusion boundary with zero net source
// strength per inclusion (zero circulations, decay at infinity).
struct MfsSolution {
    std::vector<Vec2> sources;
    std::vector<double> strength;
    std::vector<double> boundary_constants; // one per inclusion
    int m = 0;
    int n_inclusions = 0;
    double residual_max = 0.0; // stream misfit at off-collocation audit points
    double residual_rms = 0.0;
    double circulation_max = 0.0; // |sum of strengths| per inclusion, post-projection
    double projection_shift = 0.0; // largest mean removed by the projection
    double cond_estimate = 0.0;
    long rank = 0;
    bool converged = false;
};

// Velocity / stream of the source correction alone (add the particular field
// of the data to get the full solution).
Vec2 mfs_correction_velocity(const MfsSolution& sol, Vec2 x);
double mfs_correction_stream(const MfsSolution& sol, Vec2 x);

// Solve with an arbitrary particular stream (psi with Delta psi = data).
MfsSolution solve_stream_problem(const PerforatedDomain& dom, const MfsParams& params,
                                 const std::function<double(Vec2)>& psi_particular);

// Exterior velocity of the masked field: u = K[f 1_Omega] + correction.
MfsSolution solve_exterior(const PerforatedDomain& dom, const SourceQuadrature& src,
                           const MfsParams& params);

inline Vec2 mfs_velocity(const MfsSolution& sol, const SourceQuadrature& src, Vec2 x) {
    return velocity_plane(src, x) + mfs_correction_velocity(sol, x);
}

} // namespace sieve
