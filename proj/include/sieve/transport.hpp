#pragma once

#include "sieve/corrector.hpp"
#include "sieve/mfs.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace sieve {

enum class VelocityBackend { plane, corrector, mfs };

VelocityBackend backend_from_string(const std::string& s);
std::string backend_name(VelocityBackend b);

struct TransportParams {
    double h = 0.02;
    double dt = 0.005;
    double t_end = 0.5;
    double blob_factor = 2.0; // delta = blob_factor * h
    VelocityBackend backend = VelocityBackend::corrector;
    int traj_stride = 5;
    long tree_threshold = 4000; // particle count above which the multipole tree runs
    double cfl = 0.8;
    MfsParams mfs;
};

struct VortexDiagnostics {
    double t = 0.0;
    double l1 = 0.0, l2 = 0.0, linf = 0.0, mass = 0.0;
    std::vector<double> circulations; // per inclusion, backend-velocity contour
    double max_abs_circulation = 0.0;
    double min_boundary_dist = 0.0;
    double bounding_radius = 0.0;
    double max_speed = 0.0;
    bool penetration = false;
};

// exponential integral E1(x), x > 0
double expint_e1(double x);

// Vortex-blob discretization of the transport system: particles carry fixed
// vorticity values and weights (so every discrete L^p norm and the total mass
// are conserved by construction); positions move by RK4 under the selected
// velocity backend with Gaussian-blob regularization.
class VortexSystem {
public:
    VortexSystem(const PerforatedDomain* dom, const ObstacleMap* map,
                 const VorticitySpec& omega0, const TransportParams& params,
                 CutoffProfile profile = CutoffProfile::quintic);

    const std::vector<Vec2>& positions() const { return pos_; }
    const std::vector<double>& values() const { return val_; }
    const std::vector<double>& weights() const { return wgt_; }
    std::size_t size() const { return pos_.size(); }
    double time() const { return t_; }
    double delta() const { return delta_; }
    double initial_mass() const { return mass0_; }
    const TransportParams& params() const { return params_; }
    const PerforatedDomain* domain() const { return dom_; }

    // backend velocity field induced by the current particle state
    Vec2 velocity(Vec2 x) const;
    std::vector<Vec2> velocities_at_particles() const;

    void step(double dt);
    void run_to(double t_end); // steps of params.dt (last step shortened)

    bool penetration_flag() const { return penetration_; }
    long cfl_violations() const { return cfl_violations_; }

    VortexDiagnostics diagnostics(int contour_samples = 360) const;

private:
    const PerforatedDomain* dom_;
    const ObstacleMap* map_;
    TransportParams params_;
    std::optional<CutoffFamily> cut_; // present when dom_ != nullptr
    std::vector<Vec2> pos_;
    std::vector<double> val_, wgt_, gam_;
    Vec2 seed_center_{};
    double delta_ = 0.0;
    double t_ = 0.0;
    double mass0_ = 0.0;
    bool penetration_ = false;
    long cfl_violations_ = 0;

    struct Stage; // per-stage evaluation context (field of a frozen position set)
    std::shared_ptr<const Stage> make_stage(const std::vector<Vec2>& particle_pos) const;
    const Stage& stage_cached() const;
    mutable std::shared_ptr<const Stage> cache_;
    mutable std::shared_ptr<std::mutex> cache_mu_;
    std::vector<Vec2> eval_field(const Stage& st, const std::vector<Vec2>& at) const;
    Vec2 eval_one(const Stage& st, Vec2 x) const;
};

} // namespace sieve
