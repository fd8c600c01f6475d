#pragma once

#include "sieve/biotsavart.hpp"
#include "sieve/conformal.hpp"
#include "sieve/quadrature.hpp"

#include <string>

namespace sieve {

enum class CutoffProfile { quintic, cubic, cosine };

CutoffProfile cutoff_profile_from_string(const std::string& s);
std::string cutoff_profile_name(CutoffProfile p);

struct CutoffValue {
    double phi = 0.0;
    Vec2 grad{};
    Vec2 grad_perp{};
};

// Family of cutoffs phi^eps_{ij}(x) = prof((|x - z_ij|_inf - eps) / eps^alpha):
// identically 1 on the inf-ball of radius eps + eps^alpha/2, identically 0
// outside radius eps + eps^alpha (the lattice tile boundary), C^1 in between.
// Supports are pairwise disjoint, so at most one cutoff is active at any x.
class CutoffFamily {
public:
    CutoffFamily(const PerforatedDomain* dom, CutoffProfile profile = CutoffProfile::quintic);

    CutoffValue eval(Vec2 x, int i, int j) const;
    // the unique tile whose cutoff can be nonzero at x (i = j = 0 if none)
    CutoffValue eval_active(Vec2 x, int* i_out = nullptr, int* j_out = nullptr) const;

    double profile_value(double s) const;
    double profile_derivative(double s) const;
    // sup_s |prof'(s)|: 3.75 quintic, 3 cubic, pi cosine
    double profile_sup_derivative() const;
    // sup |grad phi| = sup|prof'| / eps^alpha
    double grad_bound() const;
    // exact per-inclusion measure of supp grad phi: 4 eps^{alpha+1} + 3 eps^{2 alpha}
    double support_measure() const;

    const PerforatedDomain* domain() const { return dom_; }
    CutoffProfile profile() const { return profile_; }

private:
    const PerforatedDomain* dom_;
    CutoffProfile profile_;
};

struct ErrorTerms {
    Vec2 w1{}, w2{}, w3{}, w4{};
    Vec2 sum() const { return w1 + w2 + w3 + w4; }
};

// The corrected velocity field
//   v(x) = (1 - phi) K[f 1_Omega](x) + phi u_obst(x) + grad_perp(phi) D(x)
// where u_obst is the single-obstacle exterior field of the active inclusion
// and D is the stream-function transition potential. The pointwise defect
// K[f 1_Omega] - v splits into the four error terms, each supported in the
// active cutoff's tile.
class CorrectorField {
public:
    CorrectorField(const PerforatedDomain* dom, const ObstacleMap* map,
                   const SourceQuadrature* src, const CutoffFamily* cut);

    Vec2 velocity(Vec2 x) const;
    Vec2 plane_velocity(Vec2 x) const; // K[f 1_Omega]
    Vec2 obstacle_velocity(Vec2 x, int i, int j) const;
    double transition_potential(Vec2 x, int i, int j) const;
    ErrorTerms error_terms(Vec2 x) const;

    LocalMap local_map(int i, int j) const;
    const PerforatedDomain* domain() const { return dom_; }
    const SourceQuadrature* source() const { return src_; }
    const CutoffFamily* cutoff() const { return cut_; }

private:
    const PerforatedDomain* dom_;
    const ObstacleMap* map_;
    const SourceQuadrature* src_;
    const CutoffFamily* cut_;
    double dcut_; // series switch radius for the removable singularities
};

// L2 norms of the error terms. The defect vanishes outside the cutoff tiles,
// so the whole-plane norm is the strip contribution plus the plane field's
// energy inside the inclusions. Every value carries a two-level refinement
// error estimate; flagged when the levels disagree by more than 10% of the
// total.
struct CorrectorReport {
    double w1 = 0, w2 = 0, w3 = 0, w4 = 0; // L2 over the strip tiles
    double w_strip = 0;                    // L2 of the summed defect there
    double w_inclusions = 0;               // L2 of K[f 1_Omega] inside inclusions
    double w_total = 0;
    double err_rel = 0;
    bool flagged = false;
    long x_nodes = 0;
    long y_nodes = 0;
};

CorrectorReport corrector_report(const PerforatedDomain& dom, const ObstacleMap& map,
                                 const VorticitySpec& f, const QuadratureSpec& qspec,
                                 CutoffProfile profile = CutoffProfile::quintic,
                                 int x_theta = 6, int x_radial = 6);

} // namespace sieve
