#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sieve/corrector.hpp"

#include <cmath>
#include <random>

using namespace sieve;

TEST_CASE("cutoff plateau, support, and gradient structure") {
    auto dom = PerforatedDomain::build({0.1, 1.0, 0.0}, ObstacleShape::disk());
    CutoffFamily cut(&dom);
    Vec2 z = dom.center(1, 1);

    // identically 1 inside radius eps + eps^alpha/2 (inf norm)
    CHECK(cut.eval(z, 1, 1).phi == 1.0);
    CHECK(cut.eval(z + Vec2{0.149, 0.0}, 1, 1).phi == 1.0);
    CHECK(cut.eval(z + Vec2{0.149, 0.0}, 1, 1).grad.norm() == 0.0);
    // identically 0 at the tile boundary and beyond
    CHECK(cut.eval(z + Vec2{0.2, 0.0}, 1, 1).phi == 0.0);
    CHECK(cut.eval(z + Vec2{0.35, 0.0}, 1, 1).phi == 0.0);
    // strictly between on the transition ring, with inward-increasing phi
    CutoffValue mid = cut.eval(z + Vec2{0.175, 0.0}, 1, 1);
    CHECK(mid.phi > 0.0);
    CHECK(mid.phi < 1.0);
    CHECK(mid.grad.x < 0.0);
    CHECK(mid.grad.y == 0.0);
    // grad_perp is the rotation of grad
    CHECK((mid.grad_perp - mid.grad.perp()).norm() == 0.0);

    // finite-difference consistency away from the inf-norm edges
    Vec2 x = z + Vec2{0.16, 0.07};
    double s = 1e-7;
    CutoffValue v = cut.eval(x, 1, 1);
    double fx = (cut.eval(x + Vec2{s, 0}, 1, 1).phi - cut.eval(x - Vec2{s, 0}, 1, 1).phi) / (2 * s);
    double fy = (cut.eval(x + Vec2{0, s}, 1, 1).phi - cut.eval(x - Vec2{0, s}, 1, 1).phi) / (2 * s);
    CHECK(v.grad.x == doctest::Approx(fx).epsilon(1e-5));
    CHECK(v.grad.y == doctest::Approx(fy).epsilon(1e-5));

    CHECK(cut.grad_bound() == doctest::Approx(3.75 / 0.1).epsilon(1e-12));
}

TEST_CASE("cutoff supports are disjoint and eval_active finds the tile") {
    auto dom = PerforatedDomain::build({0.06, 1.2, 1.0}, ObstacleShape::disk());
    CutoffFamily cut(&dom);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-0.2, 1.2);
    for (int k = 0; k < 400; ++k) {
        Vec2 x{ux(rng), ux(rng)};
        int i = 0, j = 0;
        CutoffValue a = cut.eval_active(x, &i, &j);
        if (a.phi != 0.0 || a.grad.norm() != 0.0) {
            CHECK(i >= 1);
            CHECK(j >= 1);
            CutoffValue b = cut.eval(x, i, j);
            CHECK(a.phi == b.phi);
            // no other tile is active at x
            for (int ii = 1; ii <= dom.n1(); ++ii)
                for (int jj = 1; jj <= dom.n2(); ++jj)
                    if (ii != i || jj != j) {
                        CutoffValue o = cut.eval(x, ii, jj);
                        CHECK(o.phi == 0.0);
                        CHECK(o.grad.norm() == 0.0);
                    }
        }
    }
}

TEST_CASE("support measure of the cutoff gradient is exact") {
    auto d1 = PerforatedDomain::build({0.1, 1.0, 0.0}, ObstacleShape::disk());
    CHECK(CutoffFamily(&d1).support_measure() == doctest::Approx(0.07).epsilon(1e-12));
    auto d2 = PerforatedDomain::build({0.05, 2.0, 0.0}, ObstacleShape::disk());
    CHECK(CutoffFamily(&d2).support_measure() ==
          doctest::Approx(5.1875e-4).epsilon(1e-12));
}

TEST_CASE("cutoff profiles hit their derivative bounds") {
    auto dom = PerforatedDomain::build({0.1, 1.0, 0.0}, ObstacleShape::disk());
    CHECK(CutoffFamily(&dom, CutoffProfile::quintic).profile_sup_derivative() ==
          doctest::Approx(1.875 * 2.0).epsilon(1e-12));
    CHECK(CutoffFamily(&dom, CutoffProfile::cubic).profile_sup_derivative() ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(CutoffFamily(&dom, CutoffProfile::cosine).profile_sup_derivative() ==
          doctest::Approx(3.14159265358979323846).epsilon(1e-12));
    for (CutoffProfile p :
         {CutoffProfile::quintic, CutoffProfile::cubic, CutoffProfile::cosine}) {
        CutoffFamily c(&dom, p);
        CHECK(c.profile_value(0.0) == 1.0);
        CHECK(c.profile_value(0.49) == 1.0); // plateau runs to s = 1/2
        CHECK(c.profile_value(1.0) == 0.0);
        CHECK(c.profile_value(0.75) > 0.0);
        CHECK(c.profile_value(0.75) < 1.0);
        CHECK(cutoff_profile_from_string(cutoff_profile_name(p)) == p);
    }
}

TEST_CASE("corrected field equals the plane field off the cutoff supports") {
    auto dom = PerforatedDomain::build({0.1, 1.0, 0.0}, ObstacleShape::disk());
    ObstacleMap map(ObstacleShape::disk());
    VorticitySpec f = VorticitySpec::radial_bump({0.5, 0.9}, 0.4, 5.0);
    SourceQuadrature src(f, &dom);
    CutoffFamily cut(&dom);
    CorrectorField v(&dom, &map, &src, &cut);

    for (Vec2 x : {Vec2{0.5, 0.6}, Vec2{0.3, 0.35}, Vec2{1.5, 0.1}, Vec2{0.5, 2.0}}) {
        CHECK(cut.eval_active(x).phi == 0.0);
        Vec2 a = v.velocity(x);
        Vec2 b = v.plane_velocity(x);
        CHECK((a - b).norm() <= 1e-14 * (1.0 + b.norm()));
        ErrorTerms e = v.error_terms(x);
        CHECK(e.sum().norm() == 0.0);
    }
}

TEST_CASE("error terms reassemble the defect exactly") {
    // identity K - v = w1 + w2 + w3 + w4 holds pointwise, ellipse obstacles
    auto dom = PerforatedDomain::build({0.1, 1.0, 0.0}, ObstacleShape::ellipse(1.0, 0.5));
    ObstacleMap map(ObstacleShape::ellipse(1.0, 0.5));
    VorticitySpec f = VorticitySpec::radial_bump({0.5, 0.9}, 0.4, 5.0);
    SourceQuadrature src(f, &dom);
    CutoffFamily cut(&dom);
    CorrectorField v(&dom, &map, &src, &cut);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, 0.3);
    int tested = 0;
    for (int k = 0; tested < 40 && k < 4000; ++k) {
        Vec2 x{ux(rng), uy(rng)};
        if (dom.in_inclusion(x)) continue;
        if (cut.eval_active(x).phi == 0.0) continue; // defect is trivial there
        ++tested;
        Vec2 defect = v.plane_velocity(x) - v.velocity(x);
        Vec2 sum = v.error_terms(x).sum();
        double scale = std::max(1e-3, v.plane_velocity(x).norm());
        CHECK((defect - sum).norm() <= 1e-8 * scale);
    }
    CHECK(tested == 40);
}

TEST_CASE("disk obstacles kill the map error terms") {
    // for the disk, T = id: the log-ratio and curvature sources vanish
    auto dom = PerforatedDomain::build({0.1, 1.0, 0.0}, ObstacleShape::disk());
    ObstacleMap map(ObstacleShape::disk());
    VorticitySpec f = VorticitySpec::radial_bump({0.5, 0.9}, 0.4, 5.0);
    SourceQuadrature src(f, &dom);
    CutoffFamily cut(&dom);
    CorrectorField v(&dom, &map, &src, &cut);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, 0.3);
    double speed = f.total_mass(); // crude velocity scale, O(0.1..1)
    int tested = 0;
    for (int k = 0; tested < 25 && k < 4000; ++k) {
        Vec2 x{ux(rng), uy(rng)};
        if (dom.in_inclusion(x) || cut.eval_active(x).phi == 0.0) continue;
        ++tested;
        ErrorTerms e = v.error_terms(x);
        CHECK(e.w1.norm() <= 1e-9 * speed);
        CHECK(e.w3.norm() <= 1e-9 * speed);
    }
    CHECK(tested == 25);
}

TEST_CASE("transition potential is continuous across the series switch") {
    auto dom = PerforatedDomain::build({0.1, 1.0, 0.0}, ObstacleShape::ellipse(1.0, 0.5));
    ObstacleMap map(ObstacleShape::ellipse(1.0, 0.5));
    VorticitySpec f = VorticitySpec::radial_bump({0.5, 0.9}, 0.4, 5.0);
    SourceQuadrature src(f, &dom);
    CutoffFamily cut(&dom);
    CorrectorField v(&dom, &map, &src, &cut);

    // D is smooth in x; sample a short segment inside the transition ring of
    // tile (2,1) and check successive differences shrink smoothly
    Vec2 z = dom.center(2, 1);
    double d0 = v.transition_potential(z + Vec2{0.17, 0.03}, 2, 1);
    double d1 = v.transition_potential(z + Vec2{0.17, 0.031}, 2, 1);
    double d2 = v.transition_potential(z + Vec2{0.17, 0.032}, 2, 1);
    CHECK(std::isfinite(d0));
    CHECK(std::fabs(d1 - d0) <= 0.02 * std::max(1.0, std::fabs(d0)));
    // second difference is tiny for a smooth function at step 1e-3
    CHECK(std::fabs(d2 - 2 * d1 + d0) <= 5e-4 * std::max(1.0, std::fabs(d0)));
}

TEST_CASE("strip norms of the error terms shrink with eps") {
    ObstacleShape sh = ObstacleShape::disk();
    ObstacleMap map(sh);
    VorticitySpec f = VorticitySpec::radial_bump({0.5, 0.8}, 0.4, 5.0);

    QuadratureSpec q;
    q.order = 10;
    q.strip_theta = 3;
    q.strip_radial = 4;
    q.far_order = 5;

    auto d1 = PerforatedDomain::build({0.1, 1.0, 0.0}, sh);
    auto d2 = PerforatedDomain::build({0.05, 1.0, 0.0}, sh);
    CorrectorReport r1 = corrector_report(d1, map, f, q, CutoffProfile::quintic, 5, 5);
    CorrectorReport r2 = corrector_report(d2, map, f, q, CutoffProfile::quintic, 5, 5);

    CHECK(!r1.flagged);
    CHECK(!r2.flagged);
    CHECK(r1.w_total > 0.0);
    CHECK(r2.w_total < r1.w_total);
    // disk: w1 and w3 are pure roundoff next to the surviving terms
    CHECK(r1.w1 <= 1e-9 * r1.w_total);
    CHECK(r1.w3 <= 1e-9 * r1.w_total);
    // the whole-plane split is consistent
    CHECK(r1.w_total ==
          doctest::Approx(std::hypot(r1.w_strip, r1.w_inclusions)).epsilon(1e-12));
    CHECK(r1.x_nodes > 0);
    CHECK(r1.y_nodes > 0);
}
