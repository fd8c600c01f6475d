#include "sieve/mfs.hpp"

#include "sieve/parallel.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace sieve {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPiInv = 0.15915494309189533577;

// Source curve for one inclusion, local coordinates. The boundary is the image
// of the unit circle under the shape's exterior map, so sources sit on the
// image of |zeta| = r < 1: a confocal inner curve. Unlike a plain scaling of
// the boundary, this curve always encloses the focal segment, where the
// analytic continuation of the exterior field is singular; without that the
// boundary residual stalls no matter how many sources are used. rho in (0, 1)
// is mapped onto the nondegenerate radius range (disks are unaffected).
Vec2 source_point(const ObstacleShape& sh, double rho, double th) {
    double sum = sh.p + sh.q;
    double diff = std::abs(sh.p - sh.q);
    double rmin = std::sqrt(diff / sum);
    double r = rmin + rho * (1.0 - rmin);
    double as = 0.5 * (sum * r + diff / r);
    double bs = 0.5 * (sum * r - diff / r);
    if (sh.p >= sh.q) return {as * std::cos(th), bs * std::sin(th)};
    return {bs * std::cos(th), as * std::sin(th)};
}
} // namespace

Vec2 mfs_correction_velocity(const MfsSolution& sol, Vec2 x) {
    Complex xc = to_complex(x);
    Complex acc = 0.0;
    for (std::size_t l = 0; l < sol.sources.size(); ++l) {
        Complex d = xc - to_complex(sol.sources[l]);
        double r2 = std::norm(d);
        if (r2 < 1e-280) continue;
        acc += sol.strength[l] * std::conj(d) / r2;
    }
    return perp_conj(acc) * kTwoPiInv;
}

double mfs_correction_stream(const MfsSolution& sol, Vec2 x) {
    double acc = 0.0;
    for (std::size_t l = 0; l < sol.sources.size(); ++l) {
        double r2 = (x - sol.sources[l]).norm2();
        if (r2 < 1e-280) continue;
        acc += sol.strength[l] * 0.5 * std::log(r2);
    }
    return acc * kTwoPiInv;
}

MfsSolution solve_stream_problem(const PerforatedDomain& dom, const MfsParams& params,
                                 const std::function<double(Vec2)>& psi_particular) {
    const int N = dom.inclusion_count();
    const int m = params.m;
    if (m < 4) throw std::invalid_argument("mfs: need at least 4 sources per inclusion");
    const long M = (long)N * m;
    if (M + N > params.max_unknowns)
        throw std::invalid_argument("mfs: unknown count exceeds the solver cap");

    MfsSolution sol;
    sol.m = m;
    sol.n_inclusions = N;
    sol.sources.reserve(M);
    const double eps = dom.eps();
    std::vector<Vec2> colloc;
    colloc.reserve(2L * m * N);
    std::vector<int> colloc_owner;
    for (int j = 1; j <= dom.n2(); ++j) {
        for (int i = 1; i <= dom.n1(); ++i) {
            Vec2 z = dom.center(i, j);
            int n = (j - 1) * dom.n1() + (i - 1);
            for (int l = 0; l < m; ++l) {
                double th = 2.0 * kPi * (l + 0.5) / m;
                sol.sources.push_back(z + source_point(dom.shape(), params.rho, th) * eps);
            }
            for (int k = 0; k < 2 * m; ++k) {
                double th = 2.0 * kPi * k / (2 * m);
                colloc.push_back(z + dom.shape().boundary_point(th) * eps);
                colloc_owner.push_back(n);
            }
        }
    }

    const long rows_c = (long)colloc.size();
    const long rows = rows_c + N;
    const long cols = M + N;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);

    std::vector<double> psi_c(colloc.size());
    parallel_for(colloc.size(), [&](std::size_t k) { psi_c[k] = psi_particular(colloc[k]); });

    parallel_for(colloc.size(), [&](std::size_t r) {
        Vec2 xc = colloc[r];
        for (long l = 0; l < M; ++l) {
            double r2 = (xc - sol.sources[l]).norm2();
            A((long)r, l) = 0.5 * std::log(std::max(r2, 1e-300)) * kTwoPiInv;
        }
        A((long)r, M + colloc_owner[r]) = -1.0;
        rhs((long)r) = -psi_c[r];
    });

    double mean_row_norm = 0.0;
    for (long r = 0; r < rows_c; ++r) mean_row_norm += A.row(r).norm();
    mean_row_norm /= std::max<long>(rows_c, 1);
    double w_circ = 1e3 * mean_row_norm;
    for (int n = 0; n < N; ++n) {
        long r = rows_c + n;
        for (int l = 0; l < m; ++l) A(r, (long)n * m + l) = w_circ;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(params.svd_cutoff);
    Eigen::VectorXd q = svd.solve(rhs);
    if (!q.allFinite())
        throw std::runtime_error("mfs: singular system, solve produced non-finite values");
    sol.rank = svd.rank();
    const auto& sv = svd.singularValues();
    double s_min = sv(std::max<long>(sol.rank - 1, 0));
    sol.cond_estimate = s_min > 0.0 ? sv(0) / s_min : 0.0;

    sol.strength.assign(M, 0.0);
    for (long l = 0; l < M; ++l) sol.strength[l] = q(l);
    sol.boundary_constants.assign(N, 0.0);
    for (int n = 0; n < N; ++n) sol.boundary_constants[n] = q(M + n);

    // project to exact zero circulation per inclusion
    for (int n = 0; n < N; ++n) {
        std::vector<double> qs(sol.strength.begin() + (long)n * m,
                               sol.strength.begin() + (long)(n + 1) * m);
        double mean = pairwise_sum(qs) / m;
        sol.projection_shift = std::max(sol.projection_shift, std::abs(mean));
        double run = 0.0;
        for (int l = 0; l < m - 1; ++l) {
            sol.strength[(long)n * m + l] -= mean;
            run += sol.strength[(long)n * m + l];
        }
        sol.strength[(long)n * m + m - 1] = -run;
        std::vector<double> chk(sol.strength.begin() + (long)n * m,
                                sol.strength.begin() + (long)(n + 1) * m);
        sol.circulation_max = std::max(sol.circulation_max, std::abs(pairwise_sum(chk)));
    }

    // residual audit at off-collocation boundary points
    std::vector<double> res(2L * m * N);
    parallel_for(res.size(), [&](std::size_t k) {
        long n = (long)k / (2 * m);
        long s = (long)k % (2 * m);
        int i = (int)(n % dom.n1()) + 1;
        int j = (int)(n / dom.n1()) + 1;
        double th = 2.0 * kPi * (s + 0.5) / (2 * m);
        Vec2 x = dom.center(i, j) + dom.shape().boundary_point(th) * eps;
        double v = psi_particular(x) + mfs_correction_stream(sol, x) -
                   sol.boundary_constants[n];
        res[k] = v;
    });
    double mx = 0.0, ssq = 0.0;
    for (double v : res) {
        mx = std::max(mx, std::abs(v));
        ssq += v * v;
    }
    sol.residual_max = mx;
    sol.residual_rms = std::sqrt(ssq / std::max<std::size_t>(res.size(), 1));
    sol.converged = sol.residual_max <= params.tol_bc;
    return sol;
}

MfsSolution solve_exterior(const PerforatedDomain& dom, const SourceQuadrature& src,
                           const MfsParams& params) {
    return solve_stream_problem(dom, params,
                                [&](Vec2 x) { return log_potential(src, x); });
}

} // namespace sieve
