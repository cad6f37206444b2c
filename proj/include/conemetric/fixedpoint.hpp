#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "conemetric/contraction.hpp"
#include "conemetric/equiv.hpp"
#include "conemetric/space.hpp"
#include "conemetric/types.hpp"

namespace cmk {

/// Picard iteration record with the standard Banach error certificates:
/// a priori alpha^n/(1-alpha) d(x0,x1) and a posteriori
/// alpha/(1-alpha) d(x_{n-1},x_n).
struct IterationTrace {
    std::vector<int> index_iterates;  // finite spaces
    std::vector<Vec> vec_iterates;    // affine demo
    std::vector<double> step_d;
    double apriori_bound = 0.0;
    double aposteriori_bound = 0.0;
    bool converged = false;
    int iterations = 0;
};

namespace detail {

inline double banach_threshold(double alpha, double tol) {
    return alpha > 0 ? tol * (1.0 - alpha) / alpha : std::numeric_limits<double>::infinity();
}

inline void finish_bounds(IterationTrace& tr, double alpha) {
    const int n = tr.iterations;
    if (tr.step_d.empty() || alpha >= 1.0) return;
    tr.apriori_bound = std::pow(alpha, n) / (1.0 - alpha) * tr.step_d.front();
    tr.aposteriori_bound = alpha / (1.0 - alpha) * tr.step_d.back();
}

}  // namespace detail

/// Picard iteration on a finite space with the equivalent-metric table
/// as the distance evaluator. Stops exactly when the iterate repeats
/// (finite spaces reach their fixed point in finitely many steps under a
/// certificate) or when the a posteriori test guarantees distance <= tol.
inline IterationTrace picard_iterate(const SelfMap& map, int x0, const Mat& d, double alpha,
                                     double tol = 1e-8, int max_iter = kDefaultMaxIter) {
    require(alpha >= 0 && alpha < 1, "picard_iterate: alpha in [0,1) required");
    require(x0 >= 0 && x0 < d.rows(), "picard_iterate: start index out of range");
    IterationTrace tr;
    tr.index_iterates.push_back(x0);
    const double thr = detail::banach_threshold(alpha, tol);
    int x = x0;
    for (int k = 0; k < max_iter; ++k) {
        const int nx = map.apply(x);
        tr.index_iterates.push_back(nx);
        tr.step_d.push_back(d(x, nx));
        ++tr.iterations;
        if (nx == x || d(x, nx) <= thr) {
            tr.converged = true;
            x = nx;
            break;
        }
        x = nx;
    }
    detail::finish_bounds(tr, alpha);
    return tr;
}

/// Picard iteration for the affine demo x -> Mx + b on R^k under the
/// coordinatewise cone metric on the orthant, whose equivalent metric is
/// the Euclidean distance (monotone norm equality).
inline IterationTrace picard_iterate(const SelfMap& map, const Vec& x0, double alpha,
                                     double tol = 1e-8, int max_iter = kDefaultMaxIter) {
    require(map.kind == SelfMap::Kind::Affine, "vector iteration requires an affine map");
    require(alpha >= 0 && alpha < 1, "picard_iterate: alpha in [0,1) required");
    IterationTrace tr;
    tr.vec_iterates.push_back(x0);
    const double thr = detail::banach_threshold(alpha, tol);
    Vec x = x0;
    for (int k = 0; k < max_iter; ++k) {
        const Vec nx = map.M * x + map.b;
        const double step = (nx - x).norm();
        tr.vec_iterates.push_back(nx);
        tr.step_d.push_back(step);
        ++tr.iterations;
        x = nx;
        if (step <= thr) {
            tr.converged = true;
            break;
        }
    }
    detail::finish_bounds(tr, alpha);
    return tr;
}

struct CertifyReport {
    bool has_banach = false;
    double alpha = std::numeric_limits<double>::infinity();
    double kannan = std::numeric_limits<double>::infinity();      // reporting only
    double chatterjea = std::numeric_limits<double>::infinity();  // reporting only
    std::vector<int> fixed_from_start;  // -1 where the iteration did not settle
    int fixed_point = -1;               // unique fixed point under a certificate
    bool all_starts_agree = false;
    int max_iterations = 0;
};

/// Computes the minimal Banach constant on the metric side; with a
/// certificate (< 1) iterates from every start point and reports the
/// unique fixed point. Without one, Kannan/Chatterjea minimal constants
/// are reported but no convergence is claimed.
inline CertifyReport certify_and_solve(const FiniteConeMetricSpace& space, const SelfMap& map,
                                       const SolverConfig& cfg = {}) {
    require_tabulated_on(map, space);
    const Mat d = equivalent_metric_table(space, cfg);
    CertifyReport rep;
    rep.alpha = minimal_constant_metric(d, map, ContractionKind{KindTag::Banach, {0}})[0];
    rep.has_banach = rep.alpha < 1.0;
    if (!rep.has_banach) {
        rep.kannan = minimal_constant_metric(d, map, ContractionKind{KindTag::Kannan, {0}})[0];
        rep.chatterjea =
            minimal_constant_metric(d, map, ContractionKind{KindTag::Chatterjea, {0}})[0];
    }
    const int n = space.size();
    const double alpha = rep.has_banach ? rep.alpha : 0.0;
    bool agree = true;
    for (int s = 0; s < n; ++s) {
        const IterationTrace tr = picard_iterate(map, s, d, std::min(alpha, 0.999999), 1e-12,
                                                 std::max(n + 2, 64));
        const int last = tr.index_iterates.back();
        const bool settled = tr.converged && map.apply(last) == last;
        rep.fixed_from_start.push_back(settled ? last : -1);
        rep.max_iterations = std::max(rep.max_iterations, tr.iterations);
        if (rep.fixed_point == -1 && settled) rep.fixed_point = last;
        agree = agree && settled && rep.fixed_from_start.back() == rep.fixed_point;
    }
    rep.all_starts_agree = agree;
    if (!rep.has_banach) rep.fixed_point = -1;  // uniqueness not claimed
    return rep;
}

}  // namespace cmk
