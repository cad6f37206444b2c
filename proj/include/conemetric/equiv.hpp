#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "conemetric/cone.hpp"
#include "conemetric/norm.hpp"
#include "conemetric/rng.hpp"
#include "conemetric/space.hpp"
#include "conemetric/types.hpp"

namespace cmk {

/// The optimization inf{ ||u|| : u - v in P } defining the equivalent
/// metric; v must lie in P, so u = v is feasible and the optimum is at
/// most ||v||.
struct MinNormProblem {
    Vec v;
    Cone cone;
    Norm norm;
};

enum class SolvePath { ClosedForm, MonotoneNorm, Subgradient };

inline const char* solve_path_name(SolvePath p) {
    switch (p) {
        case SolvePath::ClosedForm: return "closed-form";
        case SolvePath::MonotoneNorm: return "closed-form";
        case SolvePath::Subgradient: return "subgradient";
    }
    return "?";
}

/// Norm/cone pairs known (not sampled) to be monotone: every shipped
/// norm is absolute, hence monotone on the orthant; the Euclidean norm
/// is monotone on any self-dual cone, in particular Lorentz.
inline bool norm_certified_monotone(const Cone& cone, const Norm& norm) {
    if (cone.kind() == ConeKind::Orthant) return true;
    if (cone.kind() == ConeKind::Lorentz && norm.kind() == NormKind::Euclidean) return true;
    return false;
}

inline int cmk_thread_count() {
    if (const char* env = std::getenv("CMK_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

/// min ||u|| over u in v + P. Dispatch: Euclidean norm uses the exact
/// projection identity d = ||v + proj_P(-v)||; a certified monotone norm
/// attains the infimum at u = v; otherwise projected subgradient descent
/// from several seeded starts. The result never exceeds ||v||.
inline double equivalent_distance(const MinNormProblem& prob, const SolverConfig& cfg = {},
                                  SolvePath* path_used = nullptr) {
    require(prob.v.size() == prob.cone.dim(), "equivalent_distance: dimension mismatch");
    if (!prob.cone.contains(prob.v, std::max(cfg.tol, 1e-7)))
        throw InputError("equivalent_distance: v is not in the cone");
    const double nv = prob.norm(prob.v);
    if (nv == 0.0) {
        if (path_used) *path_used = SolvePath::ClosedForm;
        return 0.0;
    }
    if (prob.norm.kind() == NormKind::Euclidean) {
        if (path_used) *path_used = SolvePath::ClosedForm;
        const Vec w = prob.cone.project(-prob.v, cfg);
        return std::min((prob.v + w).norm(), nv);
    }
    if (norm_certified_monotone(prob.cone, prob.norm)) {
        if (path_used) *path_used = SolvePath::MonotoneNorm;
        return nv;
    }
    if (path_used) *path_used = SolvePath::Subgradient;
    double best = nv;
    const int iters = std::min(cfg.max_iter, 500);
    SplitRng rng(0x5eedULL ^ prob.v.size());
    for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
        Vec w;
        if (r == 0) w = Vec::Zero(prob.cone.dim());
        else if (r == 1) w = prob.cone.project(-prob.v, cfg);
        else w = nv * rng.uniform() * prob.cone.sample(rng);
        for (int k = 0; k < iters; ++k) {
            const Vec u = prob.v + w;
            best = std::min(best, prob.norm(u));
            const Vec g = prob.norm.subgradient(u);
            const double step = 0.5 * nv / std::sqrt(k + 1.0);
            const Vec next = prob.cone.project(w - step * g, cfg);
            if ((next - w).lpNorm<Eigen::Infinity>() < cfg.tol) {
                w = next;
                break;
            }
            w = next;
        }
        best = std::min(best, prob.norm(prob.v + w));
    }
    return best;
}

namespace detail {

/// Cheap membership used only by the brute-force oracle so the oracle
/// never shares code with the projection-based solver path.
inline bool oracle_member(const Cone& cone, const Vec& w, double tol) {
    switch (cone.kind()) {
        case ConeKind::Orthant: return (w.array() >= -tol).all();
        case ConeKind::Lorentz:
            return w.head(cone.dim() - 1).norm() <= w[cone.dim() - 1] + tol;
        case ConeKind::Generators:
        case ConeKind::Halfspaces:
            return ((cone.halfspace_form() * w).array() >= -tol).all();
    }
    return false;
}

}  // namespace detail

/// Independent grid oracle for the infimum (cone dimension <= 3).
/// Enumerates u over (v + P) intersected with {||u||_inf <= 2||v||_inf + 1},
/// refining the grid around the incumbent until the spacing reaches
/// cfg.grid_resolution. Refinement is sound here: the objective is a norm,
/// so sublevel sets are bounded and the incumbent is always kept.
/// Accuracy: within O(Lipschitz(norm) * grid_resolution * sqrt(n)).
inline double brute_force_distance(const MinNormProblem& prob, const SolverConfig& cfg = {}) {
    const int n = prob.cone.dim();
    require(n >= 1 && n <= 3, "brute_force_distance supports cone dimension <= 3 only");
    require(prob.v.size() == n, "brute_force_distance: dimension mismatch");
    const double vinf = prob.v.lpNorm<Eigen::Infinity>();
    if (prob.norm(prob.v) == 0.0) return 0.0;
    const double box = 2.0 * vinf + 1.0;

    const int N = 33;
    const double accept_tol = cfg.grid_resolution;
    Vec center = Vec::Zero(n);
    double radius = box;
    Vec best_u = prob.v;  // always feasible
    double best = prob.norm(prob.v);
    while (true) {
        const double h = 2.0 * radius / (N - 1);
        // Loose feasibility guides refinement only; the returned value
        // comes exclusively from points feasible at the tight tolerance.
        const double level_tol = std::max(h, accept_tol);
        double level_best = std::numeric_limits<double>::infinity();
        Vec level_u = best_u;
        std::vector<int> ix(static_cast<size_t>(n), 0);
        while (true) {
            Vec u(n);
            for (int d = 0; d < n; ++d)
                u[d] = center[d] - radius + h * ix[static_cast<size_t>(d)];
            if (u.lpNorm<Eigen::Infinity>() <= box &&
                detail::oracle_member(prob.cone, u - prob.v, level_tol)) {
                const double f = prob.norm(u);
                if (f < level_best) {
                    level_best = f;
                    level_u = u;
                }
                if (f < best && detail::oracle_member(prob.cone, u - prob.v, accept_tol)) {
                    best = f;
                    best_u = u;
                }
            }
            int d = 0;
            while (d < n && ++ix[static_cast<size_t>(d)] == N) {
                ix[static_cast<size_t>(d)] = 0;
                ++d;
            }
            if (d == n) break;
        }
        if (h <= cfg.grid_resolution) break;
        center = level_u;
        radius = std::max(4.0 * h, cfg.grid_resolution * (N - 1) * 0.5);
        radius = std::min(radius, box);
    }
    return best;
}

/// d[i][j] = equivalent_distance on D[i][j]. Entries are computed
/// concurrently (CMK_THREADS caps the pool); the output is deterministic.
/// The resulting table must be a real metric: symmetry and zero diagonal
/// are structural, and a triangle violation beyond 1e-8 is treated as a
/// solver bug and raised.
inline Mat equivalent_metric_table(const FiniteConeMetricSpace& space,
                                   const SolverConfig& cfg = {},
                                   SolvePath* path_used = nullptr) {
    const int n = space.size();
    Mat d = Mat::Zero(n, n);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    SolvePath worst_path = SolvePath::ClosedForm;
    const int nthreads = std::max(1, std::min<int>(cmk_thread_count(),
                                                   static_cast<int>(pairs.size())));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(nthreads));
    std::vector<SolvePath> paths(pairs.size(), SolvePath::ClosedForm);
    auto work = [&](int t) {
        try {
            for (size_t p = static_cast<size_t>(t); p < pairs.size();
                 p += static_cast<size_t>(nthreads)) {
                const auto [i, j] = pairs[p];
                try {
                    MinNormProblem prob{space.D[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                        space.cone, space.norm};
                    d(i, j) = d(j, i) = equivalent_distance(prob, cfg, &paths[p]);
                } catch (const std::exception& e) {
                    throw StructuralError("equivalent metric failed at pair (" +
                                          std::to_string(i) + "," + std::to_string(j) +
                                          "): " + e.what());
                }
            }
        } catch (...) {
            errors[static_cast<size_t>(t)] = std::current_exception();
        }
    };
    if (nthreads == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < nthreads; ++t) threads.emplace_back(work, t);
        for (auto& th : threads) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (const SolvePath p : paths)
        if (static_cast<int>(p) > static_cast<int>(worst_path)) worst_path = p;
    if (path_used) *path_used = worst_path;

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (d(i, j) > d(i, k) + d(k, j) + 1e-8)
                    throw StructuralError(
                        "equivalent metric table violates the triangle inequality at (" +
                        std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                        "); this indicates a solver bug");
    return d;
}

/// ||D(i,j)|| table, used for the sandwich d <= ||D|| <= k d.
inline Mat norm_table(const FiniteConeMetricSpace& space) {
    const int n = space.size();
    Mat t = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t(i, j) = space.norm(space.D[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    return t;
}

}  // namespace cmk
