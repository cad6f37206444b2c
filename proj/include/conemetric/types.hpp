#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

namespace cmk {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr int kDefaultMaxIter = 10000;

/// Thrown on malformed inputs (dimension mismatches, out-of-range
/// coefficients, bad files).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an object violates a structural requirement
/// (non-solid cone, degenerate generator matrix, failed sampler).
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an iterative solver exhausts its budget before
/// reaching tolerance. Carries the best iterate seen.
struct ConvergenceError : std::runtime_error {
    Vec best;
    double residual;
    ConvergenceError(const std::string& what, Vec best_iterate, double res)
        : std::runtime_error(what), best(std::move(best_iterate)), residual(res) {}
};

/// Thrown when a metric transform breaks the cone metric axioms.
struct TransformError : std::runtime_error {
    std::string witness;
    TransformError(const std::string& what, std::string w)
        : std::runtime_error(what), witness(std::move(w)) {}
};

/// Shared knobs for iterative solvers and the brute-force oracle.
struct SolverConfig {
    double tol = 1e-9;
    int max_iter = 10000;
    double grid_resolution = 1e-3;  // oracle only
    int restarts = 8;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InputError(msg);
}

}  // namespace cmk
