#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "conemetric/cone.hpp"
#include "conemetric/norm.hpp"
#include "conemetric/phi.hpp"
#include "conemetric/rng.hpp"
#include "conemetric/types.hpp"

namespace cmk {

/// A finite cone metric space: labeled points and a table of cone-valued
/// distances D(x, y) in P. Immutable after construction.
struct FiniteConeMetricSpace {
    std::vector<std::string> labels;
    Cone cone;
    Norm norm;
    std::vector<std::vector<Vec>> D;

    int size() const { return static_cast<int>(labels.size()); }
};

/// A self map of the point set: a table of image indices, or an affine
/// map for the continuous demo on R^k.
struct SelfMap {
    enum class Kind { Tabulated, Affine };
    Kind kind;
    std::vector<int> images;
    Mat M;
    Vec b;

    static SelfMap tabulated(std::vector<int> imgs) {
        return SelfMap{Kind::Tabulated, std::move(imgs), Mat(), Vec()};
    }
    static SelfMap affine(Mat m, Vec off) {
        require(m.rows() == m.cols() && m.rows() == off.size(),
                "affine map: inconsistent dimensions");
        return SelfMap{Kind::Affine, {}, std::move(m), std::move(off)};
    }

    int apply(int i) const { return images[static_cast<size_t>(i)]; }
};

inline void require_tabulated_on(const SelfMap& map, const FiniteConeMetricSpace& space) {
    require(map.kind == SelfMap::Kind::Tabulated, "finite-space check requires a tabulated map");
    require(static_cast<int>(map.images.size()) == space.size(),
            "map table size does not match the space");
    for (int img : map.images)
        require(img >= 0 && img < space.size(), "map image index out of range");
}

struct AxiomViolation {
    std::string axiom;  // membership | diagonal | symmetry | identity | triangle
    int i = -1, j = -1, k = -1;
    double magnitude = 0.0;
    std::string detail;
};

struct ValidationReport {
    bool valid = true;
    std::vector<AxiomViolation> violations;
    std::vector<AxiomViolation> within_tolerance;  // accepted, reported anyway
    int checked_triples = 0;
};

/// Checks the cone metric axioms on the table: membership of
/// every entry in the cone, zero diagonal, exact symmetry, nonzero
/// off-diagonal entries, and the triangle inequality in the cone order.
/// Violations are data, not errors.
inline ValidationReport validate_axioms(const FiniteConeMetricSpace& space,
                                        double tol = kDefaultTol) {
    ValidationReport rep;
    const int n = space.size();
    auto flag = [&](AxiomViolation v) {
        if (v.magnitude > tol || v.magnitude < 0) {
            rep.valid = false;
            rep.violations.push_back(std::move(v));
        } else if (v.magnitude > 0) {
            rep.within_tolerance.push_back(std::move(v));
        }
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec& dij = space.D[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (!dij.allFinite()) {
                flag({"membership", i, j, -1, -1.0, "non-finite entry"});
                continue;
            }
            if (!space.cone.contains(dij, tol))
                flag({"membership", i, j, -1, -1.0, "D(i,j) not in the cone"});
            const double asym =
                (dij - space.D[static_cast<size_t>(j)][static_cast<size_t>(i)])
                    .lpNorm<Eigen::Infinity>();
            if (asym > 0) flag({"symmetry", i, j, -1, asym, "D(i,j) != D(j,i)"});
            if (i == j) {
                const double diag = dij.lpNorm<Eigen::Infinity>();
                if (diag > 0) flag({"diagonal", i, i, -1, diag, "D(i,i) != 0"});
            } else if (dij.lpNorm<Eigen::Infinity>() <= tol) {
                flag({"identity", i, j, -1, -1.0, "D(i,j) = 0 for distinct points"});
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                ++rep.checked_triples;
                const Vec slack = space.D[static_cast<size_t>(i)][static_cast<size_t>(k)] +
                                  space.D[static_cast<size_t>(k)][static_cast<size_t>(j)] -
                                  space.D[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (!space.cone.contains(slack, tol))
                    flag({"triangle", i, j, k, -1.0, "D(i,j) > D(i,k) + D(k,j)"});
            }
    return rep;
}

struct GenSpec {
    std::uint64_t seed = 0;
    int n_points = 4;
    Cone cone = Cone::orthant(2);
    Norm norm = Norm::euclidean();
    int interior_directions = 1;
};

/// Deterministic random space: scalar metrics rho_r from random point
/// embeddings in R^3, combined as D(x,y) = sum_r rho_r(x,y) e_r with
/// e_r in P and e_1 interior. Scalar triangle inequalities lift through
/// the nonnegative cone combination, so the result always validates.
inline FiniteConeMetricSpace generate_random_space(const GenSpec& spec) {
    require(spec.n_points >= 2, "generate_random_space: n_points >= 2");
    require(spec.interior_directions >= 1, "generate_random_space: interior_directions >= 1");
    SplitRng root(spec.seed);
    const int n = spec.n_points;
    const int R = spec.interior_directions;

    std::vector<Vec> dirs;
    {
        SplitRng er = root.child(1000);
        dirs.push_back(spec.cone.sample_interior(er));
        for (int r = 1; r < R; ++r) dirs.push_back(spec.cone.sample(er));
    }
    for (const Vec& e : dirs)
        if (e.size() == 0) throw StructuralError("cone sampler failed for this configuration");

    std::vector<std::vector<Vec>> D(static_cast<size_t>(n),
                                    std::vector<Vec>(static_cast<size_t>(n),
                                                     Vec::Zero(spec.cone.dim())));
    for (int r = 0; r < R; ++r) {
        SplitRng prng = root.child(static_cast<std::uint64_t>(r));
        std::vector<Vec> pts;
        for (int i = 0; i < n; ++i) {
            Vec p(3);
            for (int tries = 0; tries < 100; ++tries) {
                for (int c = 0; c < 3; ++c) p[c] = prng.uniform();
                bool ok = true;
                for (const Vec& q : pts)
                    if ((p - q).norm() < 1e-3) ok = false;
                if (ok) break;
            }
            pts.push_back(p);
        }
        const double w = prng.uniform(0.5, 1.5);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double rho =
                    w * (pts[static_cast<size_t>(i)] - pts[static_cast<size_t>(j)]).norm();
                D[static_cast<size_t>(i)][static_cast<size_t>(j)] += rho * dirs[static_cast<size_t>(r)];
            }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            D[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                D[static_cast<size_t>(j)][static_cast<size_t>(i)];

    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return FiniteConeMetricSpace{std::move(labels), spec.cone, spec.norm, std::move(D)};
}

/// D* = phi(D). Scalar phi is accepted on 1-dimensional cones only.
/// The transformed table is re-validated; a broken axiom is an error
/// carrying the witness.
inline FiniteConeMetricSpace transform_metric(const FiniteConeMetricSpace& space,
                                              const PhiSpec& phi) {
    if (phi.kind() == PhiSpec::Kind::Scalar1D)
        require(space.cone.dim() == 1, "scalar phi accepts 1-dimensional cones only");
    FiniteConeMetricSpace out = space;
    const int n = space.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.D[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                phi.apply(space.D[static_cast<size_t>(i)][static_cast<size_t>(j)], space.norm);
    const ValidationReport rep = validate_axioms(out);
    if (!rep.valid) {
        const AxiomViolation& v = rep.violations.front();
        std::ostringstream oss;
        oss << v.axiom << " at (" << v.i << "," << v.j;
        if (v.k >= 0) oss << "," << v.k;
        oss << "): " << v.detail;
        throw TransformError("transform broke the cone metric axioms", oss.str());
    }
    return out;
}

}  // namespace cmk
