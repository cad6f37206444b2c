#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "conemetric/cone.hpp"
#include "conemetric/norm.hpp"
#include "conemetric/rng.hpp"
#include "conemetric/types.hpp"

namespace cmk {

/// Scalar function library shared by the Scalar1D and Radial variants:
///   saturate: x / (1 + x)
///   scale:    p * x
///   cap:      min(x, p)
inline double scalar_phi(const std::string& name, double param, double x) {
    if (name == "saturate") return x / (1.0 + x);
    if (name == "scale") return param * x;
    if (name == "cap") return std::min(x, param);
    throw InputError("unknown scalar phi: " + name);
}

/// A self map of the cone: Linear(M) with M P subset of P, a named scalar
/// function on the 1-dimensional cone, or the radial lift
/// phi(x) = g(||x||) x / ||x||.
class PhiSpec {
public:
    enum class Kind { Linear, Scalar1D, Radial };

    static PhiSpec linear(Mat M) {
        require(M.rows() == M.cols() && M.rows() >= 1, "linear phi: square matrix required");
        PhiSpec p;
        p.kind_ = Kind::Linear;
        p.M_ = std::move(M);
        return p;
    }

    static PhiSpec scalar1d(std::string name, double param = 0.0) {
        scalar_phi(name, param, 1.0);  // validates the name
        PhiSpec p;
        p.kind_ = Kind::Scalar1D;
        p.name_ = std::move(name);
        p.param_ = param;
        return p;
    }

    static PhiSpec radial(std::string g_name, double param = 0.0) {
        scalar_phi(g_name, param, 1.0);
        PhiSpec p;
        p.kind_ = Kind::Radial;
        p.name_ = std::move(g_name);
        p.param_ = param;
        return p;
    }

    Kind kind() const { return kind_; }
    const Mat& matrix() const { return M_; }
    const std::string& scalar_name() const { return name_; }
    double param() const { return param_; }

    Vec apply(const Vec& x, const Norm& norm) const {
        switch (kind_) {
            case Kind::Linear:
                require(x.size() == M_.cols(), "linear phi: dimension mismatch");
                return M_ * x;
            case Kind::Scalar1D: {
                require(x.size() == 1, "scalar phi accepts 1-dimensional cones only");
                Vec y(1);
                y[0] = scalar_phi(name_, param_, x[0]);
                return y;
            }
            case Kind::Radial: {
                const double r = norm(x);
                if (r == 0.0) return Vec::Zero(x.size());
                return (scalar_phi(name_, param_, r) / r) * x;
            }
        }
        return x;
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::Linear: return "linear";
            case Kind::Scalar1D: return "scalar:" + name_;
            case Kind::Radial: return "radial:" + name_;
        }
        return "?";
    }

private:
    PhiSpec() = default;
    Kind kind_ = Kind::Scalar1D;
    Mat M_;
    std::string name_;
    double param_ = 0.0;
};

/// Sampled check that phi maps the cone into itself.
inline bool phi_maps_cone(const PhiSpec& phi, const Cone& cone, const Norm& norm,
                          int samples, std::uint64_t seed) {
    SplitRng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const Vec x = cone.sample(rng);
        if (!cone.contains(phi.apply(x, norm), 1e-8)) return false;
    }
    return true;
}

/// Sampled supremum of ||phi(x)|| / ||x|| over nonzero x in the cone: a
/// lower bound on the operator bound, labeled as such in reports. For a
/// Linear phi it is cross-checked against projected power iteration on
/// the cone-constrained operator norm.
inline double phi_operator_bound(const PhiSpec& phi, const Cone& cone, const Norm& norm,
                                 int samples, std::uint64_t seed) {
    require(samples >= 1, "phi_operator_bound: samples >= 1");
    SplitRng rng(seed);
    double best = 0.0;
    auto consider = [&](const Vec& x) {
        const double nx = norm(x);
        if (nx > 0) best = std::max(best, norm(phi.apply(x, norm)) / nx);
    };
    for (const auto& [a, b] : cone.seeded_order_pairs()) {
        consider(a);
        consider(b);
    }
    for (int s = 0; s < samples; ++s) {
        Vec x = cone.sample(rng);
        // Small vectors probe ratios that peak at the origin
        // (e.g. saturate: phi(x)/x -> 1 as x -> 0).
        const double shrink = std::pow(10.0, -rng.uniform(0.0, 6.0));
        consider(shrink * x);
    }
    if (phi.kind() == PhiSpec::Kind::Linear) {
        // Projected power iteration for sup ||Mx|| / ||x|| over x in P.
        Vec x = Vec::Ones(cone.dim()).cwiseAbs();
        x = cone.project(x);
        const Mat MtM = phi.matrix().transpose() * phi.matrix();
        for (int it = 0; it < 500; ++it) {
            Vec y = cone.project(MtM * x);
            const double ny = y.norm();
            if (ny == 0) break;
            x = y / ny;
        }
        consider(x);
    }
    return best;
}

struct PsiResult {
    double value;
    std::string method;  // "closed-form" or "sampled"
};

/// psi(t) = sup over the cone unit sphere of ||phi(t x)||. Closed forms:
/// 1-dimensional cones (the sphere is a single point), linear increasing
/// phi (psi(t) = t ||phi||), and radial phi (psi(t) = g(t)). Otherwise a
/// sampled supremum. Always satisfies psi(t) <= t ||phi|| and psi(0) = 0
/// for the shipped library.
inline PsiResult psi_from_phi(const PhiSpec& phi, const Cone& cone, const Norm& norm,
                              double t, int samples, std::uint64_t seed) {
    require(t >= 0, "psi_from_phi: t >= 0 required");
    if (t == 0.0) return {0.0, "closed-form"};
    if (cone.dim() == 1) {
        Vec unit = Vec::Ones(1);
        unit /= norm(unit);
        return {norm(phi.apply(t * unit, norm)), "closed-form"};
    }
    if (phi.kind() == PhiSpec::Kind::Radial)
        return {scalar_phi(phi.scalar_name(), phi.param(), t), "closed-form"};
    if (phi.kind() == PhiSpec::Kind::Linear) {
        // Linear phi with M P subset of P: the supremum scales,
        // psi(t) = t * ||phi||.
        const double bound = phi_operator_bound(phi, cone, norm, samples, seed);
        return {t * bound, "closed-form"};
    }
    SplitRng rng(seed);
    double best = 0.0;
    auto consider = [&](Vec x) {
        const double nx = norm(x);
        if (nx == 0) return;
        x *= t / nx;
        best = std::max(best, norm(phi.apply(x, norm)));
    };
    for (const auto& [a, b] : cone.seeded_order_pairs()) {
        consider(a);
        consider(b);
    }
    for (int s = 0; s < samples; ++s) consider(cone.sample(rng));
    return {best, "sampled"};
}

}  // namespace cmk
