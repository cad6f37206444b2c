#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "conemetric/norm.hpp"
#include "conemetric/rng.hpp"
#include "conemetric/types.hpp"

namespace cmk {

enum class ConeKind { Orthant, Lorentz, Generators, Halfspaces };

namespace detail {

/// Euclidean projection onto the probability simplex {l >= 0, sum l = 1}.
inline Vec project_simplex(const Vec& y) {
    const int n = static_cast<int>(y.size());
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cssv = 0.0, theta = 0.0;
    int rho = 0;
    for (int i = 0; i < n; ++i) {
        cssv += u[i];
        const double t = (cssv - 1.0) / (i + 1);
        if (u[i] - t > 0) {
            rho = i + 1;
            theta = t;
        }
    }
    (void)rho;
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = std::max(y[i] - theta, 0.0);
    return x;
}

}  // namespace detail

/// A closed solid pointed convex cone in R^n. Four concrete families:
/// the nonnegative orthant, the Lorentz (second-order) cone with the
/// LAST coordinate as the height t, a polyhedral cone given by generator
/// columns, and a polyhedral cone given by halfspace normal rows
/// (P = {x : Ax >= 0} componentwise).
///
/// Generator cones are validated at construction: the columns must span
/// R^n (solidness) and the cone must be pointed. A halfspace
/// representation is derived eagerly via facet enumeration so that
/// interior queries are available.
class Cone {
public:
    static Cone orthant(int dim) {
        require(dim >= 1, "orthant: dim >= 1 required");
        return Cone(ConeKind::Orthant, dim, Mat(), Mat());
    }

    static Cone lorentz(int dim) {
        require(dim >= 2, "lorentz: dim >= 2 required");
        return Cone(ConeKind::Lorentz, dim, Mat(), Mat());
    }

    /// Cone generated by the columns of G.
    static Cone generators(const Mat& G) {
        const int n = static_cast<int>(G.rows());
        require(n >= 1 && G.cols() >= 1, "generators: empty matrix");
        Eigen::ColPivHouseholderQR<Mat> qr(G);
        if (qr.rank() < n)
            throw StructuralError("generator cone is not solid: columns do not span R^n");
        if (!pointed_generators(G))
            throw StructuralError("generator cone is not pointed");
        Mat H = facet_halfspaces(G);
        return Cone(ConeKind::Generators, n, G, std::move(H));
    }

    /// Cone {x : Ax >= 0}, rows of A are the halfspace normals.
    static Cone halfspaces(const Mat& A) {
        const int n = static_cast<int>(A.cols());
        require(n >= 1 && A.rows() >= 1, "halfspaces: empty matrix");
        Eigen::ColPivHouseholderQR<Mat> qr(A);
        if (qr.rank() < n)
            throw StructuralError("halfspace cone is not pointed: rank(A) < n");
        Vec x0 = strict_interior_point(A);
        if (x0.size() == 0)
            throw StructuralError("halfspace cone is not solid");
        Cone c(ConeKind::Halfspaces, n, A, A);
        c.interior_seed_ = std::move(x0);
        return c;
    }

    ConeKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const Mat& matrix() const { return mat_; }

    /// Halfspace normals describing the cone (rows). Identical to
    /// matrix() for Halfspaces; facet normals for Generators; empty for
    /// orthant/Lorentz (their membership tests are analytic).
    const Mat& halfspace_form() const { return hs_; }

    /// Membership within tol. Orthant: entries >= -tol. Lorentz
    /// ((x, t), t last): ||x||_2 <= t + tol. Halfspaces: Av >= -tol.
    /// Generators: Euclidean distance to the cone (via projection) <= tol.
    bool contains(const Vec& v, double tol = kDefaultTol) const {
        require(v.size() == dim_, "contains: dimension mismatch");
        require(tol >= 0, "contains: tol >= 0 required");
        switch (kind_) {
            case ConeKind::Orthant:
                return (v.array() >= -tol).all();
            case ConeKind::Lorentz:
                return v.head(dim_ - 1).norm() <= v[dim_ - 1] + tol;
            case ConeKind::Halfspaces:
                return ((mat_ * v).array() >= -tol).all();
            case ConeKind::Generators: {
                // Quick decisive test against the facet form (unit rows)
                // before paying for a projection.
                const double worst = (hs_ * v).minCoeff();
                if (worst >= 0) return true;
                if (-worst > tol + 1e-12) return false;
                SolverConfig cfg;
                cfg.tol = std::min(tol * 0.1, 1e-10);
                return (project(v, cfg) - v).norm() <= tol;
            }
        }
        return false;
    }

    /// Strict membership: every defining inequality holds with slack >=
    /// margin. Realizes the x << y relation via contains_interior(y - x).
    bool contains_interior(const Vec& v, double margin) const {
        require(v.size() == dim_, "contains_interior: dimension mismatch");
        require(margin > 0, "contains_interior: margin > 0 required");
        switch (kind_) {
            case ConeKind::Orthant:
                return (v.array() >= margin).all();
            case ConeKind::Lorentz:
                return v.head(dim_ - 1).norm() <= v[dim_ - 1] - margin;
            case ConeKind::Halfspaces:
            case ConeKind::Generators:
                return ((hs_ * v).array() >= margin).all();
        }
        return false;
    }

    /// Cone order: a <= b iff b - a is in the cone.
    bool leq(const Vec& a, const Vec& b, double tol = kDefaultTol) const {
        require(a.size() == b.size(), "leq: dimension mismatch");
        return contains(b - a, tol);
    }

    /// Euclidean projection onto the cone. Orthant: componentwise clamp.
    /// Lorentz: Moreau closed form. Halfspaces: Dykstra. Generators:
    /// accelerated projected gradient on the NNLS problem
    /// min_{l >= 0} ||G l - v||^2.
    Vec project(const Vec& v, const SolverConfig& cfg = {}) const {
        require(v.size() == dim_, "project: dimension mismatch");
        switch (kind_) {
            case ConeKind::Orthant:
                return v.cwiseMax(0.0);
            case ConeKind::Lorentz: {
                const Vec x = v.head(dim_ - 1);
                const double t = v[dim_ - 1];
                const double nx = x.norm();
                if (nx <= t) return v;
                Vec p = Vec::Zero(dim_);
                if (nx <= -t) return p;
                const double a = 0.5 * (nx + t);
                p.head(dim_ - 1) = (a / nx) * x;
                p[dim_ - 1] = a;
                return p;
            }
            case ConeKind::Halfspaces:
                return project_dykstra(v, cfg);
            case ConeKind::Generators:
                return project_nnls(v, cfg);
        }
        return v;
    }

    /// Dual cone: orthant and Lorentz are self-dual; Generators(G) maps
    /// to Halfspaces(G^T) and vice versa.
    Cone dual() const {
        switch (kind_) {
            case ConeKind::Orthant: return orthant(dim_);
            case ConeKind::Lorentz: return lorentz(dim_);
            case ConeKind::Generators: return halfspaces(mat_.transpose());
            case ConeKind::Halfspaces: return generators(mat_.transpose());
        }
        return *this;
    }

    /// Seeded sample from the cone (may lie on the boundary).
    Vec sample(SplitRng& rng) const {
        switch (kind_) {
            case ConeKind::Orthant: {
                Vec v(dim_);
                for (int i = 0; i < dim_; ++i) v[i] = rng.uniform();
                return v;
            }
            case ConeKind::Lorentz: {
                Vec dir(dim_ - 1);
                for (int i = 0; i < dim_ - 1; ++i) dir[i] = rng.normal();
                const double nd = dir.norm();
                if (nd > 0) dir /= nd;
                const double t = rng.uniform();
                const double r = rng.uniform(0.0, 0.99);
                Vec v(dim_);
                v.head(dim_ - 1) = r * t * dir;
                v[dim_ - 1] = t;
                return v;
            }
            case ConeKind::Generators: {
                Vec lambda(mat_.cols());
                for (int i = 0; i < lambda.size(); ++i) lambda[i] = rng.uniform();
                return mat_ * lambda;
            }
            case ConeKind::Halfspaces:
                return sample_rejection(rng, 0.0);
        }
        return Vec::Zero(dim_);
    }

    /// Seeded sample from the interior of the cone.
    Vec sample_interior(SplitRng& rng) const {
        switch (kind_) {
            case ConeKind::Orthant: {
                Vec v(dim_);
                for (int i = 0; i < dim_; ++i) v[i] = rng.uniform(0.1, 1.0);
                return v;
            }
            case ConeKind::Lorentz: {
                Vec v = sample(rng);
                v.head(dim_ - 1) *= 0.8;
                v[dim_ - 1] = std::max(v[dim_ - 1], 0.1);
                return v;
            }
            case ConeKind::Generators: {
                // A strictly positive combination of spanning generators
                // is interior.
                Vec lambda(mat_.cols());
                for (int i = 0; i < lambda.size(); ++i) lambda[i] = rng.uniform(0.2, 1.0);
                return mat_ * lambda;
            }
            case ConeKind::Halfspaces: {
                for (int scale = 0; scale < 4; ++scale) {
                    Vec v = sample_rejection_try(rng, 1e-3 / std::pow(10.0, scale), 2000);
                    if (v.size() > 0) return v;
                }
                // Deterministic fallback from the construction-time seed.
                return interior_seed_;
            }
        }
        return Vec::Zero(dim_);
    }

    /// Deterministic pairs 0 <= a <= b that stress monotonicity /
    /// normality estimates (generator and axis combinations).
    std::vector<std::pair<Vec, Vec>> seeded_order_pairs() const {
        std::vector<std::pair<Vec, Vec>> out;
        Mat gens;
        switch (kind_) {
            case ConeKind::Orthant: gens = Mat::Identity(dim_, dim_); break;
            case ConeKind::Lorentz: {
                gens = Mat::Zero(dim_, 2 * (dim_ - 1));
                for (int i = 0; i < dim_ - 1; ++i) {
                    gens(i, 2 * i) = 1.0;
                    gens(dim_ - 1, 2 * i) = 1.0;
                    gens(i, 2 * i + 1) = -1.0;
                    gens(dim_ - 1, 2 * i + 1) = 1.0;
                }
                break;
            }
            case ConeKind::Generators: gens = mat_; break;
            case ConeKind::Halfspaces: return out;  // sampled pairs only
        }
        for (int i = 0; i < gens.cols(); ++i) {
            for (int j = 0; j < gens.cols(); ++j) {
                out.emplace_back(gens.col(i), gens.col(i) + gens.col(j));
            }
        }
        return out;
    }

private:
    Cone(ConeKind k, int dim, Mat m, Mat hs)
        : kind_(k), dim_(dim), mat_(std::move(m)), hs_(std::move(hs)) {
        // Normalize facet rows so that margins are geometric distances.
        for (int i = 0; i < hs_.rows(); ++i) {
            const double n = hs_.row(i).norm();
            if (n > 0) hs_.row(i) /= n;
        }
    }

    /// Pointedness of cone(G): fails iff 0 is a nontrivial nonnegative
    /// combination, i.e. the min-norm point of conv{g_i / ||g_i||} is 0.
    static bool pointed_generators(const Mat& G) {
        const int k = static_cast<int>(G.cols());
        Mat Gn = G;
        for (int i = 0; i < k; ++i) {
            const double n = Gn.col(i).norm();
            require(n > 0, "generators: zero column");
            Gn.col(i) /= n;
        }
        const Mat Q = Gn.transpose() * Gn;
        const double L = Q.operatorNorm() + 1e-12;
        Vec lambda = Vec::Constant(k, 1.0 / k);
        for (int it = 0; it < 2000; ++it) {
            const Vec grad = Q * lambda;
            const Vec next = detail::project_simplex(lambda - grad / L);
            if ((next - lambda).lpNorm<Eigen::Infinity>() < 1e-13) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        return (Gn * lambda).norm() > 1e-7;
    }

    /// Facet enumeration for a pointed full-dimensional generator cone:
    /// every facet is spanned by n-1 generators; keep the hyperplane
    /// normals that support all generators on one side.
    static Mat facet_halfspaces(const Mat& G) {
        const int n = static_cast<int>(G.rows());
        const int k = static_cast<int>(G.cols());
        std::vector<Vec> normals;
        auto consider = [&](const Vec& h) {
            Vec hn = h / h.norm();
            for (const Vec& e : normals)
                if ((e - hn).norm() < 1e-9) return;
            normals.push_back(hn);
        };
        if (n == 1) {
            consider(Vec::Constant(1, G(0, 0) > 0 ? 1.0 : -1.0));
        } else {
            std::vector<int> idx(n - 1);
            // Iterate over all (n-1)-subsets of generator columns.
            std::vector<int> c(n - 1);
            for (int i = 0; i < n - 1; ++i) c[i] = i;
            const double eps = 1e-10 * std::max(1.0, G.cwiseAbs().maxCoeff());
            while (true) {
                if (n - 1 <= k) {
                    Mat S(n, n - 1);
                    for (int i = 0; i < n - 1; ++i) S.col(i) = G.col(c[i]);
                    Eigen::FullPivLU<Mat> lu(S.transpose());
                    if (lu.rank() == n - 1) {
                        Mat ker = lu.kernel();
                        Vec h = ker.col(0);
                        Vec s = G.transpose() * h;
                        if (s.minCoeff() >= -eps) consider(h);
                        else if (s.maxCoeff() <= eps) consider(Vec(-h));
                    }
                }
                // next combination
                int i = n - 2;
                while (i >= 0 && c[i] == k - (n - 1) + i) --i;
                if (i < 0) break;
                ++c[i];
                for (int j = i + 1; j < n - 1; ++j) c[j] = c[j - 1] + 1;
            }
        }
        if (normals.empty())
            throw StructuralError("generator cone: facet enumeration found no facets");
        Mat H(static_cast<int>(normals.size()), n);
        for (int i = 0; i < H.rows(); ++i) H.row(i) = normals[static_cast<size_t>(i)];
        return H;
    }

    /// Find x with Ax > 0 strictly, or return empty if none is found.
    static Vec strict_interior_point(const Mat& A) {
        const int n = static_cast<int>(A.cols());
        Mat An = A;
        for (int i = 0; i < An.rows(); ++i) {
            const double r = An.row(i).norm();
            require(r > 0, "halfspaces: zero row");
            An.row(i) /= r;
        }
        // Least-squares candidate first, then subgradient ascent on the
        // minimum margin.
        Vec x = An.colPivHouseholderQr().solve(Vec::Ones(An.rows()));
        auto margin = [&](const Vec& y) { return (An * y).minCoeff(); };
        if (margin(x) > 1e-9) return x;
        x = An.colwise().sum().transpose();
        if (x.norm() > 0) x /= x.norm();
        for (int it = 0; it < 4000; ++it) {
            const Vec m = An * x;
            int worst = 0;
            m.minCoeff(&worst);
            x += (0.5 / std::sqrt(it + 1.0)) * An.row(worst).transpose();
            const double nx = x.norm();
            if (nx > 0) x /= nx;
            if (margin(x) > 1e-7) return x;
        }
        if (margin(x) > 1e-9) return x;
        return Vec();
    }

    Vec project_dykstra(const Vec& v, const SolverConfig& cfg) const {
        const int m = static_cast<int>(mat_.rows());
        std::vector<Vec> corr(static_cast<size_t>(m), Vec::Zero(dim_));
        Vec x = v;
        for (int cycle = 0; cycle < cfg.max_iter; ++cycle) {
            const Vec prev = x;
            for (int i = 0; i < m; ++i) {
                const Vec y = x + corr[static_cast<size_t>(i)];
                const Vec a = mat_.row(i).transpose();
                const double viol = std::min(0.0, a.dot(y)) / a.squaredNorm();
                const Vec p = y - viol * a;
                corr[static_cast<size_t>(i)] = y - p;
                x = p;
            }
            if ((x - prev).lpNorm<Eigen::Infinity>() < cfg.tol) return x;
        }
        throw ConvergenceError("Dykstra projection did not converge", x,
                               (mat_ * x).cwiseMin(0.0).norm());
    }

    /// min_{l >= 0} 0.5 ||G l - v||^2 by projected gradient with Nesterov
    /// momentum and restart; stops on the KKT residual.
    Vec project_nnls(const Vec& v, const SolverConfig& cfg) const {
        const Mat& G = mat_;
        const int k = static_cast<int>(G.cols());
        const Mat Q = G.transpose() * G;
        const Vec b = G.transpose() * v;
        const double L = Q.operatorNorm() + 1e-12;
        Vec lambda = (G.colPivHouseholderQr().solve(v)).cwiseMax(0.0);
        if (lambda.size() != k) lambda = Vec::Zero(k);
        Vec y = lambda, prev = lambda;
        double tk = 1.0;
        for (int it = 0; it < cfg.max_iter; ++it) {
            const Vec grad = Q * y - b;
            Vec next = (y - grad / L).cwiseMax(0.0);
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
            Vec ynext = next + ((tk - 1.0) / tn) * (next - lambda);
            if ((next - lambda).dot(grad) > 0) {  // restart
                ynext = next;
                tk = 1.0;
            } else {
                tk = tn;
            }
            prev = lambda;
            lambda = next;
            y = ynext.cwiseMax(0.0);
            const Vec g = Q * lambda - b;
            double kkt = 0.0;
            for (int i = 0; i < k; ++i)
                kkt = std::max(kkt, lambda[i] > 0 ? std::abs(g[i]) : std::max(0.0, -g[i]));
            if (kkt < cfg.tol * std::max(1.0, v.norm())) return G * lambda;
        }
        const Vec p = G * lambda;
        throw ConvergenceError("NNLS projection did not converge", p, (p - v).norm());
    }

    Vec sample_rejection_try(SplitRng& rng, double margin, int tries) const {
        for (int t = 0; t < tries; ++t) {
            Vec v(dim_);
            for (int i = 0; i < dim_; ++i) v[i] = rng.uniform(-1.0, 1.0);
            if (((hs_ * v).array() >= margin).all()) return v;
        }
        return Vec();
    }

    Vec sample_rejection(SplitRng& rng, double margin) const {
        Vec v = sample_rejection_try(rng, margin, 20000);
        if (v.size() == 0)
            throw StructuralError("halfspace cone sampler failed (degenerate cone?)");
        return v;
    }

    ConeKind kind_;
    int dim_;
    Mat mat_;
    Mat hs_;
    Vec interior_seed_;
};

/// Sampled monotonicity check: draws ordered pairs 0 <= a <= b from the
/// cone plus deterministic generator pairs and tests ||a|| <= ||b||.
/// A sampled check, not a proof.
inline bool is_norm_monotone_on_cone(const Cone& cone, const Norm& norm,
                                     int samples, std::uint64_t seed) {
    require(samples >= 1, "is_norm_monotone_on_cone: samples >= 1");
    for (const auto& [a, b] : cone.seeded_order_pairs())
        if (norm(a) > norm(b) + 1e-12) return false;
    SplitRng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const Vec a = cone.sample(rng);
        const Vec b = a + cone.sample(rng);
        if (norm(a) > norm(b) + 1e-12) return false;
    }
    return true;
}

/// Sampled lower bound on the normality constant k (0 <= x <= y implies
/// ||x|| <= k ||y||): max of ||x||/||y|| over sampled ordered pairs.
/// Always >= 1 since the pair x = y is included.
inline double normality_constant_estimate(const Cone& cone, const Norm& norm,
                                          int samples, std::uint64_t seed) {
    require(samples >= 1, "normality_constant_estimate: samples >= 1");
    double best = 0.0;
    auto consider = [&](const Vec& x, const Vec& y) {
        const double ny = norm(y);
        if (ny > 0) best = std::max(best, norm(x) / ny);
    };
    for (const auto& [a, b] : cone.seeded_order_pairs()) consider(a, b);
    SplitRng rng(seed);
    const Vec w = cone.sample_interior(rng);
    consider(w, w);  // the x = y pair pins the estimate at >= 1
    for (int s = 0; s < samples; ++s) {
        const Vec a = cone.sample(rng);
        consider(a, a + cone.sample(rng));
    }
    return best;
}

}  // namespace cmk
