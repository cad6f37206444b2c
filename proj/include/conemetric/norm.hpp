#pragma once

#include <cmath>
#include <utility>

#include "conemetric/types.hpp"

namespace cmk {

enum class NormKind { Euclidean, L1, LInf, Weighted };

/// A norm on R^n. Weighted means sqrt(sum w_i x_i^2) with w_i > 0.
class Norm {
public:
    static Norm euclidean() { return Norm(NormKind::Euclidean, {}); }
    static Norm l1() { return Norm(NormKind::L1, {}); }
    static Norm linf() { return Norm(NormKind::LInf, {}); }
    static Norm weighted(Vec weights) {
        require(weights.size() > 0 && (weights.array() > 0).all(),
                "weighted norm requires strictly positive weights");
        return Norm(NormKind::Weighted, std::move(weights));
    }

    double operator()(const Vec& v) const {
        switch (kind_) {
            case NormKind::Euclidean: return v.norm();
            case NormKind::L1: return v.lpNorm<1>();
            case NormKind::LInf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
            case NormKind::Weighted:
                require(v.size() == weights_.size(), "weighted norm: dimension mismatch");
                return std::sqrt((weights_.array() * v.array().square()).sum());
        }
        return 0.0;
    }

    NormKind kind() const { return kind_; }
    const Vec& weights() const { return weights_; }

    /// Lipschitz constant of the norm w.r.t. the Euclidean norm.
    double lipschitz(int dim) const {
        switch (kind_) {
            case NormKind::Euclidean: return 1.0;
            case NormKind::L1: return std::sqrt(static_cast<double>(dim));
            case NormKind::LInf: return 1.0;
            case NormKind::Weighted: return std::sqrt(weights_.maxCoeff());
        }
        return 1.0;
    }

    /// Lower bound of the norm on the Euclidean unit sphere (coercivity).
    double coercivity(int dim) const {
        switch (kind_) {
            case NormKind::Euclidean: return 1.0;
            case NormKind::L1: return 1.0;
            case NormKind::LInf: return 1.0 / std::sqrt(static_cast<double>(dim));
            case NormKind::Weighted: return std::sqrt(weights_.minCoeff());
        }
        return 1.0;
    }

    /// A subgradient of the norm at u (any member of the subdifferential).
    Vec subgradient(const Vec& u) const {
        const int n = static_cast<int>(u.size());
        Vec g = Vec::Zero(n);
        switch (kind_) {
            case NormKind::Euclidean: {
                const double nu = u.norm();
                if (nu > 0) g = u / nu;
                break;
            }
            case NormKind::L1:
                for (int i = 0; i < n; ++i) g[i] = (u[i] > 0) - (u[i] < 0);
                break;
            case NormKind::LInf: {
                int arg = 0;
                for (int i = 1; i < n; ++i)
                    if (std::abs(u[i]) > std::abs(u[arg])) arg = i;
                if (std::abs(u[arg]) > 0) g[arg] = u[arg] > 0 ? 1.0 : -1.0;
                break;
            }
            case NormKind::Weighted: {
                const double nu = (*this)(u);
                if (nu > 0) g = (weights_.array() * u.array()).matrix() / nu;
                break;
            }
        }
        return g;
    }

private:
    Norm(NormKind k, Vec w) : kind_(k), weights_(std::move(w)) {}

    NormKind kind_;
    Vec weights_;
};

}  // namespace cmk
