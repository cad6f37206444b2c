#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "conemetric/equiv.hpp"
#include "conemetric/space.hpp"
#include "conemetric/types.hpp"

namespace cmk {

enum class KindTag {
    Banach,
    Kannan,
    Chatterjea,
    CrossPair,
    SelfPair,
    ChoiceA,
    ChoiceB,
    ChoiceC,
    HardyRogers,
    QuasiMax,
    HardySym,
    PowerPair
};

inline const char* kind_name(KindTag t) {
    switch (t) {
        case KindTag::Banach: return "banach";
        case KindTag::Kannan: return "kannan";
        case KindTag::Chatterjea: return "chatterjea";
        case KindTag::CrossPair: return "cross-pair";
        case KindTag::SelfPair: return "self-pair";
        case KindTag::ChoiceA: return "choice-a";
        case KindTag::ChoiceB: return "choice-b";
        case KindTag::ChoiceC: return "choice-c";
        case KindTag::HardyRogers: return "hardy-rogers";
        case KindTag::QuasiMax: return "quasi-max";
        case KindTag::HardySym: return "hardy-sym";
        case KindTag::PowerPair: return "power-pair";
    }
    return "?";
}

inline KindTag kind_from_name(const std::string& s) {
    for (KindTag t : {KindTag::Banach, KindTag::Kannan, KindTag::Chatterjea, KindTag::CrossPair,
                      KindTag::SelfPair, KindTag::ChoiceA, KindTag::ChoiceB, KindTag::ChoiceC,
                      KindTag::HardyRogers, KindTag::QuasiMax, KindTag::HardySym,
                      KindTag::PowerPair})
        if (s == kind_name(t)) return t;
    throw InputError("unknown contraction kind: " + s);
}

/// A contractive condition from the catalog with its coefficients.
/// Coefficient ranges are validated at construction. PowerPair carries
/// the iterate exponents (m, n) and the quantifier mode over the
/// admissible (z, t) set (forall is the default, the stronger reading;
/// both occur in the literature).
struct ContractionKind {
    KindTag tag;
    std::vector<double> coeffs;
    int power_m = 1;
    int power_n = 1;
    bool forall = true;

    static ContractionKind banach(double a) {
        require(a >= 0 && a < 1, "banach: alpha in [0,1) required");
        return {KindTag::Banach, {a}};
    }
    static ContractionKind kannan(double l) {
        require(l >= 0 && l < 0.5, "kannan: lambda in [0,1/2) required");
        return {KindTag::Kannan, {l}};
    }
    static ContractionKind chatterjea(double l) {
        require(l >= 0 && l < 0.5, "chatterjea: lambda in [0,1/2) required");
        return {KindTag::Chatterjea, {l}};
    }
    static ContractionKind cross_pair(double a, double b) {
        require(a >= 0 && a < 1 && b >= 0 && b < 1, "cross-pair: alpha,beta in [0,1) required");
        return {KindTag::CrossPair, {a, b}};
    }
    static ContractionKind self_pair(double a, double b) {
        require(a >= 0 && a < 1 && b >= 0 && b < 1, "self-pair: alpha,beta in [0,1) required");
        return {KindTag::SelfPair, {a, b}};
    }
    static ContractionKind choice_a(double a) {
        require(a > 0 && a < 1, "choice-a: alpha in (0,1) required");
        return {KindTag::ChoiceA, {a}};
    }
    static ContractionKind choice_b(double b) {
        require(b > 0 && b < 1, "choice-b: beta in (0,1) required");
        return {KindTag::ChoiceB, {b}};
    }
    static ContractionKind choice_c(double b) {
        require(b > 0 && b < 1, "choice-c: beta in (0,1) required");
        return {KindTag::ChoiceC, {b}};
    }
    static ContractionKind hardy_rogers(std::array<double, 5> a) {
        double sum = 0;
        for (double x : a) {
            require(x >= 0, "hardy-rogers: coefficients must be nonnegative");
            sum += x;
        }
        require(sum < 1, "hardy-rogers: sum of coefficients < 1 required");
        return {KindTag::HardyRogers, {a[0], a[1], a[2], a[3], a[4]}};
    }
    static ContractionKind quasi_max(double l) {
        require(l >= 0 && l < 0.5, "quasi-max: lambda in [0,1/2) required");
        return {KindTag::QuasiMax, {l}};
    }
    static ContractionKind hardy_sym(std::array<double, 4> a) {
        for (double x : a) require(x >= 0, "hardy-sym: coefficients must be nonnegative");
        require(a[0] + a[1] + a[2] + 2 * a[3] < 1,
                "hardy-sym: a1 + a2 + a3 + 2 a4 < 1 required");
        return {KindTag::HardySym, {a[0], a[1], a[2], a[3]}};
    }
    static ContractionKind power_pair(int m, int n, double k, bool forall_mode = true) {
        require(m >= 1 && n >= 1, "power-pair: m,n >= 1 required");
        require(k >= 0 && k < 1, "power-pair: k in [0,1) required");
        ContractionKind ck{KindTag::PowerPair, {k}};
        ck.power_m = m;
        ck.power_n = n;
        ck.forall = forall_mode;
        return ck;
    }

    /// Same kind with different coefficient values (validated).
    ContractionKind with_coeffs(const std::vector<double>& c) const {
        switch (tag) {
            case KindTag::Banach: return banach(c[0]);
            case KindTag::Kannan: return kannan(c[0]);
            case KindTag::Chatterjea: return chatterjea(c[0]);
            case KindTag::CrossPair: return cross_pair(c[0], c[1]);
            case KindTag::SelfPair: return self_pair(c[0], c[1]);
            case KindTag::ChoiceA: return choice_a(c[0]);
            case KindTag::ChoiceB: return choice_b(c[0]);
            case KindTag::ChoiceC: return choice_c(c[0]);
            case KindTag::HardyRogers: return hardy_rogers({c[0], c[1], c[2], c[3], c[4]});
            case KindTag::QuasiMax: return quasi_max(c[0]);
            case KindTag::HardySym: return hardy_sym({c[0], c[1], c[2], c[3]});
            case KindTag::PowerPair: return power_pair(power_m, power_n, c[0], forall);
        }
        throw InputError("with_coeffs: bad tag");
    }
};

struct PairWitness {
    int i = -1, j = -1;
    std::string detail;
};

struct CheckResult {
    bool holds = true;
    std::vector<PairWitness> witnesses;
    int checked_pairs = 0;
};

struct TransferReport {
    std::string kind;
    CheckResult cone_check;
    CheckResult metric_check;
    std::vector<double> minimal_constants_cone;
    std::vector<double> minimal_constants_metric;
    bool transfer_ok = true;
};

namespace detail {

/// The five distance terms of the catalog at an ordered pair (x, y):
/// lhs = D(Tx,Ty), d1 = D(x,y), d2 = D(x,Tx), d3 = D(y,Ty),
/// d4 = D(x,Ty), d5 = D(y,Tx).
template <typename V>
struct PairTerms {
    V lhs, d1, d2, d3, d4, d5;
};

inline PairTerms<Vec> cone_terms(const FiniteConeMetricSpace& s, const SelfMap& map, int i,
                                 int j) {
    auto& D = s.D;
    const auto ti = static_cast<size_t>(map.apply(i)), tj = static_cast<size_t>(map.apply(j));
    const auto ui = static_cast<size_t>(i), uj = static_cast<size_t>(j);
    return {D[ti][tj], D[ui][uj], D[ui][ti], D[uj][tj], D[ui][tj], D[uj][ti]};
}

inline PairTerms<double> metric_terms(const Mat& d, const SelfMap& map, int i, int j) {
    const int ti = map.apply(i), tj = map.apply(j);
    return {d(ti, tj), d(i, j), d(i, ti), d(j, tj), d(i, tj), d(j, ti)};
}

inline bool is_linear_kind(KindTag t) {
    return t == KindTag::Banach || t == KindTag::Kannan || t == KindTag::Chatterjea ||
           t == KindTag::CrossPair || t == KindTag::SelfPair || t == KindTag::HardyRogers ||
           t == KindTag::HardySym;
}

inline bool is_choice_kind(KindTag t) {
    return t == KindTag::ChoiceA || t == KindTag::ChoiceB || t == KindTag::ChoiceC ||
           t == KindTag::QuasiMax;
}

/// Coefficients on (d1..d5) for the linear kinds.
inline std::array<double, 5> linear_weights(const ContractionKind& k) {
    const auto& c = k.coeffs;
    switch (k.tag) {
        case KindTag::Banach: return {c[0], 0, 0, 0, 0};
        case KindTag::Kannan: return {0, c[0], c[0], 0, 0};
        case KindTag::Chatterjea: return {0, 0, 0, c[0], c[0]};
        case KindTag::CrossPair: return {0, 0, 0, c[0], c[1]};
        case KindTag::SelfPair: return {0, c[0], c[1], 0, 0};
        case KindTag::HardyRogers: return {c[0], c[1], c[2], c[3], c[4]};
        case KindTag::HardySym: return {c[0], c[1], c[2], c[3], c[3]};
        default: throw InputError("linear_weights: not a linear kind");
    }
}

/// The candidate set for the choice kinds (the "there exists u" sets;
/// the metric-side conclusion takes the max over the same set).
/// ChoiceA reads the bracket as (d4 + d5) / 2.
template <typename V>
inline std::vector<V> choice_set(KindTag t, const PairTerms<V>& p) {
    switch (t) {
        case KindTag::ChoiceA: return {p.d1, p.d2, p.d3, static_cast<V>(0.5 * (p.d4 + p.d5))};
        case KindTag::ChoiceB:
            return {p.d1, p.d2, p.d3, static_cast<V>(0.5 * p.d4), static_cast<V>(0.5 * p.d5)};
        case KindTag::ChoiceC:
            return {p.d1, static_cast<V>(0.5 * (p.d2 + p.d3)),
                    static_cast<V>(0.5 * (p.d4 + p.d5))};
        case KindTag::QuasiMax: return {p.d1, p.d2, p.d3, p.d4, p.d5};
        default: throw InputError("choice_set: not a choice kind");
    }
}

/// Distinct point indices {x, y, T^p x (1<=p<=m), T^q y (1<=q<=n)}
/// together with the iterate endpoints (T^m x, T^n y).
struct PowerContext {
    int lhs_a, lhs_b;
    std::vector<std::pair<int, int>> admissible;  // z < t, distinct points
};

inline PowerContext power_context(const SelfMap& map, int i, int j, int m, int n) {
    std::vector<int> zs{i, j};
    int a = i, b = j;
    for (int p = 1; p <= m; ++p) {
        a = map.apply(a);
        zs.push_back(a);
    }
    for (int q = 1; q <= n; ++q) {
        b = map.apply(b);
        zs.push_back(b);
    }
    std::vector<int> uniq;
    for (int z : zs) {
        bool seen = false;
        for (int u : uniq) seen = seen || (u == z);
        if (!seen) uniq.push_back(z);
    }
    PowerContext ctx{a, b, {}};
    for (size_t p = 0; p < uniq.size(); ++p)
        for (size_t q = p + 1; q < uniq.size(); ++q)
            ctx.admissible.emplace_back(uniq[p], uniq[q]);
    return ctx;
}

}  // namespace detail

/// Exhaustive check of the hypothesis side (cone order) over all ordered
/// pairs, x = y included. "A <= B" means membership of B - A in the cone
/// at tolerance tol. Choice kinds hold at a pair iff some u in the
/// stated set satisfies lhs <= coeff * u.
inline CheckResult check_cone_condition(const FiniteConeMetricSpace& space, const SelfMap& map,
                                        const ContractionKind& kind, double tol = kDefaultTol) {
    require_tabulated_on(map, space);
    CheckResult res;
    const int n = space.size();
    const Cone& cone = space.cone;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ++res.checked_pairs;
            bool ok = true;
            std::string detail;
            if (kind.tag == KindTag::PowerPair) {
                const auto ctx = detail::power_context(map, i, j, kind.power_m, kind.power_n);
                const Vec& lhs = space.D[static_cast<size_t>(ctx.lhs_a)]
                                        [static_cast<size_t>(ctx.lhs_b)];
                bool all = true, any = ctx.admissible.empty();
                for (const auto& [z, t] : ctx.admissible) {
                    const bool c = cone.leq(
                        lhs, kind.coeffs[0] * space.D[static_cast<size_t>(z)][static_cast<size_t>(t)],
                        tol);
                    all = all && c;
                    any = any || c;
                }
                ok = kind.forall ? all : any;
                if (!ok) detail = "power-pair inequality failed";
            } else {
                const auto p = detail::cone_terms(space, map, i, j);
                if (detail::is_linear_kind(kind.tag)) {
                    const auto w = detail::linear_weights(kind);
                    const Vec rhs =
                        w[0] * p.d1 + w[1] * p.d2 + w[2] * p.d3 + w[3] * p.d4 + w[4] * p.d5;
                    ok = cone.leq(p.lhs, rhs, tol);
                    if (!ok) detail = "rhs - D(Tx,Ty) not in the cone";
                } else {
                    ok = false;
                    for (const Vec& u : detail::choice_set(kind.tag, p))
                        ok = ok || cone.leq(p.lhs, kind.coeffs[0] * u, tol);
                    if (!ok) detail = "no admissible u in the choice set";
                }
            }
            if (!ok) {
                res.holds = false;
                res.witnesses.push_back({i, j, detail});
            }
        }
    }
    return res;
}

/// The conclusion side: the same sweep over the real-valued equivalent
/// metric table. Choice kinds compare against coeff * max of the set.
inline CheckResult check_metric_condition(const Mat& d, const SelfMap& map,
                                          const ContractionKind& kind, double tol = kDefaultTol) {
    require(map.kind == SelfMap::Kind::Tabulated, "finite-space check requires a tabulated map");
    CheckResult res;
    const int n = static_cast<int>(d.rows());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ++res.checked_pairs;
            bool ok = true;
            std::ostringstream detail;
            if (kind.tag == KindTag::PowerPair) {
                const auto ctx = detail::power_context(map, i, j, kind.power_m, kind.power_n);
                const double lhs = d(ctx.lhs_a, ctx.lhs_b);
                bool all = true, any = ctx.admissible.empty();
                for (const auto& [z, t] : ctx.admissible) {
                    const bool c = lhs <= kind.coeffs[0] * d(z, t) + tol;
                    all = all && c;
                    any = any || c;
                }
                ok = kind.forall ? all : any;
                if (!ok) detail << "d(T^m x,T^n y) = " << lhs;
            } else {
                const auto p = detail::metric_terms(d, map, i, j);
                if (detail::is_linear_kind(kind.tag)) {
                    const auto w = detail::linear_weights(kind);
                    const double rhs =
                        w[0] * p.d1 + w[1] * p.d2 + w[2] * p.d3 + w[3] * p.d4 + w[4] * p.d5;
                    ok = p.lhs <= rhs + tol;
                    if (!ok) detail << p.lhs << " > " << rhs;
                } else {
                    double m = 0.0;
                    for (double u : detail::choice_set(kind.tag, p)) m = std::max(m, u);
                    ok = p.lhs <= kind.coeffs[0] * m + tol;
                    if (!ok) detail << p.lhs << " > " << kind.coeffs[0] * m;
                }
            }
            if (!ok) {
                res.holds = false;
                res.witnesses.push_back({i, j, detail.str()});
            }
        }
    }
    return res;
}

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Big-M simplex for: min c^T x s.t. W x >= r, x >= 0 (W, r, c >= 0).
/// Small dense problems only. Returns empty on infeasibility.
inline std::vector<double> lp_cover(const Mat& W, const Vec& r, const Vec& c) {
    const int m = static_cast<int>(W.rows());
    const int k = static_cast<int>(W.cols());
    if (m == 0) return std::vector<double>(static_cast<size_t>(k), 0.0);
    const int ncols = k + 2 * m;  // x, surplus, artificial
    Mat T = Mat::Zero(m, ncols + 1);
    Vec cost = Vec::Zero(ncols);
    const double bigM = 1e7 * (1.0 + c.maxCoeff());
    for (int i = 0; i < m; ++i) {
        T.block(i, 0, 1, k) = W.row(i);
        T(i, k + i) = -1.0;        // surplus
        T(i, k + m + i) = 1.0;     // artificial
        T(i, ncols) = r[i];
        cost[k + m + i] = bigM;
    }
    for (int j = 0; j < k; ++j) cost[j] = c[j];
    std::vector<int> basis(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) basis[static_cast<size_t>(i)] = k + m + i;
    for (int iter = 0; iter < 20000; ++iter) {
        int enter = -1;
        for (int j = 0; j < ncols; ++j) {
            double red = cost[j];
            for (int i = 0; i < m; ++i) red -= cost[basis[static_cast<size_t>(i)]] * T(i, j);
            if (red < -1e-9) {
                enter = j;  // Bland's rule
                break;
            }
        }
        if (enter < 0) break;
        int leave = -1;
        double best = kInf;
        for (int i = 0; i < m; ++i) {
            if (T(i, enter) > 1e-10) {
                const double ratio = T(i, ncols) / T(i, enter);
                if (ratio < best - 1e-12) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return {};  // unbounded (cannot happen for cover LPs)
        T.row(leave) /= T(leave, enter);
        for (int i = 0; i < m; ++i)
            if (i != leave) T.row(i) -= T(i, enter) * T.row(leave);
        basis[static_cast<size_t>(leave)] = enter;
    }
    std::vector<double> x(static_cast<size_t>(k), 0.0);
    for (int i = 0; i < m; ++i) {
        if (basis[static_cast<size_t>(i)] >= k + m && T(i, ncols) > 1e-6) return {};  // infeasible
        if (basis[static_cast<size_t>(i)] < k)
            x[static_cast<size_t>(basis[static_cast<size_t>(i)])] = T(i, ncols);
    }
    return x;
}

/// Minimal alpha >= 0 with alpha * u - lhs in the cone, by doubling then
/// bisection to width 1e-6. Returns infinity if no alpha <= 1e6 works.
inline double cone_min_scale(const Cone& cone, const Vec& lhs, const Vec& u, double tol) {
    auto feasible = [&](double a) { return cone.leq(lhs, a * u, tol); };
    if (feasible(0.0)) return 0.0;
    double hi = 1.0;
    while (!feasible(hi)) {
        hi *= 2.0;
        if (hi > 1e6) return kInf;
    }
    double lo = hi * 0.5;
    if (hi == 1.0) lo = 0.0;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

inline int coeff_count(KindTag t) {
    switch (t) {
        case KindTag::CrossPair:
        case KindTag::SelfPair: return 2;
        case KindTag::HardyRogers: return 5;
        case KindTag::HardySym: return 4;
        default: return 1;
    }
}

/// Per-kind LP data on the metric side for the multi-coefficient kinds:
/// objective weights and the per-pair term columns.
inline void lp_row(KindTag t, const PairTerms<double>& p, std::vector<double>& row) {
    switch (t) {
        case KindTag::CrossPair: row = {p.d4, p.d5}; break;
        case KindTag::SelfPair: row = {p.d2, p.d3}; break;
        case KindTag::HardyRogers: row = {p.d1, p.d2, p.d3, p.d4, p.d5}; break;
        case KindTag::HardySym: row = {p.d1, p.d2, p.d3, p.d4 + p.d5}; break;
        default: throw InputError("lp_row: not a multi-coefficient kind");
    }
}

inline Vec lp_objective(KindTag t) {
    if (t == KindTag::HardySym) {
        Vec c(4);
        c << 1, 1, 1, 2;
        return c;
    }
    return Vec::Ones(coeff_count(t));
}

}  // namespace detail

/// Minimal coefficients making the condition hold on the metric side.
/// Single-coefficient kinds: direct max of ratios (0/0 pairs skipped;
/// a pair with zero denominator and positive numerator gives infinity,
/// i.e. "not contractive under this kind"). Multi-coefficient kinds:
/// minimized via a small linear program over the coefficient cone.
inline std::vector<double> minimal_constant_metric(const Mat& d, const SelfMap& map,
                                                   const ContractionKind& proto) {
    require(map.kind == SelfMap::Kind::Tabulated, "minimal_constant: tabulated map required");
    const int n = static_cast<int>(d.rows());
    const KindTag t = proto.tag;
    if (detail::coeff_count(t) == 1) {
        double best = 0.0;
        auto ratio = [&](double lhs, double den) {
            if (lhs <= 0) return;
            best = den > 0 ? std::max(best, lhs / den) : detail::kInf;
        };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (t == KindTag::PowerPair) {
                    const auto ctx = detail::power_context(map, i, j, proto.power_m, proto.power_n);
                    const double lhs = d(ctx.lhs_a, ctx.lhs_b);
                    if (ctx.admissible.empty()) continue;
                    double agg = proto.forall ? detail::kInf : 0.0;
                    bool lhs_pos = lhs > 0;
                    for (const auto& [z, tt] : ctx.admissible) {
                        const double den = d(z, tt);
                        const double rr = den > 0 ? lhs / den : (lhs_pos ? detail::kInf : 0.0);
                        agg = proto.forall ? std::min(agg, den) : std::min(agg, rr);
                    }
                    if (proto.forall) {
                        // k must cover every admissible pair: ratio against
                        // the smallest denominator.
                        ratio(lhs, agg == detail::kInf ? 0.0 : agg);
                    } else if (lhs_pos) {
                        best = std::max(best, agg);
                    }
                    continue;
                }
                const auto p = detail::metric_terms(d, map, i, j);
                switch (t) {
                    case KindTag::Banach: ratio(p.lhs, p.d1); break;
                    case KindTag::Kannan: ratio(p.lhs, p.d2 + p.d3); break;
                    case KindTag::Chatterjea: ratio(p.lhs, p.d4 + p.d5); break;
                    case KindTag::ChoiceA:
                    case KindTag::ChoiceB:
                    case KindTag::ChoiceC:
                    case KindTag::QuasiMax: {
                        double m = 0.0;
                        for (double u : detail::choice_set(t, p)) m = std::max(m, u);
                        ratio(p.lhs, m);
                        break;
                    }
                    default: break;
                }
            }
        return {best};
    }
    // LP over the coefficient cone: min objective s.t. sum_i a_i term_i >= lhs.
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto p = detail::metric_terms(d, map, i, j);
            if (p.lhs <= 0) continue;
            std::vector<double> row;
            detail::lp_row(t, p, row);
            double mx = 0;
            for (double x : row) mx = std::max(mx, x);
            if (mx <= 0)
                return std::vector<double>(static_cast<size_t>(detail::coeff_count(t)),
                                           detail::kInf);
            rows.push_back(std::move(row));
            rhs.push_back(p.lhs);
        }
    const int k = detail::coeff_count(t);
    Mat W(static_cast<int>(rows.size()), k);
    Vec r(static_cast<int>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < k; ++j) W(static_cast<int>(i), j) = rows[i][static_cast<size_t>(j)];
        r[static_cast<int>(i)] = rhs[i];
    }
    std::vector<double> a = detail::lp_cover(W, r, detail::lp_objective(t));
    if (a.empty())
        return std::vector<double>(static_cast<size_t>(k), detail::kInf);
    // Nudge up so the returned coefficients verifiably satisfy the sweep.
    for (double& x : a) x = std::max(0.0, x) * (1.0 + 1e-12) + 1e-12;
    return a;
}

/// Cone-side minimal coefficients. Single-coefficient kinds: per-pair
/// bisection on "alpha u - D(Tx,Ty) in P" to 1e-6 width, then the max
/// over pairs (infeasible pairs give infinity). Multi-coefficient kinds
/// report a feasible point found by scaling a fixed direction; the cone
/// side has no unique minimum there.
inline std::vector<double> minimal_constant_cone(const FiniteConeMetricSpace& space,
                                                 const SelfMap& map, const ContractionKind& proto,
                                                 double tol = kDefaultTol) {
    require_tabulated_on(map, space);
    const int n = space.size();
    const KindTag t = proto.tag;
    const Cone& cone = space.cone;
    if (detail::coeff_count(t) == 1) {
        double best = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (t == KindTag::PowerPair) {
                    const auto ctx = detail::power_context(map, i, j, proto.power_m, proto.power_n);
                    const Vec& lhs = space.D[static_cast<size_t>(ctx.lhs_a)]
                                            [static_cast<size_t>(ctx.lhs_b)];
                    double agg = proto.forall ? 0.0 : detail::kInf;
                    if (ctx.admissible.empty()) continue;
                    for (const auto& [z, tt] : ctx.admissible) {
                        const double s = detail::cone_min_scale(
                            cone, lhs, space.D[static_cast<size_t>(z)][static_cast<size_t>(tt)],
                            tol);
                        agg = proto.forall ? std::max(agg, s) : std::min(agg, s);
                    }
                    best = std::max(best, agg);
                    continue;
                }
                const auto p = detail::cone_terms(space, map, i, j);
                double s = detail::kInf;
                switch (t) {
                    case KindTag::Banach: s = detail::cone_min_scale(cone, p.lhs, p.d1, tol); break;
                    case KindTag::Kannan:
                        s = detail::cone_min_scale(cone, p.lhs, p.d2 + p.d3, tol);
                        break;
                    case KindTag::Chatterjea:
                        s = detail::cone_min_scale(cone, p.lhs, p.d4 + p.d5, tol);
                        break;
                    case KindTag::ChoiceA:
                    case KindTag::ChoiceB:
                    case KindTag::ChoiceC:
                    case KindTag::QuasiMax:
                        for (const Vec& u : detail::choice_set(t, p))
                            s = std::min(s, detail::cone_min_scale(cone, p.lhs, u, tol));
                        break;
                    default: break;
                }
                best = std::max(best, s);
            }
        return {best};
    }
    // Scale a fixed direction until the condition holds.
    std::vector<double> dir;
    switch (t) {
        case KindTag::CrossPair:
        case KindTag::SelfPair: dir = {0.5, 0.5}; break;
        case KindTag::HardyRogers: dir = {0.2, 0.2, 0.2, 0.2, 0.2}; break;
        case KindTag::HardySym: dir = {0.25, 0.25, 0.25, 0.125}; break;
        default: throw InputError("minimal_constant_cone: bad kind");
    }
    double best = 0.0;
    for (int i = 0; i < n && best < detail::kInf; ++i)
        for (int j = 0; j < n; ++j) {
            const auto p = detail::cone_terms(space, map, i, j);
            std::array<double, 5> w{};
            switch (t) {
                case KindTag::CrossPair: w = {0, 0, 0, dir[0], dir[1]}; break;
                case KindTag::SelfPair: w = {0, dir[0], dir[1], 0, 0}; break;
                case KindTag::HardyRogers: w = {dir[0], dir[1], dir[2], dir[3], dir[4]}; break;
                case KindTag::HardySym: w = {dir[0], dir[1], dir[2], dir[3], dir[3]}; break;
                default: break;
            }
            const Vec u = w[0] * p.d1 + w[1] * p.d2 + w[2] * p.d3 + w[3] * p.d4 + w[4] * p.d5;
            const double s = detail::cone_min_scale(cone, p.lhs, u, tol);
            best = std::max(best, s);
            if (best == detail::kInf) break;
        }
    std::vector<double> out;
    for (double x : dir) out.push_back(x * best);
    return out;
}

/// Runs the cone-side and metric-side checks with the same coefficients
/// and reports whether the implication "cone holds => metric holds"
/// held. For PowerPair the metric conclusion is additionally checked
/// pairwise for every admissible (z, t) that witnessed the hypothesis.
inline TransferReport verify_transfer(const FiniteConeMetricSpace& space, const SelfMap& map,
                                      const ContractionKind& kind, const SolverConfig& cfg = {}) {
    require_tabulated_on(map, space);
    TransferReport rep;
    rep.kind = kind_name(kind.tag);
    const Mat d = equivalent_metric_table(space, cfg);
    rep.cone_check = check_cone_condition(space, map, kind, cfg.tol);
    rep.metric_check = check_metric_condition(d, map, kind, cfg.tol);
    rep.transfer_ok = !rep.cone_check.holds || rep.metric_check.holds;
    if (kind.tag == KindTag::PowerPair) {
        // Pairwise transfer: every (z, t) that witnesses the hypothesis in
        // the cone order must witness the conclusion in the metric.
        const int n = space.size();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto ctx = detail::power_context(map, i, j, kind.power_m, kind.power_n);
                const Vec& lhs = space.D[static_cast<size_t>(ctx.lhs_a)]
                                        [static_cast<size_t>(ctx.lhs_b)];
                for (const auto& [z, t] : ctx.admissible) {
                    const Vec& dzt = space.D[static_cast<size_t>(z)][static_cast<size_t>(t)];
                    if (space.cone.leq(lhs, kind.coeffs[0] * dzt, cfg.tol) &&
                        d(ctx.lhs_a, ctx.lhs_b) > kind.coeffs[0] * d(z, t) + cfg.tol) {
                        rep.transfer_ok = false;
                        rep.metric_check.witnesses.push_back(
                            {i, j, "pairwise power transfer failed at (z,t)=(" +
                                       std::to_string(z) + "," + std::to_string(t) + ")"});
                    }
                }
            }
    }
    if (detail::coeff_count(kind.tag) >= 1) {
        rep.minimal_constants_cone = minimal_constant_cone(space, map, kind, cfg.tol);
        rep.minimal_constants_metric = minimal_constant_metric(d, map, kind);
    }
    return rep;
}

/// Lemma-style two-metric transfer: if D(Tx,Ty) <= D*(x,y) for all
/// pairs (hypothesis in the cone order of the D space), then the
/// equivalent metrics satisfy d(Tx,Ty) <= d*(x,y). Spaces must share
/// labels; the cones may differ (the argument never uses a shared cone).
inline TransferReport check_lemma_two_metrics(const FiniteConeMetricSpace& spaceD,
                                              const FiniteConeMetricSpace& spaceDstar,
                                              const SelfMap& map, const SolverConfig& cfg = {}) {
    require(spaceD.labels == spaceDstar.labels, "two-metric check: label mismatch");
    require_tabulated_on(map, spaceD);
    TransferReport rep;
    rep.kind = "lemma-two-metrics";
    const int n = spaceD.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ++rep.cone_check.checked_pairs;
            const auto ti = static_cast<size_t>(map.apply(i)), tj = static_cast<size_t>(map.apply(j));
            if (!spaceD.cone.leq(spaceD.D[ti][tj],
                                 spaceDstar.D[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                 cfg.tol)) {
                rep.cone_check.holds = false;
                rep.cone_check.witnesses.push_back({i, j, "D(Tx,Ty) > D*(x,y)"});
            }
        }
    if (!rep.cone_check.holds) {
        rep.transfer_ok = true;  // hypothesis does not hold; nothing to assert
        return rep;
    }
    const Mat d = equivalent_metric_table(spaceD, cfg);
    const Mat dstar = equivalent_metric_table(spaceDstar, cfg);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ++rep.metric_check.checked_pairs;
            const int ti = map.apply(i), tj = map.apply(j);
            if (d(ti, tj) > dstar(i, j) + cfg.tol) {
                rep.metric_check.holds = false;
                rep.metric_check.witnesses.push_back({i, j, "d(Tx,Ty) > d*(x,y)"});
            }
        }
    rep.transfer_ok = rep.metric_check.holds;
    return rep;
}

}  // namespace cmk
