#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "conemetric/contraction.hpp"
#include "conemetric/equiv.hpp"
#include "conemetric/json_io.hpp"
#include "conemetric/rng.hpp"
#include "conemetric/space.hpp"
#include "conemetric/types.hpp"

namespace cmk {

struct SuiteKindResult {
    std::string kind;
    int instances = 0;
    int transfer_ok = 0;
    double max_constant_ratio = 0.0;  // metric minimal / cone minimal
};

struct SuiteResult {
    std::vector<SuiteKindResult> kinds;
    bool all_ok = true;
    int total_instances = 0;
    std::vector<std::string> failure_dumps;
};

inline std::vector<KindTag> all_kind_tags() {
    return {KindTag::Banach,   KindTag::Kannan,   KindTag::Chatterjea, KindTag::CrossPair,
            KindTag::SelfPair, KindTag::ChoiceA,  KindTag::ChoiceB,    KindTag::ChoiceC,
            KindTag::HardyRogers, KindTag::QuasiMax, KindTag::HardySym, KindTag::PowerPair};
}

namespace detail {

inline Cone random_suite_cone(SplitRng& rng) {
    const int pick = rng.uniform_int(0, 3);
    if (pick == 0) return Cone::orthant(rng.uniform_int(1, 3));
    if (pick == 1) return Cone::lorentz(rng.uniform_int(2, 3));
    // Perturbed-axis generator cone; pointed and solid by construction.
    const int n = rng.uniform_int(2, 3);
    Mat G = Mat::Zero(n, n + 1);
    for (int i = 0; i < n; ++i) {
        G(i, i) = 1.0;
        for (int r = 0; r < n; ++r) G(r, i) += 0.4 * rng.uniform();
        G(i, n) = 0.5 + rng.uniform();
    }
    return Cone::generators(G);
}

inline SelfMap random_contractive_biased_map(SplitRng& rng, int n_points) {
    std::vector<int> images(static_cast<size_t>(n_points), 0);
    if (rng.uniform() < 0.7) {
        // Tree toward point 0: every orbit collapses to the root.
        for (int i = 1; i < n_points; ++i) images[static_cast<size_t>(i)] =
            rng.uniform_int(0, i - 1);
    } else {
        for (int i = 0; i < n_points; ++i) images[static_cast<size_t>(i)] =
            rng.uniform_int(0, n_points - 1);
    }
    return SelfMap::tabulated(std::move(images));
}

/// Coefficient cap on the uniform scale of minimal_constant_cone's
/// direction for each kind (construction-range constraints).
inline double suite_scale_cap(KindTag t) {
    switch (t) {
        case KindTag::Kannan:
        case KindTag::Chatterjea:
        case KindTag::QuasiMax: return 0.5;
        case KindTag::CrossPair:
        case KindTag::SelfPair: return 1.9;  // each coefficient < 0.95
        default: return 1.0;
    }
}

}  // namespace detail

/// Randomized transfer verification: per kind, keeps generating
/// (space, map) instances, fits coefficients slightly above the cone-side
/// minimal so the hypothesis provably holds, and asserts that the
/// metric-side check holds with the same coefficients. A single transfer
/// failure aborts the suite with a witness dump (it would contradict the
/// underlying theorems, i.e. flag a bug).
inline SuiteResult run_transfer_suite(std::uint64_t seed, int instances_per_kind,
                                      const std::vector<KindTag>& kinds,
                                      const SolverConfig& cfg = {}) {
    SplitRng root(seed);
    SuiteResult result;
    for (size_t ki = 0; ki < kinds.size(); ++ki) {
        const KindTag tag = kinds[ki];
        SuiteKindResult kr;
        kr.kind = kind_name(tag);
        int attempt = 0;
        while (kr.instances < instances_per_kind && attempt < instances_per_kind * 40) {
            SplitRng rng = root.child(ki * 1000003ULL + static_cast<std::uint64_t>(attempt));
            ++attempt;
            FiniteConeMetricSpace space = [&] {
                GenSpec spec;
                spec.seed = rng.next_u64();
                spec.n_points = rng.uniform_int(3, 6);
                spec.cone = detail::random_suite_cone(rng);
                spec.norm = Norm::euclidean();
                spec.interior_directions = rng.uniform_int(1, 2);
                return generate_random_space(spec);
            }();
            const SelfMap map = detail::random_contractive_biased_map(rng, space.size());

            ContractionKind proto{tag, {0.0}};
            if (tag == KindTag::PowerPair) {
                proto.power_m = rng.uniform_int(1, 3);
                proto.power_n = rng.uniform_int(1, 3);
            }
            std::vector<double> cmin;
            try {
                cmin = minimal_constant_cone(space, map, proto, cfg.tol);
            } catch (const ConvergenceError&) {
                continue;
            }
            double scale = 0.0;
            bool finite = true;
            for (double c : cmin) {
                finite = finite && std::isfinite(c);
                scale += c;
            }
            // Recover the uniform scale (cmin = direction * scale for the
            // multi-coefficient kinds; the direction sums to 1).
            if (!finite || scale + 1e-4 >= detail::suite_scale_cap(tag)) continue;

            std::vector<double> coeffs = cmin;
            const double bump = 1e-4 / static_cast<double>(coeffs.size());
            for (double& c : coeffs) c = std::max(c + bump, 1e-6);
            ContractionKind kind = proto;
            try {
                kind = proto.with_coeffs(coeffs);
            } catch (const InputError&) {
                continue;
            }

            TransferReport rep;
            try {
                rep = verify_transfer(space, map, kind, cfg);
            } catch (const std::exception&) {
                continue;
            }
            if (!rep.cone_check.holds) continue;  // not an instance of the hypothesis
            ++kr.instances;
            ++result.total_instances;
            if (rep.transfer_ok) {
                ++kr.transfer_ok;
            } else {
                result.all_ok = false;
                Json dump;
                dump["kind"] = kr.kind;
                dump["coefficients"] = coeffs;
                dump["space"] = space_to_json(space);
                dump["map"] = map_to_json(map);
                Json wit = Json::array();
                for (const PairWitness& w : rep.metric_check.witnesses)
                    wit.push_back({{"i", w.i}, {"j", w.j}, {"detail", w.detail}});
                dump["witnesses"] = std::move(wit);
                result.failure_dumps.push_back(dump.dump(2));
            }
            if (!rep.minimal_constants_cone.empty() && !rep.minimal_constants_metric.empty()) {
                const double cc = rep.minimal_constants_cone[0];
                const double cm = rep.minimal_constants_metric[0];
                if (cc > 1e-9 && std::isfinite(cc) && std::isfinite(cm))
                    kr.max_constant_ratio = std::max(kr.max_constant_ratio, cm / cc);
            }
            if (!result.all_ok) break;  // abort on contradiction
        }
        result.kinds.push_back(kr);
        if (!result.all_ok) break;
    }
    return result;
}

inline Json suite_result_to_json(const SuiteResult& r) {
    Json j;
    j["all_ok"] = r.all_ok;
    j["total_instances"] = r.total_instances;
    Json kinds = Json::array();
    for (const SuiteKindResult& k : r.kinds)
        kinds.push_back({{"kind", k.kind},
                         {"instances", k.instances},
                         {"transfer_ok", k.transfer_ok},
                         {"max_constant_ratio", k.max_constant_ratio}});
    j["kinds"] = std::move(kinds);
    if (!r.failure_dumps.empty()) j["failures"] = r.failure_dumps;
    return j;
}

}  // namespace cmk
