// cone-metric-kit command line front end.
//
// Subcommands: validate, gen, equiv, check, minconst, transfer-suite,
// fixpoint, psi. JSON output is a single schema-versioned document on
// stdout; diagnostics go to stderr. Exit codes: 0 success, 1 a
// mathematical assertion failed (axiom violation, failed transfer,
// non-convergence), 2 malformed flags or input files.

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conemetric/conemetric.hpp"

namespace {

using cmk::Json;

constexpr const char* kSchema = "cone-metric-kit/1";

struct OutputOptions {
    std::string format = "json";
};

void emit(const Json& doc, const OutputOptions& out, const std::string& text) {
    if (out.format == "json") {
        Json j = doc;
        Json versioned;
        versioned["schema"] = kSchema;
        for (auto& [k, v] : j.items()) versioned[k] = v;
        std::cout << versioned.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

cmk::Cone cone_from_flags(const std::string& cone_name, int dim, const std::string& cone_file) {
    if (!cone_file.empty()) return cmk::cone_from_json(cmk::load_json_file(cone_file));
    if (cone_name == "orthant") return cmk::Cone::orthant(dim);
    if (cone_name == "lorentz") return cmk::Cone::lorentz(dim);
    throw cmk::InputError("use --cone orthant|lorentz or --cone-file for polyhedral cones");
}

cmk::Norm norm_from_flag(const std::string& name) {
    if (name == "euclidean") return cmk::Norm::euclidean();
    if (name == "l1") return cmk::Norm::l1();
    if (name == "linf") return cmk::Norm::linf();
    throw cmk::InputError("unknown norm: " + name);
}

cmk::ContractionKind kind_from_flags(const std::string& kind_name, double alpha, double beta,
                                     double lambda, const std::vector<double>& a, double k,
                                     int m, int n, const std::string& mode) {
    using cmk::ContractionKind;
    const cmk::KindTag tag = cmk::kind_from_name(kind_name);
    switch (tag) {
        case cmk::KindTag::Banach: return ContractionKind::banach(alpha);
        case cmk::KindTag::Kannan: return ContractionKind::kannan(lambda);
        case cmk::KindTag::Chatterjea: return ContractionKind::chatterjea(lambda);
        case cmk::KindTag::CrossPair: return ContractionKind::cross_pair(alpha, beta);
        case cmk::KindTag::SelfPair: return ContractionKind::self_pair(alpha, beta);
        case cmk::KindTag::ChoiceA: return ContractionKind::choice_a(alpha);
        case cmk::KindTag::ChoiceB: return ContractionKind::choice_b(beta);
        case cmk::KindTag::ChoiceC: return ContractionKind::choice_c(beta);
        case cmk::KindTag::HardyRogers:
            cmk::require(a.size() == 5, "hardy-rogers needs --a with 5 values");
            return ContractionKind::hardy_rogers({a[0], a[1], a[2], a[3], a[4]});
        case cmk::KindTag::QuasiMax: return ContractionKind::quasi_max(lambda);
        case cmk::KindTag::HardySym:
            cmk::require(a.size() == 4, "hardy-sym needs --a with 4 values");
            return ContractionKind::hardy_sym({a[0], a[1], a[2], a[3]});
        case cmk::KindTag::PowerPair:
            return ContractionKind::power_pair(m, n, k, mode != "exists");
    }
    throw cmk::InputError("unknown kind");
}

Json check_result_to_json(const cmk::CheckResult& r) {
    Json j;
    j["holds"] = r.holds;
    j["checked_pairs"] = r.checked_pairs;
    Json wit = Json::array();
    for (const auto& w : r.witnesses)
        wit.push_back({{"i", w.i}, {"j", w.j}, {"detail", w.detail}});
    j["witnesses"] = std::move(wit);
    return j;
}

Json table_to_json(const cmk::Mat& m) { return cmk::matrix_to_json(m); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cone-metric-kit: cone metric spaces, equivalent metrics, and "
                 "contractive-condition transfer checks"};
    app.require_subcommand(1);
    app.fallthrough();  // parent flags (--format, --tol, ...) after the subcommand
    OutputOptions out;
    app.add_option("--format", out.format, "Output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));

    // Shared solver overrides.
    cmk::SolverConfig cfg;
    app.add_option("--tol", cfg.tol, "Solver/membership tolerance");
    app.add_option("--max-iter", cfg.max_iter, "Iteration budget");
    app.add_option("--grid-resolution", cfg.grid_resolution, "Oracle grid resolution");

    std::string space_path, map_path, cone_file, out_path, kinds_arg = "all";
    std::string cone_name = "orthant", norm_name = "euclidean", mode = "forall";
    std::string x0_label, phi_name = "saturate", matrix_file;
    std::uint64_t seed = 0;
    int points = 4, dim = 2, dirs = 1, suite_seeds = 500, power_m = 1, power_n = 1;
    int samples = 4000;
    double alpha = 0, beta = 0, lambda = 0, kcoef = 0, phi_param = 0, fix_tol = 1e-8;
    std::vector<double> avec;
    std::vector<double> ts{0.1, 0.5, 1, 2, 10};
    bool with_oracle = false;
    std::string kind_name_arg = "banach";

    auto* validate = app.add_subcommand("validate", "Validate cone metric axioms of a space file");
    validate->add_option("--space", space_path)->required();

    auto* gen = app.add_subcommand("gen", "Generate a random cone metric space");
    gen->add_option("--seed", seed)->required();
    gen->add_option("--points", points);
    gen->add_option("--cone", cone_name);
    gen->add_option("--dim", dim);
    gen->add_option("--cone-file", cone_file);
    gen->add_option("--norm", norm_name);
    gen->add_option("--dirs", dirs);
    gen->add_option("--out", out_path);

    auto* equiv = app.add_subcommand("equiv", "Equivalent metric table of a space");
    equiv->add_option("--space", space_path)->required();
    equiv->add_flag("--oracle", with_oracle, "Add brute-force comparison columns (dim <= 3)");

    auto* check = app.add_subcommand("check", "Check a contractive condition");
    check->add_option("--kind", kind_name_arg)->required();
    check->add_option("--space", space_path)->required();
    check->add_option("--map", map_path)->required();
    check->add_option("--alpha", alpha);
    check->add_option("--beta", beta);
    check->add_option("--lambda", lambda);
    check->add_option("--a", avec);
    check->add_option("--k", kcoef);
    check->add_option("--m", power_m);
    check->add_option("--n", power_n);
    check->add_option("--mode", mode)->check(CLI::IsMember({"forall", "exists"}));

    auto* minconst = app.add_subcommand("minconst", "Minimal coefficients for a condition kind");
    std::string side = "metric";
    minconst->add_option("--kind", kind_name_arg)->required();
    minconst->add_option("--space", space_path)->required();
    minconst->add_option("--map", map_path)->required();
    minconst->add_option("--side", side)->check(CLI::IsMember({"metric", "cone", "both"}));
    minconst->add_option("--m", power_m);
    minconst->add_option("--n", power_n);
    minconst->add_option("--mode", mode)->check(CLI::IsMember({"forall", "exists"}));

    auto* suite = app.add_subcommand("transfer-suite", "Randomized transfer verification");
    suite->add_option("--seeds", suite_seeds, "Instances per kind");
    suite->add_option("--kinds", kinds_arg, "all or comma-separated kind names");
    suite->add_option("--seed", seed)->required();

    auto* fixpoint = app.add_subcommand("fixpoint", "Certify a Banach contraction and iterate");
    fixpoint->add_option("--space", space_path)->required();
    fixpoint->add_option("--map", map_path)->required();
    fixpoint->add_option("--x0", x0_label);
    fixpoint->add_option("--fix-tol", fix_tol);

    auto* psi = app.add_subcommand("psi", "psi-from-phi construction");
    psi->add_option("--phi", phi_name, "saturate | scale | cap | linear | radial:<name>");
    psi->add_option("--param", phi_param);
    psi->add_option("--matrix-file", matrix_file, "Matrix for --phi linear");
    psi->add_option("--cone", cone_name);
    psi->add_option("--dim", dim);
    psi->add_option("--cone-file", cone_file);
    psi->add_option("--norm", norm_name);
    psi->add_option("--t", ts, "Evaluation points");
    psi->add_option("--samples", samples);
    psi->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) {
            const auto space = cmk::space_from_json(cmk::load_json_file(space_path));
            const auto rep = cmk::validate_axioms(space, cfg.tol);
            Json j;
            j["valid"] = rep.valid;
            j["checked_triples"] = rep.checked_triples;
            Json viol = Json::array();
            for (const auto& v : rep.violations)
                viol.push_back({{"axiom", v.axiom}, {"i", v.i}, {"j", v.j}, {"k", v.k},
                                {"detail", v.detail}});
            j["violations"] = std::move(viol);
            j["within_tolerance"] = rep.within_tolerance.size();
            std::ostringstream text;
            text << (rep.valid ? "valid" : "INVALID") << " (" << rep.violations.size()
                 << " violations)\n";
            emit(j, out, text.str());
            return rep.valid ? 0 : 1;
        }
        if (*gen) {
            cmk::GenSpec spec;
            spec.seed = seed;
            spec.n_points = points;
            spec.cone = cone_from_flags(cone_name, dim, cone_file);
            spec.norm = norm_from_flag(norm_name);
            spec.interior_directions = dirs;
            const auto space = cmk::generate_random_space(spec);
            const Json j = cmk::space_to_json(space);
            if (!out_path.empty()) {
                cmk::save_json_file(out_path, j);
                emit(Json{{"written", out_path}, {"points", points}}, out,
                     "wrote " + out_path + "\n");
            } else {
                emit(j, out, j.dump(2) + "\n");
            }
            return 0;
        }
        if (*equiv) {
            const auto space = cmk::space_from_json(cmk::load_json_file(space_path));
            cmk::SolvePath path = cmk::SolvePath::ClosedForm;
            const cmk::Mat d = cmk::equivalent_metric_table(space, cfg, &path);
            const cmk::Mat nD = cmk::norm_table(space);
            bool sandwich_ok = true;
            for (int i = 0; i < d.rows(); ++i)
                for (int j = 0; j < d.cols(); ++j)
                    sandwich_ok = sandwich_ok && d(i, j) <= nD(i, j) + 1e-9;
            Json j;
            j["d"] = table_to_json(d);
            j["norm_D"] = table_to_json(nD);
            j["sandwich_ok"] = sandwich_ok;
            j["solver"] = cmk::solve_path_name(path);
            if (with_oracle) {
                cmk::Mat oracle = cmk::Mat::Zero(d.rows(), d.cols());
                cmk::Mat gap = oracle;
                for (int i = 0; i < d.rows(); ++i)
                    for (int jj = i + 1; jj < d.cols(); ++jj) {
                        cmk::MinNormProblem prob{
                            space.D[static_cast<size_t>(i)][static_cast<size_t>(jj)],
                            space.cone, space.norm};
                        oracle(i, jj) = oracle(jj, i) = cmk::brute_force_distance(prob, cfg);
                        gap(i, jj) = gap(jj, i) = std::abs(oracle(i, jj) - d(i, jj));
                    }
                j["oracle"] = table_to_json(oracle);
                j["oracle_gap"] = table_to_json(gap);
            }
            std::ostringstream text;
            text << "equivalent metric (" << cmk::solve_path_name(path) << "), sandwich_ok="
                 << (sandwich_ok ? "yes" : "no") << "\n";
            emit(j, out, text.str());
            return sandwich_ok ? 0 : 1;
        }
        if (*check) {
            const auto space = cmk::space_from_json(cmk::load_json_file(space_path));
            const auto map = cmk::map_from_json(cmk::load_json_file(map_path));
            const auto kind = kind_from_flags(kind_name_arg, alpha, beta, lambda, avec, kcoef,
                                              power_m, power_n, mode);
            const auto cone_res = cmk::check_cone_condition(space, map, kind, cfg.tol);
            const cmk::Mat d = cmk::equivalent_metric_table(space, cfg);
            const auto metric_res = cmk::check_metric_condition(d, map, kind, cfg.tol);
            Json j;
            j["kind"] = cmk::kind_name(kind.tag);
            j["cone_check"] = check_result_to_json(cone_res);
            j["metric_check"] = check_result_to_json(metric_res);
            std::ostringstream text;
            text << "cone: " << (cone_res.holds ? "holds" : "fails")
                 << ", metric: " << (metric_res.holds ? "holds" : "fails") << "\n";
            emit(j, out, text.str());
            return 0;
        }
        if (*minconst) {
            const auto space = cmk::space_from_json(cmk::load_json_file(space_path));
            const auto map = cmk::map_from_json(cmk::load_json_file(map_path));
            cmk::ContractionKind proto{cmk::kind_from_name(kind_name_arg), {0.0}};
            proto.power_m = power_m;
            proto.power_n = power_n;
            proto.forall = mode != "exists";
            Json j;
            j["kind"] = kind_name_arg;
            std::ostringstream text;
            if (side == "metric" || side == "both") {
                const cmk::Mat d = cmk::equivalent_metric_table(space, cfg);
                const auto c = cmk::minimal_constant_metric(d, map, proto);
                j["metric"] = c;
                j["metric_contractive"] = std::isfinite(c[0]) && c[0] < 1.0;
                text << "metric minimal: " << c[0] << "\n";
            }
            if (side == "cone" || side == "both") {
                const auto c = cmk::minimal_constant_cone(space, map, proto, cfg.tol);
                j["cone"] = c;  // feasibility-only for multi-coefficient kinds
                text << "cone minimal: " << c[0] << "\n";
            }
            emit(j, out, text.str());
            return 0;
        }
        if (*suite) {
            std::vector<cmk::KindTag> tags;
            if (kinds_arg == "all") {
                tags = cmk::all_kind_tags();
            } else {
                std::stringstream ss(kinds_arg);
                std::string item;
                while (std::getline(ss, item, ',')) tags.push_back(cmk::kind_from_name(item));
            }
            const auto result = cmk::run_transfer_suite(seed, suite_seeds, tags, cfg);
            Json j = cmk::suite_result_to_json(result);
            std::ostringstream text;
            text << "kind              instances  pass  max-const-ratio\n";
            for (const auto& k : result.kinds) {
                text << k.kind;
                for (size_t pad = k.kind.size(); pad < 18; ++pad) text << ' ';
                text << k.instances << "  " << k.transfer_ok << "  " << k.max_constant_ratio
                     << "\n";
            }
            if (!result.all_ok) {
                text << "TRANSFER FAILURE (contradicts the transfer theorems -> bug)\n";
                for (const auto& dump : result.failure_dumps) std::cerr << dump << "\n";
            }
            emit(j, out, text.str());
            return result.all_ok ? 0 : 1;
        }
        if (*fixpoint) {
            const auto space = cmk::space_from_json(cmk::load_json_file(space_path));
            const auto map = cmk::map_from_json(cmk::load_json_file(map_path));
            const auto rep = cmk::certify_and_solve(space, map, cfg);
            int x0 = 0;
            if (!x0_label.empty()) {
                x0 = -1;
                for (int i = 0; i < space.size(); ++i)
                    if (space.labels[static_cast<size_t>(i)] == x0_label) x0 = i;
                cmk::require(x0 >= 0, "unknown point label: " + x0_label);
            }
            const cmk::Mat d = cmk::equivalent_metric_table(space, cfg);
            const auto trace = cmk::picard_iterate(map, x0, d,
                                                   rep.has_banach ? rep.alpha : 0.0, fix_tol);
            Json j;
            j["has_banach_certificate"] = rep.has_banach;
            j["alpha"] = rep.alpha;
            if (!rep.has_banach) {
                j["kannan"] = rep.kannan;
                j["chatterjea"] = rep.chatterjea;
            }
            j["fixed_point"] =
                rep.fixed_point >= 0 ? Json(space.labels[static_cast<size_t>(rep.fixed_point)])
                                     : Json(nullptr);
            j["all_starts_agree"] = rep.all_starts_agree;
            j["iterations"] = trace.iterations;
            j["converged"] = trace.converged;
            j["apriori_bound"] = trace.apriori_bound;
            j["aposteriori_bound"] = trace.aposteriori_bound;
            Json tr = Json::array();
            for (int idx : trace.index_iterates)
                tr.push_back(space.labels[static_cast<size_t>(idx)]);
            j["trace"] = std::move(tr);
            std::ostringstream text;
            text << (rep.has_banach ? "banach certificate alpha=" + std::to_string(rep.alpha)
                                    : "no banach certificate")
                 << ", converged=" << (trace.converged ? "yes" : "no") << "\n";
            emit(j, out, text.str());
            return trace.converged ? 0 : 1;
        }
        if (*psi) {
            cmk::Norm norm = norm_from_flag(norm_name);
            cmk::PhiSpec phi = [&] {
                if (phi_name == "linear")
                    return cmk::PhiSpec::linear(cmk::matrix_from_json(
                        cmk::load_json_file(matrix_file)));
                if (phi_name.rfind("radial:", 0) == 0)
                    return cmk::PhiSpec::radial(phi_name.substr(7), phi_param);
                return cmk::PhiSpec::scalar1d(phi_name, phi_param);
            }();
            if (phi.kind() == cmk::PhiSpec::Kind::Scalar1D) dim = 1;
            const cmk::Cone cone = cone_from_flags(cone_name, dim, cone_file);
            const double bound = cmk::phi_operator_bound(phi, cone, norm, samples, seed);
            Json j;
            j["phi"] = phi.describe();
            j["operator_bound_estimate"] = bound;  // sampled lower bound
            Json rows = Json::array();
            bool psi_ok = true;
            std::ostringstream text;
            text << "phi=" << phi.describe() << " ||phi|| >= " << bound << "\n";
            for (double t : ts) {
                const auto r = cmk::psi_from_phi(phi, cone, norm, t, samples, seed);
                psi_ok = psi_ok && r.value <= t * bound + 1e-6;
                rows.push_back({{"t", t}, {"psi", r.value}, {"method", r.method}});
                text << "psi(" << t << ") = " << r.value << " [" << r.method << "]\n";
            }
            j["psi"] = std::move(rows);
            j["psi_le_t_bound"] = psi_ok;
            emit(j, out, text.str());
            return psi_ok ? 0 : 1;
        }
    } catch (const cmk::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const cmk::Json::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
