#include <catch_amalgamated.hpp>

#include "conemetric/equiv.hpp"
#include "conemetric/phi.hpp"
#include "conemetric/space.hpp"

using namespace cmk;

namespace {
Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
Vec v3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}
}  // namespace

TEST_CASE("1-d cone: the distance equals the scalar itself") {
    for (double t : {0.0, 0.5, 3.0}) {
        Vec v(1);
        v << t;
        CHECK(equivalent_distance({v, Cone::orthant(1), Norm::euclidean()}) ==
              Catch::Approx(t).margin(1e-12));
    }
}

TEST_CASE("monotone norm cases attain the infimum at v") {
    CHECK(equivalent_distance({v2(3, 4), Cone::orthant(2), Norm::euclidean()}) ==
          Catch::Approx(5.0).margin(1e-9));
    CHECK(equivalent_distance({v2(3, 4), Cone::orthant(2), Norm::l1()}) ==
          Catch::Approx(7.0).margin(1e-9));
    CHECK(equivalent_distance({v3(0.3, 0.4, 1.0), Cone::lorentz(3), Norm::euclidean()}) ==
          Catch::Approx(v3(0.3, 0.4, 1.0).norm()).margin(1e-9));
}

TEST_CASE("v outside the cone is rejected; v = 0 gives 0") {
    CHECK_THROWS_AS(equivalent_distance({v2(-1, 1), Cone::orthant(2), Norm::euclidean()}),
                    InputError);
    CHECK(equivalent_distance({Vec::Zero(2), Cone::lorentz(2), Norm::euclidean()}) == 0.0);
}

TEST_CASE("obtuse cone: the infimum drops strictly below ||v||") {
    // P = cone{(1,0), (-1,2)}, v = (-1,2). The minimum of ||u|| over
    // u in v + P is attained at u = v + (1,0) = (0,2): value 2 < sqrt(5).
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    const Cone P = Cone::generators(G);
    const MinNormProblem prob{v2(-1, 2), P, Norm::euclidean()};
    SolvePath path;
    const double d = equivalent_distance(prob, {}, &path);
    CHECK(d == Catch::Approx(2.0).margin(1e-6));
    CHECK(d < v2(-1, 2).norm());
    // The independent grid oracle agrees.
    CHECK(brute_force_distance(prob) == Catch::Approx(2.0).margin(2e-3));
}

TEST_CASE("solver matches the grid oracle across families and norms") {
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    Mat A(2, 2);
    A << 1, 0, -1, 2;
    const std::vector<Cone> cones = {Cone::orthant(2), Cone::lorentz(2), Cone::generators(G),
                                     Cone::halfspaces(A)};
    const std::vector<Norm> norms = {Norm::euclidean(), Norm::l1(), Norm::linf()};
    SplitRng rng(2024);
    for (const Cone& P : cones) {
        for (const Norm& N : norms) {
            for (int s = 0; s < 6; ++s) {
                const Vec v = P.sample(rng);
                if (N(v) < 1e-6) continue;
                const MinNormProblem prob{v, P, N};
                const double fast = equivalent_distance(prob);
                const double slow = brute_force_distance(prob);
                INFO("cone kind " << static_cast<int>(P.kind()) << " norm "
                                  << static_cast<int>(N.kind()));
                CHECK(fast == Catch::Approx(slow).margin(1e-2));
                CHECK(fast <= N(v) + 1e-9);  // u = v is always feasible
            }
        }
    }
}

TEST_CASE("subgradient path reports itself and stays within bounds") {
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    const MinNormProblem prob{v2(-1, 2), Cone::generators(G), Norm::linf()};
    SolvePath path;
    const double d = equivalent_distance(prob, {}, &path);
    CHECK(solve_path_name(path) == std::string("subgradient"));
    CHECK(d <= Norm::linf()(v2(-1, 2)) + 1e-9);
    CHECK(d >= 0.0);
    CHECK(d == Catch::Approx(brute_force_distance(prob)).margin(1e-2));
}

TEST_CASE("metric table is symmetric, zero-diagonal, triangle-correct") {
    GenSpec spec;
    spec.seed = 7;
    spec.n_points = 6;
    spec.cone = Cone::lorentz(3);
    spec.interior_directions = 2;
    const auto s = generate_random_space(spec);
    const Mat d = equivalent_metric_table(s);
    const Mat nD = norm_table(s);
    for (int i = 0; i < d.rows(); ++i) {
        CHECK(d(i, i) == 0.0);
        for (int j = 0; j < d.cols(); ++j) {
            CHECK(d(i, j) == d(j, i));
            CHECK(d(i, j) <= nD(i, j) + 1e-9);
            if (i != j) CHECK(d(i, j) > 0.0);
            for (int k = 0; k < d.cols(); ++k) CHECK(d(i, j) <= d(i, k) + d(k, j) + 1e-8);
        }
    }
}

TEST_CASE("table is deterministic under threading") {
    GenSpec spec;
    spec.seed = 3;
    spec.n_points = 7;
    spec.cone = Cone::orthant(3);
    spec.norm = Norm::linf();
    const auto s = generate_random_space(spec);
    const Mat a = equivalent_metric_table(s);
    const Mat b = equivalent_metric_table(s);
    CHECK((a - b).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("phi operator bound examples") {
    // Linear diag(2,3) on the orthant: bound 3 at e2.
    Mat M(2, 2);
    M << 2, 0, 0, 3;
    const double b = phi_operator_bound(PhiSpec::linear(M), Cone::orthant(2), Norm::euclidean(),
                                        4000, 1);
    CHECK(b == Catch::Approx(3.0).margin(1e-3));
    // Identity: exactly 1 (generator pairs hit it).
    const double bi = phi_operator_bound(PhiSpec::linear(Mat::Identity(2, 2)), Cone::orthant(2),
                                         Norm::euclidean(), 100, 1);
    CHECK(bi == Catch::Approx(1.0).margin(1e-9));
    // saturate on the 1-d cone: sup phi(x)/x = 1, approached at 0+.
    const double bs = phi_operator_bound(PhiSpec::scalar1d("saturate"), Cone::orthant(1),
                                         Norm::euclidean(), 4000, 1);
    CHECK(bs <= 1.0 + 1e-12);
    CHECK(bs >= 0.99);
}

TEST_CASE("phi maps the cone into itself") {
    Mat M(2, 2);
    M << 2, 1, 0, 3;  // nonnegative entries map the orthant into itself
    CHECK(phi_maps_cone(PhiSpec::linear(M), Cone::orthant(2), Norm::euclidean(), 500, 9));
    Mat Mb(2, 2);
    Mb << 1, 0, -2, 1;
    CHECK_FALSE(phi_maps_cone(PhiSpec::linear(Mb), Cone::orthant(2), Norm::euclidean(), 500, 9));
}

TEST_CASE("psi construction") {
    SECTION("1-d saturate: psi(t) = t/(1+t) exactly") {
        for (double t : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            const auto r = psi_from_phi(PhiSpec::scalar1d("saturate"), Cone::orthant(1),
                                        Norm::euclidean(), t, 100, 1);
            CHECK(r.value == Catch::Approx(t / (1.0 + t)).margin(1e-15));
            CHECK(r.method == "closed-form");
        }
    }
    SECTION("linear scaling: psi(t) = 3t for diag(2,3)") {
        Mat M(2, 2);
        M << 2, 0, 0, 3;
        for (double t : {0.5, 2.0}) {
            const auto r = psi_from_phi(PhiSpec::linear(M), Cone::orthant(2), Norm::euclidean(),
                                        t, 4000, 1);
            CHECK(r.value == Catch::Approx(3.0 * t).epsilon(1e-3));
        }
    }
    SECTION("radial: psi(t) = g(t)") {
        const auto r = psi_from_phi(PhiSpec::radial("saturate"), Cone::lorentz(3),
                                    Norm::euclidean(), 2.0, 100, 1);
        CHECK(r.value == Catch::Approx(2.0 / 3.0).margin(1e-15));
    }
    SECTION("t = 0 gives 0") {
        CHECK(psi_from_phi(PhiSpec::radial("saturate"), Cone::lorentz(3), Norm::euclidean(), 0.0,
                           10, 1)
                  .value == 0.0);
    }
    SECTION("psi(t) <= t * operator bound") {
        Mat M(3, 3);
        M << 1, 0.5, 0, 0, 1, 0, 0.2, 0, 0.7;
        const PhiSpec phi = PhiSpec::linear(M);
        const Cone P = Cone::orthant(3);
        const double bound = phi_operator_bound(phi, P, Norm::euclidean(), 4000, 5);
        for (double t : {0.1, 1.0, 10.0}) {
            const auto r = psi_from_phi(phi, P, Norm::euclidean(), t, 4000, 5);
            CHECK(r.value <= t * bound + 1e-6);
        }
    }
}
