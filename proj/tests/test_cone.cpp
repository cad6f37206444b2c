#include <catch_amalgamated.hpp>

#include "conemetric/cone.hpp"
#include "conemetric/norm.hpp"
#include "conemetric/rng.hpp"

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

TEST_CASE("orthant membership and order") {
    const Cone P = Cone::orthant(3);
    CHECK(P.contains(v3(0, 1, 2)));
    CHECK(P.contains(v3(-1e-10, 0, 0)));
    CHECK_FALSE(P.contains(v3(-1e-3, 0, 0)));
    CHECK(P.leq(v3(1, 1, 1), v3(2, 1, 1)));
    CHECK_FALSE(P.leq(v3(1, 1, 1), v3(2, 0.5, 1)));
    CHECK(P.contains_interior(v3(1, 1, 1), 0.5));
    CHECK_FALSE(P.contains_interior(v3(1, 0, 1), 0.5));
}

TEST_CASE("lorentz membership uses the last coordinate as height") {
    const Cone L = Cone::lorentz(3);
    CHECK(L.contains(v3(3, 4, 5)));          // ||(3,4)|| = 5
    CHECK_FALSE(L.contains(v3(3, 4, 4.9)));
    CHECK(L.contains(v3(0, 0, 0)));
    CHECK(L.contains_interior(v3(0.1, 0, 1), 0.5));
    CHECK_FALSE(L.contains_interior(v3(1, 0, 1), 0.5));
    CHECK_THROWS_AS(Cone::lorentz(1), InputError);
}

TEST_CASE("lorentz projection closed form") {
    const Cone L = Cone::lorentz(2);
    // (1, 0) projects to the midpoint of the boundary ray: (0.5, 0.5).
    const Vec p = L.project(v2(1, 0));
    CHECK(p[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(p[1] == Catch::Approx(0.5).margin(1e-12));
    // Points in the polar cone project to 0.
    CHECK(L.project(v2(0, -1)).norm() == Catch::Approx(0.0).margin(1e-12));
    // Interior points are fixed.
    CHECK((L.project(v2(0.1, 1)) - v2(0.1, 1)).norm() == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("projection satisfies the Moreau/KKT conditions on every family") {
    Mat G(2, 2);
    G << 1, -1, 0, 2;  // obtuse cone
    Mat A(3, 3);
    A << 1, 0, 0, 0, 1, 0, 1, 1, 1;
    const std::vector<Cone> cones = {Cone::orthant(3), Cone::lorentz(3), Cone::generators(G),
                                     Cone::halfspaces(A)};
    SplitRng rng(99);
    for (const Cone& P : cones) {
        for (int s = 0; s < 50; ++s) {
            Vec v(P.dim());
            for (int i = 0; i < P.dim(); ++i) v[i] = rng.uniform(-2.0, 2.0);
            const Vec p = P.project(v);
            REQUIRE(P.contains(p, 1e-6));
            // <p, v - p> = 0 and <q, v - p> <= 0 for all q in P.
            CHECK(std::abs(p.dot(v - p)) < 1e-7);
            SplitRng qr(7);
            for (int t = 0; t < 10; ++t)
                CHECK(P.sample(qr).dot(v - p) <= 1e-7);
            // Idempotence.
            CHECK((P.project(p) - p).norm() < 1e-6);
        }
    }
}

TEST_CASE("generator cone validation") {
    Mat flat(2, 2);
    flat << 1, 2, 1, 2;  // rank 1
    CHECK_THROWS_AS(Cone::generators(flat), StructuralError);
    Mat line(2, 2);
    line << 1, -1, 0, 0;  // contains a line -> not pointed
    CHECK_THROWS_AS(Cone::generators(line), StructuralError);
    Mat ok(2, 2);
    ok << 1, 0, 0, 1;
    const Cone P = Cone::generators(ok);
    CHECK(P.contains(v2(1, 1)));
    CHECK_FALSE(P.contains(v2(-1, 1)));
}

TEST_CASE("halfspace cone validation") {
    Mat bad(2, 2);
    bad << 1, 0, -1, 0;  // x >= 0 and x <= 0: no interior
    CHECK_THROWS_AS(Cone::halfspaces(bad), StructuralError);
    Mat A(2, 2);
    A << 1, 0, -1, 2;  // x >= 0, 2y >= x
    const Cone P = Cone::halfspaces(A);
    CHECK(P.contains(v2(1, 1)));
    CHECK(P.contains(v2(0, 1)));
    CHECK_FALSE(P.contains(v2(1, 0.2)));
}

TEST_CASE("duality: orthant and lorentz are self-dual, polyhedral transposes") {
    CHECK(Cone::orthant(2).dual().kind() == ConeKind::Orthant);
    CHECK(Cone::lorentz(3).dual().kind() == ConeKind::Lorentz);
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    const Cone P = Cone::generators(G);
    const Cone D = P.dual();
    CHECK(D.kind() == ConeKind::Halfspaces);
    // <x, y> >= 0 for all x in P, y in P*.
    SplitRng rng(5);
    for (int s = 0; s < 100; ++s) CHECK(P.sample(rng).dot(D.sample(rng)) >= -1e-9);
    // Bidual equals the original cone on samples.
    const Cone DD = D.dual();
    SplitRng rng2(6);
    for (int s = 0; s < 100; ++s) {
        CHECK(DD.contains(P.sample(rng2), 1e-7));
    }
}

TEST_CASE("generator cone membership agrees with the projection distance") {
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    const Cone P = Cone::generators(G);
    CHECK(P.contains(v2(1, 0)));
    CHECK(P.contains(v2(-1, 2)));
    CHECK(P.contains(v2(0, 1)));     // interior mix
    CHECK_FALSE(P.contains(v2(0, -1)));
    CHECK_FALSE(P.contains(v2(-1, 0)));
    // Distance to the cone for (0, -1) is 1: projection is the origin.
    CHECK((P.project(v2(0, -1))).norm() < 1e-7);
}

TEST_CASE("obtuse cone projection fixture") {
    // P = cone{(1,0), (-1,2)}; v = (-1,2) in P. proj_P(-v) = (1,0) by
    // direct KKT: -v = (1,-2), <(1,0),(1,-2)-(1,0)> = 0, and both
    // generators have nonpositive inner product with the residual.
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    const Cone P = Cone::generators(G);
    const Vec p = P.project(v2(1, -2));
    CHECK(p[0] == Catch::Approx(1.0).margin(1e-7));
    CHECK(p[1] == Catch::Approx(0.0).margin(1e-7));
}

TEST_CASE("norm values and factories") {
    const Vec v = v2(3, 4);
    CHECK(Norm::euclidean()(v) == Catch::Approx(5.0));
    CHECK(Norm::l1()(v) == Catch::Approx(7.0));
    CHECK(Norm::linf()(v) == Catch::Approx(4.0));
    Vec w = v2(4, 0.25);
    CHECK(Norm::weighted(w)(v) == Catch::Approx(std::sqrt(36.0 + 4.0)));
    CHECK_THROWS_AS(Norm::weighted(v2(1, -1)), InputError);
}

TEST_CASE("monotonicity certification and counterexample") {
    // Euclidean on the orthant is monotone.
    CHECK(is_norm_monotone_on_cone(Cone::orthant(2), Norm::euclidean(), 500, 3));
    CHECK(is_norm_monotone_on_cone(Cone::orthant(3), Norm::l1(), 500, 3));
    CHECK(is_norm_monotone_on_cone(Cone::lorentz(3), Norm::euclidean(), 500, 3));
    // On the obtuse cone the Euclidean norm is NOT monotone:
    // a = (-1,2) <= b = (0,2) since b - a = (1,0) in P, but
    // ||a|| = sqrt(5) > 2 = ||b||.
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    const Cone P = Cone::generators(G);
    CHECK(P.leq(v2(-1, 2), v2(0, 2)));
    CHECK(Norm::euclidean()(v2(-1, 2)) > Norm::euclidean()(v2(0, 2)));
    CHECK_FALSE(is_norm_monotone_on_cone(P, Norm::euclidean(), 500, 3));
}

TEST_CASE("normality constant estimates") {
    // Orthant with Euclidean norm is normal with constant 1.
    CHECK(normality_constant_estimate(Cone::orthant(3), Norm::euclidean(), 2000, 11) ==
          Catch::Approx(1.0).margin(1e-12));
    // Obtuse cone: the pair above already forces k >= sqrt(5)/2.
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    const double k = normality_constant_estimate(Cone::generators(G), Norm::euclidean(), 2000, 11);
    CHECK(k >= std::sqrt(5.0) / 2.0 - 1e-3);
}

TEST_CASE("samples land in the cone, interior samples strictly") {
    Mat G(3, 4);
    G << 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1;
    Mat A(2, 2);
    A << 1, 0, -1, 2;
    const std::vector<Cone> cones = {Cone::orthant(2), Cone::lorentz(3), Cone::generators(G),
                                     Cone::halfspaces(A)};
    for (const Cone& P : cones) {
        SplitRng rng(17);
        for (int s = 0; s < 200; ++s) CHECK(P.contains(P.sample(rng), 1e-8));
        const Vec z = P.sample_interior(rng);
        CHECK(P.contains(z, 1e-9));
        CHECK(P.contains_interior(z, 1e-6));
    }
}
