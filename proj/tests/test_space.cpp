#include <catch_amalgamated.hpp>

#include "conemetric/json_io.hpp"
#include "conemetric/phi.hpp"
#include "conemetric/space.hpp"

using namespace cmk;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

/// Two points at cone distance e, the smallest nontrivial valid space.
FiniteConeMetricSpace two_point(const Vec& e, Cone cone) {
    std::vector<std::vector<Vec>> D{{Vec::Zero(e.size()), e}, {e, Vec::Zero(e.size())}};
    return {{"a", "b"}, std::move(cone), Norm::euclidean(), std::move(D)};
}

/// 1-dimensional cone space carrying an ordinary metric table.
FiniteConeMetricSpace scalar_space(const Mat& d) {
    const int n = static_cast<int>(d.rows());
    std::vector<std::vector<Vec>> D(static_cast<size_t>(n),
                                    std::vector<Vec>(static_cast<size_t>(n), Vec::Zero(1)));
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        labels.push_back("x" + std::to_string(i));
        for (int j = 0; j < n; ++j) D[static_cast<size_t>(i)][static_cast<size_t>(j)][0] = d(i, j);
    }
    return {std::move(labels), Cone::orthant(1), Norm::euclidean(), std::move(D)};
}

}  // namespace

TEST_CASE("validation accepts a correct space") {
    const auto s = two_point(v2(1, 2), Cone::orthant(2));
    const auto rep = validate_axioms(s);
    CHECK(rep.valid);
    CHECK(rep.violations.empty());
    CHECK(rep.checked_triples == 8);
}

TEST_CASE("validation flags each axiom") {
    SECTION("membership") {
        auto s = two_point(v2(1, -1), Cone::orthant(2));
        const auto rep = validate_axioms(s);
        REQUIRE_FALSE(rep.valid);
        CHECK(rep.violations.front().axiom == "membership");
    }
    SECTION("symmetry") {
        auto s = two_point(v2(1, 1), Cone::orthant(2));
        s.D[0][1][0] = 2.0;
        bool found = false;
        for (const auto& v : validate_axioms(s).violations) found |= v.axiom == "symmetry";
        CHECK(found);
    }
    SECTION("diagonal") {
        auto s = two_point(v2(1, 1), Cone::orthant(2));
        s.D[0][0] = v2(0.5, 0);
        bool found = false;
        for (const auto& v : validate_axioms(s).violations) found |= v.axiom == "diagonal";
        CHECK(found);
    }
    SECTION("identity of indiscernibles") {
        auto s = two_point(v2(0, 0), Cone::orthant(2));
        bool found = false;
        for (const auto& v : validate_axioms(s).violations) found |= v.axiom == "identity";
        CHECK(found);
    }
    SECTION("triangle") {
        Mat d(3, 3);
        d << 0, 1, 5, 1, 0, 1, 5, 1, 0;  // d(0,2) > d(0,1) + d(1,2)
        const auto rep = validate_axioms(scalar_space(d));
        REQUIRE_FALSE(rep.valid);
        bool found = false;
        for (const auto& v : rep.violations) found |= v.axiom == "triangle";
        CHECK(found);
    }
}

TEST_CASE("generated spaces always validate") {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 999ULL}) {
        GenSpec spec;
        spec.seed = seed;
        spec.n_points = 5;
        spec.cone = Cone::lorentz(3);
        spec.interior_directions = 2;
        const auto s = generate_random_space(spec);
        CHECK(validate_axioms(s).valid);
    }
}

TEST_CASE("generation is deterministic in the seed") {
    GenSpec spec;
    spec.seed = 42;
    spec.n_points = 6;
    spec.cone = Cone::orthant(3);
    const auto a = generate_random_space(spec);
    const auto b = generate_random_space(spec);
    CHECK(space_to_json(a).dump() == space_to_json(b).dump());
    spec.seed = 43;
    CHECK(space_to_json(a).dump() != space_to_json(generate_random_space(spec)).dump());
}

TEST_CASE("metric transforms preserving the axioms") {
    Mat d(3, 3);
    d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    const auto s = scalar_space(d);

    SECTION("identity via scale 1") {
        const auto t = transform_metric(s, PhiSpec::scalar1d("scale", 1.0));
        CHECK(t.D[0][1][0] == Catch::Approx(1.0));
    }
    SECTION("doubling") {
        const auto t = transform_metric(s, PhiSpec::scalar1d("scale", 2.0));
        CHECK(t.D[0][2][0] == Catch::Approx(4.0));
        CHECK(validate_axioms(t).valid);
    }
    SECTION("saturate x/(1+x) is concave increasing, stays a metric") {
        const auto t = transform_metric(s, PhiSpec::scalar1d("saturate"));
        CHECK(t.D[0][1][0] == Catch::Approx(0.5));
        CHECK(t.D[0][2][0] == Catch::Approx(2.0 / 3.0));
        CHECK(validate_axioms(t).valid);
    }
}

TEST_CASE("breaking transform raises with a witness") {
    Mat d(3, 3);
    d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    const auto s = scalar_space(d);
    // x -> max(x - 0.9, 0)-style break via a linear map is not available
    // on a 1-d cone; use a scalar cap below the largest entry combined
    // with scale to break the triangle inequality? cap keeps it. Instead
    // scale by 0 collapses distinct points -> identity violation.
    CHECK_THROWS_AS(transform_metric(s, PhiSpec::scalar1d("scale", 0.0)), TransformError);
    try {
        transform_metric(s, PhiSpec::scalar1d("scale", 0.0));
    } catch (const TransformError& e) {
        CHECK_FALSE(e.witness.empty());
    }
}

TEST_CASE("scalar transforms reject multi-dimensional cones") {
    const auto s = two_point(v2(1, 2), Cone::orthant(2));
    CHECK_THROWS_AS(transform_metric(s, PhiSpec::scalar1d("saturate")), InputError);
}

TEST_CASE("linear transform on a 2-d cone") {
    const auto s = two_point(v2(1, 2), Cone::orthant(2));
    Mat M(2, 2);
    M << 2, 0, 0, 3;
    const auto t = transform_metric(s, PhiSpec::linear(M));
    CHECK(t.D[0][1][0] == Catch::Approx(2.0));
    CHECK(t.D[0][1][1] == Catch::Approx(6.0));
    CHECK(validate_axioms(t).valid);
}

TEST_CASE("self map validation") {
    const auto s = two_point(v2(1, 2), Cone::orthant(2));
    CHECK_THROWS_AS(require_tabulated_on(SelfMap::tabulated({0, 2}), s), InputError);
    CHECK_THROWS_AS(require_tabulated_on(SelfMap::tabulated({0}), s), InputError);
    CHECK_NOTHROW(require_tabulated_on(SelfMap::tabulated({1, 0}), s));
}
