#include <catch_amalgamated.hpp>

#include "conemetric/json_io.hpp"
#include "conemetric/space.hpp"

using namespace cmk;

TEST_CASE("cone serialization round trips") {
    Mat G(2, 2);
    G << 1, -1, 0, 2;
    for (const Cone& c : {Cone::orthant(3), Cone::lorentz(2), Cone::generators(G),
                          Cone::halfspaces(G.transpose())}) {
        const Cone back = cone_from_json(cone_to_json(c));
        CHECK(back.kind() == c.kind());
        CHECK(back.dim() == c.dim());
        CHECK(cone_to_json(back).dump() == cone_to_json(c).dump());
    }
    CHECK_THROWS_AS(cone_from_json(Json{{"type", "moebius"}, {"dim", 2}}), InputError);
}

TEST_CASE("norm serialization round trips") {
    Vec w(2);
    w << 2.0, 0.5;
    for (const Norm& n : {Norm::euclidean(), Norm::l1(), Norm::linf(), Norm::weighted(w)}) {
        const Norm back = norm_from_json(norm_to_json(n));
        CHECK(back.kind() == n.kind());
        CHECK(norm_to_json(back).dump() == norm_to_json(n).dump());
    }
}

TEST_CASE("space round trip is bit-exact") {
    GenSpec spec;
    spec.seed = 17;
    spec.n_points = 5;
    spec.cone = Cone::lorentz(3);
    spec.interior_directions = 2;
    const auto s = generate_random_space(spec);
    const Json j = space_to_json(s);
    const auto back = space_from_json(j);
    // Double values must survive the JSON round trip without any drift:
    // the serializer uses shortest-round-trip formatting.
    for (int i = 0; i < s.size(); ++i)
        for (int k = 0; k < s.size(); ++k)
            CHECK((back.D[static_cast<size_t>(i)][static_cast<size_t>(k)] -
                   s.D[static_cast<size_t>(i)][static_cast<size_t>(k)])
                      .lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(space_to_json(back).dump() == j.dump());
}

TEST_CASE("map serialization") {
    const SelfMap t = SelfMap::tabulated({2, 0, 1});
    const SelfMap tb = map_from_json(map_to_json(t));
    CHECK(tb.images == t.images);
    Mat M(2, 2);
    M << 0.5, 0, 0.25, 0.5;
    Vec b(2);
    b << 1, -1;
    const SelfMap a = SelfMap::affine(M, b);
    const SelfMap ab = map_from_json(map_to_json(a));
    CHECK((ab.M - a.M).norm() == 0.0);
    CHECK((ab.b - a.b).norm() == 0.0);
    CHECK_THROWS_AS(map_from_json(Json{{"type", "quadratic"}}), InputError);
}

TEST_CASE("malformed space documents raise input errors") {
    Json j;
    j["labels"] = {"a", "b"};
    j["cone"] = cone_to_json(Cone::orthant(2));
    j["norm"] = norm_to_json(Norm::euclidean());
    j["D"] = Json::array({Json::array({Json::array({0.0, 0.0})})});  // not square
    CHECK_THROWS_AS(space_from_json(j), InputError);
    j["D"] = Json::array(
        {Json::array({Json::array({0.0, 0.0}), Json::array({1.0})}),   // ragged dim
         Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 0.0})})});
    CHECK_THROWS_AS(space_from_json(j), InputError);
}

TEST_CASE("missing files and parse errors") {
    CHECK_THROWS_AS(load_json_file("/nonexistent/path.json"), InputError);
}
