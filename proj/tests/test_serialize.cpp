#include <doctest.h>

#include "diraclab/serialize.hpp"
#include "fixtures.hpp"

using namespace diraclab;
using namespace fixtures;

namespace {

Json round_trip(const Json& j) { return parse_json(to_text(j)); }

}  // namespace

TEST_CASE("scalars and matrices survive exactly") {
    Mat m{{Q(1, 3), Q(-7, 2)}, {Q(0), Q(123456789, 987654322)}};
    CHECK(mat_from_json(round_trip(to_json(m))) == m);
    CHECK(mat_from_json(to_json(Mat(0, 3))) == Mat(0, 3));
    ThreeForm t(4);
    t.set(0, 2, 3, Q(-5, 3));
    t.set(1, 2, 3, Q(2));
    CHECK(three_form_from_json(round_trip(to_json(t))) == t);
    auto l = graph_two_form(Mat{{0, Q(1, 2)}, {Q(-1, 2), 0}});
    CHECK(dirac_from_json(round_trip(to_json(l))) == l);
    CHECK_THROWS_AS(dirac_from_json(to_json(DiracFiber{1, Subspace::full(2)})), SchemaError);
    Json bad = to_json(m);
    bad["data"][0] = "1/0x";
    CHECK_THROWS_AS(mat_from_json(bad), SchemaError);
    bad = to_json(m);
    bad["rows"] = 3;
    CHECK_THROWS_AS(mat_from_json(bad), SchemaError);
}

TEST_CASE("standard fixtures round-trip dump, load and verify identically") {
    for (const char* name : {"pair-groupoid", "cotangent-circle", "circle-hamiltonian"}) {
        auto s = build_scenario(ScenarioSpec{name, {}, 3, Samples{}});
        for (const auto& g : s.bundles) {
            std::string text = to_text(dump_bundle(g));
            auto back = load_bundle(parse_json(text));
            CHECK(to_text(dump_bundle(back)) == text);
            CHECK(content_hash(back) == content_hash(g));
            CHECK(qs_check(back).to_json() == qs_check(g).to_json());
        }
        for (const auto& d : s.data) {
            std::string text = to_text(dump_datum(d));
            auto back = load_datum(parse_json(text));
            CHECK(to_text(dump_datum(back)) == text);
            CHECK(is_coisotropic(back).to_json() == is_coisotropic(d).to_json());
        }
    }
}

TEST_CASE("bundle references are checked") {
    auto g = pair_fixture(omega_std(1));
    CoisotropicDatum d{g, g, identity_morphism(g), {induced_dirac(g.objects[0])}};
    Json j = dump_datum(d);
    // C and G are the same bundle, stored once
    CHECK(j["bundles"].size() == 1);
    CHECK(j["C"] == j["G"]);
    Json tampered = j;
    std::string h = j["C"];
    tampered["bundles"][h]["objects"][0]["sigma"]["data"][0] = "5";
    CHECK_THROWS_AS(load_datum(tampered), SchemaError);
    Json dangling = j;
    dangling["G"] = "00";
    CHECK_THROWS_AS(load_datum(dangling), SchemaError);
    Json wrong = j;
    wrong["schema"] = "cd-v0";
    CHECK_THROWS_AS(load_datum(wrong), SchemaError);
    CHECK_THROWS_AS(load_bundle(Json{{"schema", "gfb-v1"}}), SchemaError);
    CHECK_THROWS_AS(parse_json("{\"name\": "), SchemaError);
}

TEST_CASE("Morita equivalence data round trip") {
    auto g = pair_fixture(omega_std(1));
    auto p = point_groupoid();
    auto id = identity_morphism(g);
    MorphismFiber tp{{0}, {Mat(0, 2)}, {Mat(0, 2)}, {0, 0}, {Mat(0, 4), Mat(0, 4)}};
    NatTransFiber th1{{0}, {g.arrows[0].u_star}};
    NatTransFiber th2{{0}, {Mat(0, 2)}};
    MoritaEquivalenceDatum d{g, g, p, g, g, p, id, tp, id, id, tp, id, identity_morphism(p), th1, th2,
                             {omega_std(1)}, {ThreeForm(2)}, {}, true};
    std::string text = to_text(dump_morita(d));
    auto back = load_morita(parse_json(text));
    CHECK(to_text(dump_morita(back)) == text);
    CHECK(symplectic_morita_check(back).to_json() == symplectic_morita_check(d).to_json());
    CHECK(back.strict);
    CHECK(back.gamma[0] == omega_std(1));
}

TEST_CASE("reduced fibers and scenario files") {
    auto h = build_circle_hamiltonian(2, Q(1, 2), 3);
    auto red = run_reduction(h, level_datum(h, Q(1, 2)));
    Json df = dump_reduction(red);
    CHECK(df["schema"] == "df-v1");
    CHECK(df["status"] == "pass");
    REQUIRE(df["points"].size() == red.L.size());
    for (std::size_t p = 0; p < red.L.size(); ++p) {
        CHECK(df["points"][p]["match"] == true);
        CHECK(dirac_from_json(df["points"][p]["L"]) == red.L[p]);
    }
    CHECK(to_text(dump_reduction(red)) == to_text(df));

    auto spec = scenario_from_json(parse_json(R"({"name": "circle-hamiltonian", "params": {"n": 2, "level": "1/2"},
                                                  "seed": 4, "samples": {"objects": 5}})"));
    CHECK(spec.params.at("n") == "2");
    CHECK(spec.seed == 4);
    CHECK(spec.samples.objects == 5);
    CHECK(spec.samples.arrows == Samples{}.arrows);
    CHECK(scenario_from_json(to_json(spec)).params == spec.params);
    CHECK_THROWS_AS(scenario_from_json(parse_json(R"({"params": {}})")), SchemaError);
    CHECK_THROWS_AS(scenario_from_json(parse_json(R"({"name": "x", "samples": {"objects": 0}})")), SchemaError);
    CHECK_THROWS_AS(scenario_from_json(parse_json(R"({"name": "x", "seed": "one"})")), SchemaError);
}
