#include <doctest.h>

#include "diraclab/scenarios.hpp"
#include "fixtures.hpp"

using namespace diraclab;
using namespace fixtures;

namespace {

// Marsden-Weinstein at a level point of C^2 written out by hand: the
// horizontal plane z^perp meet (Jz)^perp, omega restricted there, moved to
// the chart by the inverse of the 2 x 2 matrix pi_* B.
Mat mw_oracle(const Vec& z, const Mat& pi_star) {
    Vec jz{-z[2], -z[3], z[0], z[1]};
    Mat normals = Mat::from_rows(4, {z, jz});
    Mat b = kernel(normals).columns();
    REQUIRE(b.cols() == 2);
    Mat w = b.transpose() * omega_std(2) * b;
    Mat pb = pi_star * b;
    Q det = pb(0, 0) * pb(1, 1) - pb(0, 1) * pb(1, 0);
    REQUIRE(det != 0);
    Mat inv{{pb(1, 1) / det, -pb(0, 1) / det}, {-pb(1, 0) / det, pb(0, 0) / det}};
    return inv.transpose() * w * inv;
}

// du ^ dv / (1 + |w|^2)^2 in the chart w = z2 / z1 at |z|^2 = 1.
Mat fubini_study(const Vec& w) {
    Q r = 1 + w[0] * w[0] + w[1] * w[1];
    Q f = 1 / (r * r);
    return Mat{{0, f}, {-f, 0}};
}

Q level_of(const Vec& z) { return dot(z, z) / 2; }

}  // namespace

TEST_CASE("pair groupoid builder") {
    auto g = build_pair_groupoid(2, omega_std(1));
    CHECK(g.objects.size() == 2);
    CHECK(g.arrows.size() == 4);
    CHECK(g.pairs.size() == 8);
    auto rep = qs_check(g);
    INFO(rep.to_text());
    CHECK(rep.passed());

    auto g4 = build_pair_groupoid(4, omega_std(2), 1);
    CHECK(qs_check(g4).passed());
    CHECK(induced_dirac(g4.objects[0]) == graph_two_form(omega_std(2)));

    CHECK(qs_check(build_pair_groupoid(0, Mat(0, 0))).passed());
    CHECK_THROWS_AS(build_pair_groupoid(2, Mat(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(build_pair_groupoid(2, Mat{{1, 0}, {0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(build_pair_groupoid(3, omega_std(1)), std::invalid_argument);

    auto bad = g;
    bad.objects[1].sigma(0, 1) += Q(1, 3);
    auto r = qs_check(bad);
    CHECK(r.has_failure("qs.lemma.item1"));
    CHECK_FALSE(r.find("qs.lemma.item1")->witnesses.empty());
}

TEST_CASE("rational rotations and the projective chart") {
    auto r = half_angle_rotation(Q(1, 2));
    CHECK(r.c == Q(3, 5));
    CHECK(r.s == Q(4, 5));
    CHECK(r * half_angle_rotation(Q(-1, 2)) == Rotation{1, 0});
    for (Q t : {Q(0), Q(2), Q(-3, 7)}) {
        auto q = half_angle_rotation(t);
        CHECK(q.c * q.c + q.s * q.s == 1);
        Mat m = rotation_matrix(q, 2);
        CHECK(m.transpose() * omega_std(2) * m == omega_std(2));
    }

    auto chart = projective_chart(2);
    CHECK(chart.dim == 2);
    Vec z{Q(3, 5), Q(0), Q(0), Q(4, 5)};  // z1 = 3/5, z2 = 4i/5
    CHECK(chart.point(z) == Vec{Q(0), Q(4, 3)});
    Vec jz{-z[2], -z[3], z[0], z[1]};
    Mat d = chart.differential(z);
    CHECK(is_zero(d * jz));
    Mat rot = rotation_matrix(r, 2);
    CHECK(chart.point(rot * z) == chart.point(z));
    CHECK(chart.differential(rot * z) * rot == d);
    // difference quotient along a few directions, to within eps
    Q eps(1, 1000000);
    for (const Vec& v : {Vec{1, 0, 0, 0}, Vec{0, 1, 0, 0}, Vec{0, 0, 1, 0}, Vec{0, 0, 0, 1}, Vec{1, -2, 3, 1}}) {
        Vec q = chart.point(z + eps * v) - chart.point(z);
        Vec lin = d * v;
        for (std::size_t i = 0; i < 2; ++i) CHECK(abs(q[i] / eps - lin[i]) < Q(1, 1000));
    }
    CHECK_THROWS_AS(chart.point(Vec{0, 1, 0, 0}), std::domain_error);
    CHECK(projective_chart(1).dim == 0);
}

TEST_CASE("rational points on spheres") {
    auto p = sphere_point(Q(7, 3), 4);
    REQUIRE(p);
    CHECK(dot(*p, *p) == Q(7, 3));
    auto c = sphere_point(Q(1), 2);
    REQUIRE(c);
    CHECK(dot(*c, *c) == 1);
    CHECK_FALSE(sphere_point(Q(3), 2));
    CHECK(sphere_point(Q(25, 4), 2) == Vec{Q(5, 2), Q(0)});
    CHECK(sphere_point(Q(0), 2) == Vec(2));
    CHECK_THROWS_AS(build_circle_hamiltonian(1, Q(3, 2)), std::invalid_argument);
    CHECK_THROWS_AS(build_circle_hamiltonian(2, Q(-1)), std::invalid_argument);
}

TEST_CASE("circle action builder") {
    auto h = build_circle_hamiltonian(2, Q(1, 2), 8, 3);
    // eight orbits of three points each, and the origin
    CHECK(h.points.size() == 25);
    CHECK(h.levels == std::vector<Q>{Q(1, 2), Q(0)});
    for (const auto& z : h.points) CHECK((level_of(z) == Q(1, 2) || is_zero(z)));
    CHECK(qs_check(h.datum.G).passed());
    auto mc = morphism_check(h.datum.C, h.datum.G, h.datum.c);
    INFO(mc.to_text());
    CHECK(mc.passed());
    // the same seed gives the same samples
    CHECK(build_circle_hamiltonian(2, Q(1, 2), 8, 3).points == h.points);
    CHECK(build_circle_hamiltonian(2, Q(1, 2), 8, 4).points != h.points);
}

TEST_CASE("Hamiltonian actions as coisotropic projections") {
    for (std::size_t n : {1, 2}) {
        auto h = build_circle_hamiltonian(n, Q(1, 2), 4);
        auto rep = hamiltonian_check(h);
        INFO(rep.to_text());
        CHECK(rep.passed());
        CHECK(is_coisotropic(h.datum).passed());
        for (std::size_t x = 0; x < h.points.size(); ++x) {
            auto nm = nondeg_map(h.datum, x);
            // c_A is the identity, so the datum is strong even at the origin
            CHECK(nm.surjective);
            CHECK(nm.injective);
        }
    }

    auto h = build_circle_hamiltonian(1, Q(1, 2), 2);
    auto flat = h;
    for (auto& l : flat.datum.L) l = tangent_dirac(2);
    auto rf = hamiltonian_check(flat);
    CHECK(rf.has_failure("ham.action_compat"));
    CHECK(rf.has_failure("ham.nondegenerate"));
    CHECK(rf.find("ham.coisotropic_equivalence")->ok());
    CHECK_FALSE(is_coisotropic(flat.datum).passed());

    // compatible only up to the wrong multiple of omega, nondegenerate throughout
    auto twice = h;
    for (auto& l : twice.datum.L) l = graph_two_form(2 * omega_std(1));
    auto rt = hamiltonian_check(twice);
    CHECK(rt.has_failure("ham.action_compat"));
    CHECK(rt.find("ham.nondegenerate")->ok());
    CHECK(rt.find("ham.coisotropic_equivalence")->ok());
    CHECK_FALSE(is_coisotropic(twice.datum).passed());
}

TEST_CASE("reduction of C at level 1/2 is a point") {
    auto h = build_circle_hamiltonian(1, Q(1, 2), 3);
    auto red = run_reduction(h, level_datum(h, Q(1, 2)));
    INFO(red.report.to_text());
    CHECK(red.report.passed());
    CHECK_FALSE(red.report.hypothesis_violated());
    REQUIRE(red.L.size() == 1);
    CHECK(red.L[0].n == 0);
    CHECK(red.chart_points == std::vector<Vec>{Vec{}});
}

TEST_CASE("reduction of C^2 at level 1/2 against Marsden-Weinstein") {
    auto h = build_circle_hamiltonian(2, Q(1, 2), 10, 5);
    auto red = run_reduction(h, level_datum(h, Q(1, 2)));
    INFO(red.report.to_text());
    CHECK(red.report.passed());
    CHECK_FALSE(red.report.hypothesis_violated());
    REQUIRE(red.L.size() >= 8);
    REQUIRE(red.L.size() == red.chart_points.size());
    CHECK(red.report.find("reduce.locally_free")->evaluated == 30);
    CHECK(red.report.find("reduce.oracle")->evaluated == red.L.size());
    CHECK(red.report.find("intersection/strong.transverse")->ok());

    // one level point per chart point, recovered from the product fibers
    std::vector<bool> seen(red.L.size(), false);
    auto chart = projective_chart(2);
    for (const auto& f : red.product.fibers) {
        const Vec& z = h.points[f.at.x2];
        Vec w = chart.point(z);
        std::size_t p = 0;
        while (p < red.chart_points.size() && red.chart_points[p] != w) ++p;
        REQUIRE(p < red.chart_points.size());
        if (seen[p]) continue;
        seen[p] = true;
        Mat fs = fubini_study(w);
        CHECK(mw_oracle(z, chart.differential(z)) == fs);
        CHECK(red.L[p] == graph_two_form(fs));
        CHECK(kernel_of(red.L[p]).dim() == 0);
    }
    for (bool s : seen) CHECK(s);
}

TEST_CASE("a fixed level is not a chart") {
    auto h = build_circle_hamiltonian(1, Q(0));
    CHECK(h.points.size() == 1);
    auto red = run_reduction(h, level_datum(h, Q(0)));
    CHECK(red.report.hypothesis_violated());
    CHECK(red.report.find("reduce.chart")->status == Status::hypothesis_violated);
    CHECK(red.L.empty());
    CHECK_THROWS_AS(level_datum(h, Q(5)), std::invalid_argument);
}

TEST_CASE("reduction at another level and a supplied level datum") {
    auto h = build_circle_hamiltonian(2, Q(1), 4, 2);
    auto level = level_datum(h, Q(1));
    CHECK(is_coisotropic(level).passed());
    auto red = run_reduction(h, level);
    INFO(red.report.to_text());
    CHECK(red.report.passed());
    // at |z|^2 = 2 the form scales by 2
    auto chart = projective_chart(2);
    for (std::size_t p = 0; p < red.L.size(); ++p) {
        Mat f = fubini_study(red.chart_points[p]);
        CHECK(red.L[p] == graph_two_form(Q(2) * f));
    }
}

TEST_CASE("so(3)* and orbit restrictions") {
    RationalRng rng(4);
    CHECK(involutivity_check(build_lie_poisson_so3(), sample_points(rng, 3, 20)).passed());

    auto h = build_circle_hamiltonian(1, Q(1, 2), 1);
    auto point_orbit = build_orbit_restriction(h.datum.G, OrbitSample{{0}, {Mat(1, 0)}, {0, 1, 2}});
    CHECK(point_orbit.L[0] == graph_two_form(Mat(0, 0)));
    CHECK(is_coisotropic(point_orbit).passed());

    Mat b{{0, 2}, {-2, 0}};
    auto g = build_pair_groupoid(2, b);
    auto full = build_orbit_restriction(g, OrbitSample{{0, 1}, {Mat::identity(2), Mat::identity(2)}, {0, 1, 2, 3}});
    CHECK(full.L[0] == graph_two_form(b));
    CHECK(full.L[1] == graph_two_form(b));
    CHECK(is_coisotropic(full).passed());
}

TEST_CASE("every catalog scenario passes its suites") {
    for (const auto& e : scenario_catalog()) {
        ScenarioSpec spec{e.name, {}, 7, Samples{}};
        auto s = build_scenario(spec);
        CHECK_FALSE(s.suites.empty());
        for (const auto& g : s.bundles) CHECK(qs_check(g).passed());
        for (const auto& d : s.data) CHECK(is_coisotropic(d).passed());
        auto rep = run_suite(s, "all");
        INFO(e.name, "\n", rep.to_text());
        CHECK(rep.passed());
        CHECK_FALSE(rep.hypothesis_violated());
    }
}

TEST_CASE("scenario parameters and corruptions") {
    CHECK_THROWS_AS(build_scenario(ScenarioSpec{"no-such", {}, 1, {}}), std::invalid_argument);
    CHECK_THROWS_AS(build_scenario(ScenarioSpec{"pair-groupoid", {{"n", "3"}}, 1, {}}), std::invalid_argument);
    CHECK_THROWS_AS(build_scenario(ScenarioSpec{"pair-groupoid", {{"colour", "red"}}, 1, {}}), std::invalid_argument);
    CHECK_THROWS_AS(build_scenario(ScenarioSpec{"circle-hamiltonian", {{"level", "x"}}, 1, {}}),
                    std::invalid_argument);

    auto s = build_scenario(ScenarioSpec{"pair-groupoid", {{"corrupt", "sigma"}}, 1, {}});
    auto rep = run_suite(s, "qs");
    CHECK(rep.has_failure("pair/qs.lemma.item1"));
    CHECK_THROWS_AS(run_suite(s, "dorfman"), std::invalid_argument);

    auto flat = build_scenario(ScenarioSpec{"circle-hamiltonian", {{"n", "1"}, {"corrupt", "dirac"}}, 1, {}});
    CHECK(run_suite(flat, "hamiltonian").has_failure("ham.nondegenerate"));

    auto random = build_scenario(ScenarioSpec{"pair-groupoid", {{"form", "random"}, {"n", "4"}}, 11, {}});
    CHECK(run_suite(random, "qs").passed());

    ScenarioSpec a{"circle-hamiltonian", {{"orbits", "3"}}, 2, {}};
    CHECK(run_suite(build_scenario(a), "all").to_json() == run_suite(build_scenario(a), "all").to_json());
}
