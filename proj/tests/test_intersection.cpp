#include <doctest.h>

#include "diraclab/intersection.hpp"
#include "fixtures.hpp"

using namespace diraclab;
using namespace fixtures;

namespace {

// id : g -> point x g^- with Dirac fiber l at every object.
Correspondence into_right(const GroupoidBundle& g, const DiracFiber& l) {
    MorphismFiber c = identity_morphism(g);
    for (std::size_t x = 0; x < g.objects.size(); ++x) {
        c.c0[x] = vstack(Mat(0, g.objects[x].n), c.c0[x]);
        c.cA[x] = vstack(Mat(0, g.objects[x].r), c.cA[x]);
    }
    return make_correspondence(point_groupoid(), g, g, c, std::vector<DiracFiber>(g.objects.size(), l));
}

// id : g -> g x point^-.
Correspondence into_left(const GroupoidBundle& g, const DiracFiber& l) {
    MorphismFiber c = identity_morphism(g);
    for (std::size_t x = 0; x < g.objects.size(); ++x) {
        c.c0[x] = vstack(c.c0[x], Mat(0, g.objects[x].n));
        c.cA[x] = vstack(c.cA[x], Mat(0, g.objects[x].r));
    }
    return make_correspondence(g, point_groupoid(), g, c, std::vector<DiracFiber>(g.objects.size(), l));
}

Correspondence point_correspondence() {
    auto p = point_groupoid();
    return make_correspondence(p, p, p, identity_morphism(product_bundle(p, p)), {DiracFiber{0, Subspace(0)}});
}

// Strong tangent inside the homotopy tangent at (x1, unit, x2): (v1, u c12 v1, v2).
Mat unit_inclusion(const StrongProductFiber& s, const HomotopyProductFiber& h, const Mat& u_star, const Mat& c12) {
    Mat full = vstack(vstack(s.p1, u_star * c12 * s.p1), s.p2);
    return solve_matrix(h.P, full);
}

}  // namespace

TEST_CASE("correspondence legs and the product bundle") {
    auto g = pair_fixture(omega_std(1));
    auto d = into_right(g, negate(induced_dirac(g.objects[0])));
    CHECK(d.datum.G.objects.size() == 1);
    CHECK(d.datum.G.arrows.size() == 2);
    CHECK(d.datum.G.pairs.size() == 4);
    CHECK(qs_check(d.datum.G).passed());
    auto legs = object_legs(d, 0);
    CHECK(legs.c_left.rows() == 0);
    CHECK(legs.c_right == Mat::identity(2));
    CHECK(is_strong(d.datum).passed());

    auto pc = product_bundle(g, circle_fixture());
    CHECK(pc.arrows.size() == 4);
    auto rep = qs_check(pc);
    INFO(rep.to_text());
    CHECK(rep.passed());
}

TEST_CASE("strong intersection of identity data on the pair groupoid") {
    auto g = pair_fixture(omega_std(1));
    auto lg = induced_dirac(g.objects[0]);
    auto d1 = into_right(g, negate(lg));
    auto d2 = into_left(g, lg);
    auto r = strong_intersection(d1, d2);
    INFO(r.report.to_text());
    CHECK(r.report.passed());
    CHECK_FALSE(r.report.hypothesis_violated());
    REQUIRE(r.fibers.size() == 1);
    // -L + L = {(v, 0)}: ker L is everything, which is im rho
    CHECK(r.fibers[0].L == tangent_dirac(2));
    CHECK(r.report.find("strong.zero_shifted")->ok());
    CHECK(r.report.find("strong.strong")->ok());
    CHECK(r.ledger.points[0].R == Subspace::full(2));
    CHECK(r.ledger.points[0].R_ann.dim() == 0);
    CHECK(r.product.datum.C.arrows.size() == 2);

    auto seq = strong_exact_sequence(d1, d2, r);
    INFO(seq.to_text());
    CHECK(seq.passed());
    CHECK(seq.find("seq.free_implies_transverse")->evaluated == 1);
}

TEST_CASE("a zero-dimensional factor leaves the other datum") {
    auto g = pair_fixture(omega_std(1));
    auto l = negate(induced_dirac(g.objects[0]));
    auto d2 = into_right(g, l);
    auto r = strong_intersection(point_correspondence(), d2);
    INFO(r.report.to_text());
    CHECK(r.report.passed());
    REQUIRE(r.fibers.size() == 1);
    CHECK(r.fibers[0].L == l);
    CHECK(is_coisotropic(r.product.datum).passed());
}

TEST_CASE("kernel overlap on the circle groupoid") {
    auto c = circle_fixture();
    auto l = cotangent_dirac(1);
    auto d1 = into_right(c, negate(l));
    auto d2 = into_left(c, l);
    auto r = strong_intersection(d1, d2);
    INFO(r.report.to_text());
    CHECK(r.report.passed());
    CHECK(r.fibers[0].L == cotangent_dirac(1));
    // both tangent ranges vanish, so R = 0 and R° is the whole cotangent line
    CHECK(r.ledger.points[0].R.dim() == 0);
    CHECK(r.ledger.points[0].R_ann.dim() == 1);
    auto seq = strong_exact_sequence(d1, d2, r);
    INFO(seq.to_text());
    CHECK(seq.passed());
    const auto& ranks = seq.find("seq.dimension")->ranks;
    REQUIRE(ranks.size() == 3);
    CHECK(ranks[0].second == 0);  // K1 + K2
    CHECK(ranks[1].second == 1);  // middle: the diagonal isotropy
    CHECK(ranks[2].second == 1);  // R°
    CHECK(r.report.find("strong.zero_shifted")->ok());
    // R° != 0: the product is not strong and no claim is made
    CHECK(r.report.find("strong.strong") == nullptr);
    CHECK_FALSE(is_strong(r.product.datum).passed());
}

TEST_CASE("transversality failure withholds the coisotropic claim") {
    auto g = pair_fixture(omega_std(1));
    auto lg = induced_dirac(g.objects[0]);
    auto d1 = into_right(g, negate(lg));
    auto d2 = into_left(g, lg);
    d1.datum.c.cA[0] = Mat(2, 2);
    d2.datum.c.cA[0] = Mat(2, 2);
    auto r = strong_intersection(d1, d2);
    CHECK(r.report.find("strong.transverse")->status == Status::hypothesis_violated);
    CHECK(r.report.find("strong.coisotropic")->status == Status::hypothesis_violated);
    CHECK_THROWS_AS(strong_intersection(d1, into_left(circle_fixture(), cotangent_dirac(1))),
                    std::invalid_argument);
}

TEST_CASE("homotopy intersection on the pair groupoid") {
    auto g = pair_fixture(omega_std(1));
    auto lg = induced_dirac(g.objects[0]);
    auto d1 = into_right(g, negate(lg));
    auto d2 = into_left(g, lg);
    auto pts = homotopy_points(d1, d2);
    REQUIRE(pts.size() == 2);
    auto h = homotopy_intersection(d1, d2, pts);
    INFO(h.report.to_text());
    CHECK(h.report.passed());
    CHECK_FALSE(h.report.hypothesis_violated());
    CHECK(h.transverse);
    for (const auto& f : h.fibers) {
        // -graph(b) at s, graph(b) at t, minus graph(omega) cancel: graph(0)
        CHECK(f.L == tangent_dirac(4));
        CHECK(as_two_form(f.L).has_value());
    }
    CHECK(h.report.find("hom.strong")->ok());
    CHECK(h.report.find("hom.anchor")->evaluated == 2);

    // at the unit arrow the strong product sits inside with no gauge term
    auto s = strong_intersection(d1, d2);
    const auto& unit_fiber = h.fibers[0];
    REQUIRE(unit_fiber.at.g == 0);
    Mat inc = unit_inclusion(s.fibers[0], unit_fiber, g.arrows[0].u_star, Mat::identity(2));
    CHECK(pullback(inc, unit_fiber.L) == s.fibers[0].L);

    std::vector<HomotopyPoint> bad{{0, 1, 0}};
    auto no_units = d2;
    no_units.datum.C.arrows[0].unit = false;
    CHECK_THROWS_AS(homotopy_intersection(d1, no_units, bad), std::invalid_argument);
    CHECK_THROWS_AS(homotopy_intersection(d1, d2, {{0, 5, 0}}), std::invalid_argument);
}

TEST_CASE("homotopy intersection over a point is the product") {
    auto g = pair_fixture(omega_std(1));
    auto c = circle_fixture();
    auto l1 = induced_dirac(g.objects[0]);
    auto l2 = negate(induced_dirac(c.objects[0]));
    auto d1 = into_left(g, l1);
    auto d2 = into_right(c, l2);
    auto h = homotopy_intersection(d1, d2, homotopy_points(d1, d2));
    INFO(h.report.to_text());
    CHECK(h.report.passed());
    REQUIRE(h.fibers.size() == 1);
    CHECK(h.fibers[0].L == direct_product(l1, l2));
    auto s = strong_intersection(d1, d2);
    CHECK(s.report.passed());
    CHECK(s.fibers[0].L == direct_product(l1, l2));
}

TEST_CASE("property: strong and homotopy products of random pair groupoids") {
    RationalRng rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        std::size_t k = 1 + trial % 2;
        Mat q = rng.invertible(2 * k);
        Mat b = q.transpose() * omega_std(k) * q;
        auto g = pair_fixture(b);
        auto lg = induced_dirac(g.objects[0]);
        auto d1 = into_right(g, negate(lg));
        auto d2 = into_left(g, lg);
        auto s = strong_intersection(d1, d2);
        INFO(s.report.to_text());
        CHECK(s.report.passed());
        auto seq = strong_exact_sequence(d1, d2, s);
        CHECK(seq.passed());
        auto h = homotopy_intersection(d1, d2, homotopy_points(d1, d2));
        INFO(h.report.to_text());
        CHECK(h.report.passed());
        Mat inc = unit_inclusion(s.fibers[0], h.fibers[0], g.arrows[0].u_star, Mat::identity(2 * k));
        CHECK(pullback(inc, h.fibers[0].L) == s.fibers[0].L);
        for (const auto& e : h.ledger.points) CHECK(e.R_ann.dim() == 0);
    }
}

TEST_CASE("induced 0-shifted Poisson structures") {
    auto g = pair_fixture(omega_std(1));
    CoisotropicDatum d{g, g, identity_morphism(g), {induced_dirac(g.objects[0])}};
    auto ip = induced_poisson(d);
    INFO(ip.report.to_text());
    CHECK(ip.report.passed());
    CHECK_FALSE(ip.report.hypothesis_violated());
    CHECK(ip.L[0] == tangent_dirac(2));

    // x-axis in (Q^2, x d/dx ^ d/dy): c*L_pi is span(d/dx) off the origin, span(dx) at it
    Mat c{{1}, {0}};
    std::vector<PoissonSample> line;
    for (int x : {1, -2, 0}) line.push_back({c, tangent_dirac(1), graph_bivector(Mat{{0, x}, {-x, 0}})});
    auto lr = induced_poisson(line);
    CHECK(lr.report.hypothesis_violated());
    CHECK(lr.L[0] == tangent_dirac(1));
    CHECK(lr.L[2] == cotangent_dirac(1));
    const auto& ranks = lr.report.find("ip.constant_rank")->ranks;
    CHECK(ranks[0].second == 1);
    CHECK(ranks[2].second == 0);
}
