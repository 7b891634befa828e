#include "diraclab/intersection.hpp"

#include <map>
#include <stdexcept>

namespace diraclab {

namespace {

Subspace outer_sum(const Subspace& a, const Subspace& b) {
    std::vector<Vec> vs;
    for (const auto& v : a.vectors()) vs.push_back(concat(v, Vec(b.ambient())));
    for (const auto& v : b.vectors()) vs.push_back(concat(Vec(a.ambient()), v));
    return canonicalize(a.ambient() + b.ambient(), vs);
}

Mat block_diag3(const Mat& a, const Mat& b, const Mat& c) { return block_diag(block_diag(a, b), c); }

Mat rows_of(const Mat& m, std::size_t from, std::size_t count) { return m.block(from, 0, count, m.cols()); }

void same_middle(const Correspondence& d1, const Correspondence& d2) {
    const auto& a = d1.right;
    const auto& b = d2.left;
    if (a.objects.size() != b.objects.size() || a.arrows.size() != b.arrows.size())
        throw std::invalid_argument("the two correspondences do not share the middle groupoid");
    for (std::size_t i = 0; i < a.objects.size(); ++i)
        if (a.objects[i].n != b.objects[i].n || a.objects[i].r != b.objects[i].r)
            throw std::invalid_argument("the two correspondences do not share the middle groupoid");
}

// Failing or violated check ids, as witnesses.
std::vector<std::string> bad_ids(const Report& r) {
    std::vector<std::string> out;
    for (const auto& c : r.checks())
        if (c.status != Status::pass && !c.diagnostic) out.push_back(c.id + ": " + status_name(c.status));
    return out;
}

// c fails with sub's failures and is violated by sub's violations.
void claim(Check& c, const Report& sub) {
    c.tick();
    for (const auto& k : sub.checks()) {
        if (k.diagnostic) continue;
        std::string w = k.id + (k.witnesses.empty() ? "" : ": " + k.witnesses.front());
        if (k.status == Status::fail) c.fail(w);
        if (k.status == Status::hypothesis_violated) c.violate(w);
    }
}

std::string point_label(std::size_t i) { return "point " + std::to_string(i); }

// Zero 3-forms, for the untwisted structures produced by differences.
GroupoidBundle untwisted(GroupoidBundle g) {
    for (auto& o : g.objects) o.phi = ThreeForm(o.n);
    return g;
}

bool is_point_bundle(const GroupoidBundle& g) {
    for (const auto& o : g.objects)
        if (o.n || o.r) return false;
    return true;
}

void check_inputs(Report& rep, const std::string& id, const Correspondence& d1, const Correspondence& d2) {
    Check& c = rep.check(id, "both inputs are 1-shifted coisotropic");
    for (const auto* d : {&d1, &d2}) {
        Report r = is_coisotropic(d->datum);
        c.tick();
        if (!r.passed())
            for (const auto& w : bad_ids(r)) c.violate((d == &d1 ? "first: " : "second: ") + w);
    }
}

}  // namespace

Correspondence make_correspondence(GroupoidBundle left, GroupoidBundle right, GroupoidBundle C, MorphismFiber c,
                                   std::vector<DiracFiber> L) {
    GroupoidBundle g = product_bundle(left, opposite(right));
    return Correspondence{std::move(left), std::move(right),
                          CoisotropicDatum{std::move(C), std::move(g), std::move(c), std::move(L)}};
}

Legs object_legs(const Correspondence& k, std::size_t x) {
    const auto& d = k.datum;
    std::size_t gi = d.c.obj.at(x), nr = k.right.objects.size();
    Legs l;
    l.left = gi / nr;
    l.right = gi % nr;
    std::size_t nl = k.left.objects.at(l.left).n, nrr = k.right.objects.at(l.right).n;
    std::size_t rl = k.left.objects[l.left].r, rr = k.right.objects[l.right].r;
    const Mat& c0 = d.c.c0.at(x);
    const Mat& ca = d.c.cA.at(x);
    if (c0.rows() != nl + nrr || ca.rows() != rl + rr) throw DimensionError("correspondence object legs");
    l.c_left = rows_of(c0, 0, nl);
    l.c_right = rows_of(c0, nl, nrr);
    l.a_left = rows_of(ca, 0, rl);
    l.a_right = rows_of(ca, rl, rr);
    return l;
}

Legs arrow_legs(const Correspondence& k, std::size_t h) {
    const auto& d = k.datum;
    std::size_t gi = d.c.arrow.at(h), mr = k.right.arrows.size();
    Legs l;
    l.left = gi / mr;
    l.right = gi % mr;
    std::size_t ml = k.left.arrows.at(l.left).m, mrr = k.right.arrows.at(l.right).m;
    const Mat& c1 = d.c.c1.at(h);
    if (c1.rows() != ml + mrr) throw DimensionError("correspondence arrow legs");
    l.c_left = rows_of(c1, 0, ml);
    l.c_right = rows_of(c1, ml, mrr);
    return l;
}

bool RankLedger::constant() const {
    for (const auto& e : points) {
        const auto& f = points.front();
        if (e.R.dim() != f.R.dim() || e.U.dim() != f.U.dim() || e.ker_L != f.ker_L || e.range_L != f.range_L)
            return false;
    }
    return true;
}

IntersectionResult strong_intersection(const Correspondence& d1, const Correspondence& d2, const Samples& samples) {
    same_middle(d1, d2);
    const auto& C1 = d1.datum.C;
    const auto& C2 = d2.datum.C;
    const auto& G2 = d1.right;
    IntersectionResult res;
    Report& rep = res.report;
    rep = Report("strong-intersection");
    check_inputs(rep, "strong.inputs", d1, d2);
    Check& eqs = rep.check("strong.fiber_equations", "c12 p1 = c22 p2 on T_C and A_C");
    Check& tr = rep.check("strong.transverse", "im c12* + im c22* = A_G2");
    Check& lag = rep.check("strong.lagrangian", "L = p1*L1 + p2*L2 is Lagrangian");
    Check& clean = rep.check("strong.clean", "R, U, ker L and p_T L have constant rank");

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    GroupoidBundle C;
    C.name = C1.name + " x_s " + C2.name;
    MorphismFiber c;
    std::vector<DiracFiber> L;
    std::size_t n3 = d2.right.objects.size(), m3 = d2.right.arrows.size();
    GroupoidBundle target = product_bundle(d1.left, opposite(d2.right));

    for (std::size_t x1 = 0; x1 < C1.objects.size(); ++x1)
        for (std::size_t x2 = 0; x2 < C2.objects.size(); ++x2) {
            if (res.fibers.size() >= samples.objects) break;
            Legs l1 = object_legs(d1, x1), l2 = object_legs(d2, x2);
            if (l1.right != l2.left) continue;
            const auto& o1 = C1.objects[x1];
            const auto& o2 = C2.objects[x2];
            const auto& y = G2.objects[l1.right];
            std::size_t n1 = o1.n, n2 = o2.n, r1 = o1.r, r2 = o2.r;
            std::string at = point_label(res.fibers.size());

            StrongProductFiber f;
            f.at = {x1, x2};
            Mat tcons = hstack(l1.c_right, -l2.c_left);
            Mat acons = hstack(l1.a_right, -l2.a_left);
            f.P = kernel(tcons).columns();
            f.Q = kernel(acons).columns();
            eqs.expect((tcons * f.P).is_zero() && (acons * f.Q).is_zero(), at);
            Mat anchor = block_diag(o1.rho, o2.rho) * f.Q;
            if (column_space(f.P).contains(column_space(anchor))) {
                f.rho = solve_matrix(f.P, anchor);
            } else {
                f.rho = Mat(f.P.cols(), f.Q.cols());
                rep.check("strong.inputs").violate(at + ": the anchor leaves the fibre product");
            }
            f.p1 = rows_of(f.P, 0, n1);
            f.p2 = rows_of(f.P, n1, n2);
            f.q1 = rows_of(f.Q, 0, r1);
            f.q2 = rows_of(f.Q, r1, r2);
            f.L = dirac_sum(pullback(f.p1, d1.datum.L[x1]), pullback(f.p2, d2.datum.L[x2]));
            lag.expect(is_lagrangian(f.L.n, f.L.L), at);
            f.transverse = rank(hstack(l1.a_right, l2.a_left)) == y.r;
            tr.tick();
            if (!f.transverse)
                tr.violate(at + ": rank " + std::to_string(rank(hstack(l1.a_right, l2.a_left))) + " < " +
                           std::to_string(y.r));

            RankEntry e;
            e.at = at;
            e.R = sum(image(l1.c_right, tangent_range(d1.datum.L[x1])), image(l2.c_left, tangent_range(d2.datum.L[x2])));
            e.U = column_space(hstack(l1.c_right, l2.c_left));
            e.R_ann = annihilator(e.R);
            e.ker_L = kernel_of(f.L).dim();
            e.range_L = tangent_range(f.L).dim();
            clean.rank(at + " R", static_cast<std::int64_t>(e.R.dim()));
            clean.rank(at + " U", static_cast<std::int64_t>(e.U.dim()));
            clean.rank(at + " ker L", static_cast<std::int64_t>(e.ker_L));
            res.ledger.points.push_back(e);

            std::size_t gi = l1.left * n3 + l2.right;
            Mat c0 = vstack(l1.c_left * f.p1, l2.c_right * f.p2);
            Mat ca = vstack(l1.a_left * f.q1, l2.a_right * f.q2);
            std::size_t k = f.P.cols(), q = f.Q.cols();
            C.objects.push_back(ObjectFiber{k, q, f.rho, Mat(k, q), target.objects[gi].phi.pullback(c0)});
            c.obj.push_back(gi);
            c.c0.push_back(c0);
            c.cA.push_back(ca);
            L.push_back(f.L);
            index[{x1, x2}] = res.fibers.size();
            res.fibers.push_back(std::move(f));
        }
    clean.tick();
    if (!res.ledger.constant()) clean.violate("ranks vary across product points");

    Check& arr = rep.check("strong.product_arrows", "product arrows built from the sampled pairs");
    for (std::size_t h1 = 0; h1 < C1.arrows.size(); ++h1)
        for (std::size_t h2 = 0; h2 < C2.arrows.size(); ++h2) {
            if (C.arrows.size() >= samples.arrows) break;
            Legs a1 = arrow_legs(d1, h1), a2 = arrow_legs(d2, h2);
            if (a1.right != a2.left) continue;
            const auto& g1 = C1.arrows[h1];
            const auto& g2 = C2.arrows[h2];
            auto src = index.find({g1.src, g2.src});
            auto tgt = index.find({g1.tgt, g2.tgt});
            if (src == index.end() || tgt == index.end()) continue;
            const auto& fs = res.fibers[src->second];
            const auto& ft = res.fibers[tgt->second];
            arr.tick();
            try {
                Mat B = kernel(hstack(a1.c_right, -a2.c_left)).columns();
                std::size_t m = B.cols();
                ArrowFiber a;
                a.src = src->second;
                a.tgt = tgt->second;
                a.m = m;
                a.s_star = solve_matrix(fs.P, block_diag(g1.s_star, g2.s_star) * B);
                a.t_star = solve_matrix(ft.P, block_diag(g1.t_star, g2.t_star) * B);
                a.omega = Mat(m, m);
                a.Lg = solve_matrix(B, block_diag(g1.Lg, g2.Lg) * fs.Q);
                a.Rg = solve_matrix(B, block_diag(g1.Rg, g2.Rg) * ft.Q);
                a.unit = g1.unit && g2.unit;
                if (a.unit) a.u_star = solve_matrix(B, block_diag(g1.u_star, g2.u_star) * fs.P);
                Mat b1 = rows_of(B, 0, g1.m), b2 = rows_of(B, g1.m, g2.m);
                C.arrows.push_back(a);
                c.arrow.push_back(a1.left * m3 + a2.right);
                c.c1.push_back(vstack(a1.c_left * b1, a2.c_right * b2));
            } catch (const std::domain_error&) {
                arr.fail("arrows " + std::to_string(h1) + ", " + std::to_string(h2) +
                         ": translations or endpoints leave the fibre product");
            }
        }

    res.product = Correspondence{d1.left, d2.right, CoisotropicDatum{C, target, c, L}};

    Check& co = rep.check("strong.coisotropic", "the product is 1-shifted coisotropic toward G1 x G3^-");
    bool transverse = tr.status == Status::pass;
    if (!transverse || clean.status != Status::pass || rep.find("strong.inputs")->status != Status::pass ||
        arr.status != Status::pass) {
        co.tick();
        co.violate("hypotheses not met, no claim");
    } else {
        claim(co, is_coisotropic(res.product.datum));
        bool range_full = true;
        for (const auto& e : res.ledger.points) range_full = range_full && e.R_ann.dim() == 0;
        if (range_full && is_strong(d1.datum).passed() && is_strong(d2.datum).passed())
            claim(rep.check("strong.strong", "transverse legs and strong inputs give a strong product"),
                  is_strong(res.product.datum));
        if (is_point_bundle(d1.left) && is_point_bundle(d2.right)) {
            Check& z = rep.check("strong.zero_shifted", "over trivial ends the product is 0-shifted Poisson");
            claim(z, zero_shifted_poisson_check(untwisted(C), L));
        }
    }
    return res;
}

Report strong_exact_sequence(const Correspondence& d1, const Correspondence& d2, const IntersectionResult& r) {
    Report rep("strong-sequence");
    Check& hyp = rep.check("seq.hypothesis", "A_C1 -> A_G2 <- A_C2 transverse");
    Check& inc = rep.check("seq.first", "K1 + K2 sits in ker rho_C meet ker c_*");
    Check& mid = rep.check("seq.middle", "kernel of b -> sigma c12* b1 is K1 + K2");
    Check& last = rep.check("seq.last", "image of b -> sigma c12* b1 is R°");
    Check& dims = rep.check("seq.dimension", "dim middle = dim K1 + K2 + dim R°");
    Check& free = rep.check("seq.free_implies_transverse", "ker rho_C = 0 forces R° = 0");
    const auto& C1 = d1.datum.C;
    const auto& C2 = d2.datum.C;
    for (std::size_t i = 0; i < r.fibers.size(); ++i) {
        const auto& f = r.fibers[i];
        const auto& e = r.ledger.points.at(i);
        std::string at = point_label(i);
        Legs l1 = object_legs(d1, f.at.x1), l2 = object_legs(d2, f.at.x2);
        const auto& o1 = C1.objects[f.at.x1];
        const auto& o2 = C2.objects[f.at.x2];
        const auto& y = d1.right.objects[l1.right];
        hyp.tick();
        if (!f.transverse) hyp.violate(at);

        Subspace k1 = kernel(vstack(o1.rho, d1.datum.c.cA[f.at.x1]));
        Subspace k2 = kernel(vstack(o2.rho, d2.datum.c.cA[f.at.x2]));
        Subspace left = outer_sum(k1, k2);
        Mat anchor = block_diag(o1.rho, o2.rho);
        Mat outer = block_diag(l1.a_left, l2.a_right);
        Subspace middle = intersect(column_space(f.Q), kernel(vstack(anchor, outer)));
        Mat map = hstack(y.sigma * l1.a_right, Mat(y.n, o2.r));

        inc.expect(middle.contains(left), at);
        Subspace k = intersect(middle, kernel(map));
        mid.expect(k == left, at + ": kernel " + fmt(k) + ", expected " + fmt(left));
        Subspace im = image(map, middle);
        last.expect(im == e.R_ann, at + ": image " + fmt(im) + ", R° = " + fmt(e.R_ann));
        dims.expect(middle.dim() == left.dim() + e.R_ann.dim(),
                    at + ": " + std::to_string(middle.dim()) + " vs " + std::to_string(left.dim()) + " + " +
                        std::to_string(e.R_ann.dim()));
        dims.rank(at + " left", static_cast<std::int64_t>(left.dim()));
        dims.rank(at + " middle", static_cast<std::int64_t>(middle.dim()));
        dims.rank(at + " R°", static_cast<std::int64_t>(e.R_ann.dim()));
        if (rank(f.rho) == f.rho.cols()) free.expect(e.R_ann.dim() == 0, at + ": R° = " + fmt(e.R_ann));
    }
    return rep;
}

std::vector<HomotopyPoint> homotopy_points(const Correspondence& d1, const Correspondence& d2,
                                           const Samples& samples) {
    same_middle(d1, d2);
    std::vector<HomotopyPoint> out;
    for (std::size_t x1 = 0; x1 < d1.datum.C.objects.size(); ++x1)
        for (std::size_t x2 = 0; x2 < d2.datum.C.objects.size(); ++x2)
            for (std::size_t g = 0; g < d1.right.arrows.size(); ++g) {
                if (out.size() >= samples.objects) return out;
                const auto& a = d1.right.arrows[g];
                if (a.src == object_legs(d1, x1).right && a.tgt == object_legs(d2, x2).left) out.push_back({x1, g, x2});
            }
    return out;
}

HomotopyResult homotopy_intersection(const Correspondence& d1, const Correspondence& d2,
                                     const std::vector<HomotopyPoint>& points) {
    same_middle(d1, d2);
    const auto& C1 = d1.datum.C;
    const auto& C2 = d2.datum.C;
    const auto& G2 = d1.right;
    HomotopyResult res;
    Report& rep = res.report;
    rep = Report("homotopy-intersection");
    check_inputs(rep, "hom.inputs", d1, d2);
    Check& eqs = rep.check("hom.fiber_equations", "c12 p1 = s p0, c22 p2 = t p0 on T_C");
    Check& anc = rep.check("hom.anchor", "rho_C = t_* R at the product units");
    Check& lag = rep.check("hom.lagrangian", "L = p1*L1 + p2*L2 - p0*graph(omega) is Lagrangian");
    Check& clean = rep.check("hom.clean", "R, U, ker L and p_T L have constant rank");
    Check& first = rep.check("hom.exact_first", "K1 x K2 -> ker rho_C meet ker c_* is injective");
    Check& second = rep.check("hom.exact_second", "kernel of the map to R° is K1 x K2");
    Check& third = rep.check("hom.exact_third", "the map onto R° is surjective");

    // Bundle-level transversality of the algebroid maps over index-matched objects.
    res.transverse = true;
    for (std::size_t x1 = 0; x1 < C1.objects.size(); ++x1)
        for (std::size_t x2 = 0; x2 < C2.objects.size(); ++x2) {
            Legs l1 = object_legs(d1, x1), l2 = object_legs(d2, x2);
            if (l1.right == l2.left && rank(hstack(l1.a_right, l2.a_left)) != G2.objects[l1.right].r)
                res.transverse = false;
        }
    if (!res.transverse) {
        third.diagnostic = true;
        third.anchor += " (algebroid maps not transverse: outcome reported, not claimed)";
    }

    GroupoidBundle C;
    C.name = C1.name + " x_h " + C2.name;
    MorphismFiber c;
    std::vector<DiracFiber> L;
    std::size_t n3 = d2.right.objects.size(), m3 = d2.right.arrows.size();
    GroupoidBundle target = product_bundle(d1.left, opposite(d2.right));

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& pt = points[i];
        std::string at = point_label(i);
        if (pt.x1 >= C1.objects.size() || pt.x2 >= C2.objects.size() || pt.g >= G2.arrows.size())
            throw std::invalid_argument("missing arrow data: " + at + " index out of range");
        Legs l1 = object_legs(d1, pt.x1), l2 = object_legs(d2, pt.x2);
        const auto& ga = G2.arrows[pt.g];
        if (ga.src != l1.right || ga.tgt != l2.left)
            throw std::invalid_argument("missing arrow data: " + at + " middle arrow does not join the legs");
        auto u1 = C1.unit_of(pt.x1), u2 = C2.unit_of(pt.x2);
        auto e1 = G2.unit_of(ga.src), e2 = G2.unit_of(ga.tgt);
        if (!u1 || !u2 || !e1 || !e2) throw std::invalid_argument("missing arrow data: unit not sampled at " + at);
        const auto& o1 = C1.objects[pt.x1];
        const auto& o2 = C2.objects[pt.x2];
        const auto& y1 = G2.objects[ga.src];
        const auto& y2 = G2.objects[ga.tgt];
        std::size_t n1 = o1.n, n2 = o2.n, m0 = ga.m, r1 = o1.r, r2 = o2.r;

        HomotopyProductFiber f;
        f.at = pt;
        Mat cons(y1.n + y2.n, n1 + m0 + n2);
        cons.set_block(0, 0, l1.c_right);
        cons.set_block(0, n1, -ga.s_star);
        cons.set_block(y1.n, n1, -ga.t_star);
        cons.set_block(y1.n, n1 + m0, l2.c_left);
        f.P = kernel(cons).columns();
        eqs.expect((cons * f.P).is_zero(), at);
        f.p1 = rows_of(f.P, 0, n1);
        f.p0 = rows_of(f.P, n1, m0);
        f.p2 = rows_of(f.P, n1 + m0, n2);

        Mat rho_full(n1 + m0 + n2, r1 + r2);
        rho_full.set_block(0, 0, o1.rho);
        rho_full.set_block(n1, 0, -(ga.Lg * l1.a_right));
        rho_full.set_block(n1, r1, ga.Rg * l2.a_left);
        rho_full.set_block(n1 + m0, r1, o2.rho);
        if (!column_space(f.P).contains(column_space(rho_full)))
            throw std::invalid_argument(at + ": the anchor leaves the product tangent, inputs are not morphisms");
        f.rho = solve_matrix(f.P, rho_full);
        f.L = dirac_sum(dirac_sum(pullback(f.p1, d1.datum.L[pt.x1]), pullback(f.p2, d2.datum.L[pt.x2])),
                        pullback(f.p0, graph_two_form(-ga.omega)));
        lag.expect(is_lagrangian(f.L.n, f.L.L), at);

        RankEntry e;
        e.at = at;
        Subspace legs = outer_sum(image(l1.c_right, tangent_range(d1.datum.L[pt.x1])),
                                  image(l2.c_left, tangent_range(d2.datum.L[pt.x2])));
        Subspace st = column_space(vstack(ga.s_star, ga.t_star));
        e.R = sum(legs, st);
        e.U = sum(outer_sum(column_space(l1.c_right), column_space(l2.c_left)), st);
        e.R_ann = annihilator(e.R);
        e.ker_L = kernel_of(f.L).dim();
        e.range_L = tangent_range(f.L).dim();
        clean.rank(at + " R", static_cast<std::int64_t>(e.R.dim()));
        clean.rank(at + " U", static_cast<std::int64_t>(e.U.dim()));
        clean.rank(at + " ker L", static_cast<std::int64_t>(e.ker_L));

        // exact sequence in A1 + A2 coordinates
        Subspace k1 = kernel(vstack(o1.rho, d1.datum.c.cA[pt.x1]));
        Subspace k2 = kernel(vstack(o2.rho, d2.datum.c.cA[pt.x2]));
        Subspace left = outer_sum(k1, k2);
        Subspace middle = kernel(vstack(rho_full, block_diag(l1.a_left, l2.a_right)));
        Mat map = block_diag(y1.sigma * l1.a_right, -(y2.sigma * l2.a_left));
        first.expect(middle.contains(left), at);
        Subspace k = intersect(middle, kernel(map));
        second.expect(k == left, at + ": kernel " + fmt(k) + ", expected " + fmt(left));
        Subspace im = image(map, middle);
        third.expect(im == e.R_ann, at + ": image " + fmt(im) + ", R° = " + fmt(e.R_ann));
        third.rank(at + " R°", static_cast<std::int64_t>(e.R_ann.dim()));
        res.ledger.points.push_back(e);

        // the unit arrow (1, g, 1) of the product
        const auto& a1 = C1.arrows[*u1];
        const auto& a2 = C2.arrows[*u2];
        const auto& gu1 = G2.arrows[*e1];
        const auto& gu2 = G2.arrows[*e2];
        Legs b1 = arrow_legs(d1, *u1), b2 = arrow_legs(d2, *u2);
        std::size_t w1 = a1.m, w2 = a2.m;
        Mat acons(y1.n + y2.n, w1 + m0 + w2);
        acons.set_block(0, 0, l1.c_right * a1.s_star);
        acons.set_block(0, w1, -ga.s_star);
        acons.set_block(y1.n, w1, -ga.t_star);
        acons.set_block(y1.n, w1 + m0, l2.c_left * a2.s_star);
        Mat B = kernel(acons).columns();
        std::size_t m = B.cols();

        // X1 = c12 w1 and X2 = c22 w2 at units of G2; the middle component of
        // t_* is v0 + R_g b2 - L_g a1 with a1, b2 the translation parts.
        Mat x1v = b1.c_right, x2v = b2.c_left;
        Mat a1m = solve_matrix(gu1.Rg, x1v - gu1.u_star * (gu1.s_star * x1v));
        Mat b2m = solve_matrix(gu2.Lg, x2v - gu2.u_star * (gu2.t_star * x2v));
        Mat tfull(n1 + m0 + n2, w1 + m0 + w2);
        tfull.set_block(0, 0, a1.t_star);
        tfull.set_block(n1, 0, -(ga.Lg * a1m));
        tfull.set_block(n1, w1, Mat::identity(m0));
        tfull.set_block(n1, w1 + m0, ga.Rg * b2m);
        tfull.set_block(n1 + m0, w1 + m0, a2.t_star);
        Mat sfull = block_diag3(a1.s_star, Mat::identity(m0), a2.s_star);
        Mat ufull = block_diag3(a1.u_star, Mat::identity(m0), a2.u_star);
        Mat rfull(w1 + m0 + w2, r1 + r2);
        rfull.set_block(0, 0, a1.Rg);
        rfull.set_block(w1 + m0, r1, a2.Rg);
        Mat lfull = rfull - ufull * rho_full;

        ArrowFiber a;
        a.src = a.tgt = i;
        a.m = m;
        a.s_star = solve_matrix(f.P, sfull * B);
        a.t_star = solve_matrix(f.P, tfull * B);
        a.omega = Mat(m, m);
        a.Rg = solve_matrix(B, rfull);
        a.Lg = solve_matrix(B, lfull);
        a.unit = true;
        a.u_star = solve_matrix(B, ufull * f.P);
        anc.expect(a.t_star * a.Rg == f.rho, at);

        std::size_t gi = l1.left * n3 + l2.right;
        Mat c0 = vstack(l1.c_left * f.p1, l2.c_right * f.p2);
        std::size_t k_dim = f.P.cols();
        C.objects.push_back(ObjectFiber{k_dim, r1 + r2, f.rho, Mat(k_dim, r1 + r2),
                                        target.objects[gi].phi.pullback(c0)});
        c.obj.push_back(gi);
        c.c0.push_back(c0);
        c.cA.push_back(block_diag(l1.a_left, l2.a_right));
        C.arrows.push_back(a);
        c.arrow.push_back(b1.left * m3 + b2.right);
        c.c1.push_back(vstack(b1.c_left * rows_of(B, 0, w1), b2.c_right * rows_of(B, w1 + m0, w2)));
        L.push_back(f.L);
        res.fibers.push_back(std::move(f));
    }
    clean.tick();
    if (!res.ledger.constant()) clean.violate("ranks vary across product points");
    res.product = Correspondence{d1.left, d2.right, CoisotropicDatum{C, target, c, L}};

    Check& co = rep.check("hom.coisotropic", "the product is 1-shifted coisotropic toward G1 x G3^-");
    co.tick();
    if (clean.status != Status::pass || rep.find("hom.inputs")->status != Status::pass) {
        co.violate("hypotheses not met, no claim");
        return res;
    }
    claim(co, is_coisotropic(res.product.datum));

    bool range_full = true;
    for (const auto& e : res.ledger.points) range_full = range_full && e.R_ann.dim() == 0;
    if (range_full && is_strong(d1.datum).passed() && is_strong(d2.datum).passed())
        claim(rep.check("hom.strong", "transverse legs and strong inputs give a strong product"),
              is_strong(res.product.datum));
    if (is_point_bundle(d1.left) && is_point_bundle(d2.right))
        claim(rep.check("hom.zero_shifted", "over trivial ends the product is 0-shifted Poisson"),
              zero_shifted_poisson_check(untwisted(C), L));
    return res;
}

InducedPoisson induced_poisson(const std::vector<PoissonSample>& samples) {
    InducedPoisson out;
    out.report = Report("induced-poisson");
    Check& rk = out.report.check("ip.constant_rank", "L - c*L_G has constant rank");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        DiracFiber d = dirac_sum(s.L, negate(pullback(s.c0, s.L_G)));
        rk.rank("sample " + std::to_string(i) + " ker", static_cast<std::int64_t>(kernel_of(d).dim()));
        out.L.push_back(std::move(d));
    }
    rk.tick();
    for (std::size_t i = 1; i < out.L.size(); ++i) {
        std::size_t a = kernel_of(out.L[0]).dim(), b = kernel_of(out.L[i]).dim();
        if (a != b) {
            rk.violate("ker rank " + std::to_string(a) + " at sample 0, " + std::to_string(b) + " at sample " +
                       std::to_string(i));
            break;
        }
    }
    return out;
}

InducedPoisson induced_poisson(const CoisotropicDatum& d) {
    std::vector<PoissonSample> samples;
    for (std::size_t x = 0; x < d.C.objects.size(); ++x)
        samples.push_back({d.c.c0.at(x), d.L.at(x), induced_dirac(d.G.objects.at(d.c.obj.at(x)))});
    InducedPoisson out = induced_poisson(samples);
    Check& z = out.report.check("ip.zero_shifted", "L - c*L_G is 0-shifted Poisson");
    if (out.report.hypothesis_violated()) {
        z.tick();
        z.violate("not smooth on the samples, no claim");
        return out;
    }
    claim(z, zero_shifted_poisson_check(untwisted(d.C), out.L));
    return out;
}

}  // namespace diraclab
