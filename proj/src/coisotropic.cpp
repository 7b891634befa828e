#include "diraclab/coisotropic.hpp"

namespace diraclab {

namespace {

// a + b inside Q^{a.ambient() + b.ambient()}.
Subspace outer_sum(const Subspace& a, const Subspace& b) {
    std::vector<Vec> vs;
    for (const auto& v : a.vectors()) vs.push_back(concat(v, Vec(b.ambient())));
    for (const auto& v : b.vectors()) vs.push_back(concat(Vec(a.ambient()), v));
    return canonicalize(a.ambient() + b.ambient(), vs);
}

std::string obj_label(std::size_t x) { return "object " + std::to_string(x); }

Subspace fiber_product(const DiracFiber& l, const Mat& c0, const Mat& rho_g, const Mat& sigma_g) {
    std::size_t n = l.n, ng = rho_g.rows(), r = rho_g.cols();
    Subspace la = outer_sum(l.L, Subspace::full(r));
    Mat cons(ng + n, 2 * n + r);
    cons.set_block(0, 0, c0);
    cons.set_block(0, 2 * n, -rho_g);
    cons.set_block(ng, n, Mat::identity(n));
    cons.set_block(ng, 2 * n, -(c0.transpose() * sigma_g));
    return intersect(la, kernel(cons));
}

// f : K1/I1 -> K2/I2. Returns {well defined, injective, surjective}.
struct QuotientMap {
    bool well_defined, injective, surjective;
};

QuotientMap quotient_map(const Mat& f, const Subspace& k1, const Subspace& i1, const Subspace& k2,
                         const Subspace& i2) {
    QuotientMap q{};
    q.well_defined = k1.contains(i1) && k2.contains(i2) && k2.contains(image(f, k1)) && i2.contains(image(f, i1));
    q.injective = intersect(preimage(f, i2), k1) == i1;
    q.surjective = sum(image(f, k1), i2) == k2;
    return q;
}

void check_datum_shapes(const CoisotropicDatum& d) {
    if (d.L.size() != d.C.objects.size()) throw std::invalid_argument("one Dirac fiber per C object");
    if (d.c.obj.size() != d.C.objects.size() || d.c.arrow.size() != d.C.arrows.size())
        throw std::invalid_argument("morphism fiber does not cover C");
}

Report coiso_report(const CoisotropicDatum& d, bool strong) {
    check_datum_shapes(d);
    Report rep(strong ? "strong" : "coisotropic");
    Check& qs = rep.check("coiso.target_qs", "G is quasi-symplectic at the sampled fibers");
    Report g = qs_check(d.G);
    qs.tick();
    if (!g.passed()) qs.violate("qs_check fails on " + d.G.name);
    rep.merge(morphism_check(d.C, d.G, d.c));

    Check& dir = rep.check("coiso.dirac", "L is Lagrangian in T_C + T*_C");
    Check& phi = rep.check("coiso.phi", "eta = c^* phi");
    Check& comp = rep.check("coiso.compatibility", "t^* L = s^* L + graph(c^* omega)");
    Check& img = rep.check("coiso.image_in_L", "(rho_C, c^* sigma c_*) lands in L");
    Check& nd = rep.check("coiso.nondegenerate", "A_C -> L x_c A_G is surjective");
    Check* inj = strong ? &rep.check("coiso.strong", "ker rho_C meet ker c_* = 0") : nullptr;

    for (std::size_t x = 0; x < d.C.objects.size(); ++x) {
        const auto& o = d.C.objects[x];
        const auto& l = d.L[x];
        bool lag = l.n == o.n && l.L.ambient() == 2 * o.n && is_lagrangian(o.n, l.L);
        dir.expect(lag, obj_label(x) + ": dim " + std::to_string(l.L.dim()));
        if (!lag) continue;
        const auto& y = d.G.objects.at(d.c.obj[x]);
        phi.expect(o.phi == y.phi.pullback(d.c.c0[x]), obj_label(x));
        NondegMap m = nondeg_map(d, x);
        img.expect(m.image_in_L, obj_label(x));
        std::string w;
        if (!m.surjective) {
            Subspace im = column_space(m.map);
            for (const auto& v : m.fiber_product.vectors())
                if (!im.contains(v)) {
                    w = obj_label(x) + ": ((v, a), e) = " + fmt(v) + " not hit";
                    break;
                }
            if (w.empty()) w = obj_label(x) + ": image leaves the fiber product";
        }
        nd.expect(m.surjective, w);
        nd.rank(obj_label(x), static_cast<std::int64_t>(m.fiber_product.dim()));
        if (inj) {
            Subspace k = kernel(m.map);
            inj->expect(m.injective, k.dim() ? obj_label(x) + ": b = " + fmt(k.vector(0)) : obj_label(x));
        }
    }
    for (std::size_t j = 0; j < d.C.arrows.size(); ++j) {
        const auto& a = d.C.arrows[j];
        const auto& b = d.G.arrows.at(d.c.arrow[j]);
        Mat form = pullback_form(d.c.c1[j], b.omega);
        Report r = compatibility_check(a, d.L[a.src], d.L[a.tgt], form);
        const Check* rc = r.find("coiso.compatibility");
        comp.tick();
        if (!rc->ok()) comp.fail("arrow " + std::to_string(j) + ": " + rc->witnesses.front());
    }
    return rep;
}

}  // namespace

CoisoFiber fiber_at(const CoisotropicDatum& d, std::size_t x) {
    check_datum_shapes(d);
    const auto& o = d.C.objects.at(x);
    const auto& y = d.G.objects.at(d.c.obj.at(x));
    return CoisoFiber{o.rho, d.c.cA.at(x), d.c.c0.at(x), y.rho, y.sigma, d.L[x]};
}

NondegMap nondeg_map(const CoisoFiber& f) {
    std::size_t n = f.n_C(), r = f.r_G();
    if (f.rho_C.rows() != n || f.cA.rows() != r || f.cA.cols() != f.r_C() || f.c0.rows() != f.n_G() ||
        f.c0.cols() != n || f.sigma_G.rows() != f.n_G() || f.sigma_G.cols() != r)
        throw DimensionError("coisotropic fiber shapes");
    NondegMap m;
    Mat alpha = f.c0.transpose() * f.sigma_G * f.cA;
    m.map = vstack(vstack(f.rho_C, alpha), f.cA);
    m.fiber_product = fiber_product(f.L, f.c0, f.rho_G, f.sigma_G);
    m.image_in_L = f.L.L.contains(column_space(vstack(f.rho_C, alpha)));
    Subspace im = column_space(m.map);
    m.surjective = m.fiber_product.contains(im) && im == m.fiber_product;
    m.injective = rank(m.map) == f.r_C();
    return m;
}

NondegMap nondeg_map(const CoisotropicDatum& d, std::size_t x) { return nondeg_map(fiber_at(d, x)); }

Report is_coisotropic(const CoisotropicDatum& d) { return coiso_report(d, false); }
Report is_strong(const CoisotropicDatum& d) { return coiso_report(d, true); }

ChainMapResult chain_map_check(const CoisoFiber& f) {
    ChainMapResult res;
    res.nondeg = nondeg_map(f);
    Report& rep = res.report;
    rep = Report("chain");
    std::size_t n = f.n_C(), r = f.r_G(), ng = f.n_G(), rc = f.r_C();
    std::size_t w = 2 * n + r;

    Check& img = rep.check("chain.image_in_L", "(rho_C, c^* sigma c_*) lands in L");
    img.tick();
    if (!res.nondeg.image_in_L) {
        img.violate("the top row is not defined: image leaves L");
        return res;
    }
    Subspace mid = outer_sum(f.L.L, Subspace::full(r));
    Mat mcols = mid.columns();
    Mat d1 = res.nondeg.map;
    Mat d2(ng, w);
    d2.set_block(0, 0, f.c0);
    d2.set_block(0, 2 * n, -f.rho_G);
    Mat f1(n, w);
    f1.set_block(0, n, -Mat::identity(n));
    f1.set_block(0, 2 * n, f.c0.transpose() * f.sigma_G);
    Mat f2 = f.cA.transpose() * f.sigma_G.transpose();
    Mat b1 = f.rho_C.transpose();

    rep.check("chain.complex", "d2 d1 = 0").expect((d2 * d1).is_zero(), "d2 d1 = " + fmt(d2 * d1));
    rep.check("chain.square1", "f1 d1 = 0").expect((f1 * d1).is_zero(), "f1 d1 = " + fmt(f1 * d1));
    Mat sq = (f2 * d2 - b1 * f1) * mcols;
    rep.check("chain.square2", "f2 d2 = rho_C^T f1 on L + A_G").expect(sq.is_zero(), "defect " + fmt(sq));

    Subspace k0 = kernel(d1);
    res.h0_iso = k0.dim() == 0;

    Subspace k1 = intersect(mid, kernel(d2));
    Subspace i1 = column_space(d1);
    auto q1 = quotient_map(f1, k1, i1, kernel(b1), Subspace::zero(n));
    res.h1_iso = q1.injective && q1.surjective;

    Subspace i1b = image(d2, mid);
    auto q2 = quotient_map(f2, Subspace::full(ng), i1b, Subspace::full(rc), column_space(b1));
    res.h2_iso = q2.injective && q2.surjective;

    Check& wd = rep.check("chain.well_defined", "vertical maps preserve cycles and boundaries");
    wd.expect(q1.well_defined && q2.well_defined, "middle " + std::to_string(q1.well_defined) + ", right " +
                                                      std::to_string(q2.well_defined));
    Check& coh = rep.check("chain.cohomology", "dims of H^-1, H^0, H^1 of both rows");
    coh.tick();
    coh.rank("top H^-1", static_cast<std::int64_t>(k0.dim()));
    coh.rank("top H^0", static_cast<std::int64_t>(k1.dim() - i1.dim()));
    coh.rank("top H^1", static_cast<std::int64_t>(ng - i1b.dim()));
    coh.rank("bottom H^0", static_cast<std::int64_t>(kernel(b1).dim()));
    coh.rank("bottom H^1", static_cast<std::int64_t>(rc - rank(b1)));

    const auto& nd = res.nondeg;
    rep.check("chain.h_minus1_iff_injective", "H^-1 iso iff the map is injective")
        .expect(res.h0_iso == nd.injective, "H^-1 iso " + std::to_string(res.h0_iso));
    rep.check("chain.middle_iff_surjective", "H^0 iso iff the map is surjective")
        .expect(res.h1_iso == nd.surjective,
                "H^0 iso " + std::to_string(res.h1_iso) + ", surjective " + std::to_string(nd.surjective));
    rep.check("chain.quasi_iso_iff_bijective", "quasi-isomorphism iff the map is bijective")
        .expect(res.quasi_iso() == (nd.surjective && nd.injective),
                "quasi-iso " + std::to_string(res.quasi_iso()));
    return res;
}

ChainMapResult chain_map_check(const CoisotropicDatum& d, std::size_t x) { return chain_map_check(fiber_at(d, x)); }

CoisoFiber random_coiso_fiber(RationalRng& rng, std::size_t max_dim) {
    auto ng = static_cast<std::size_t>(rng.integer(1, static_cast<long>(max_dim)));
    auto n = static_cast<std::size_t>(rng.integer(1, static_cast<long>(max_dim)));
    DiracFiber lg = random_lagrangian(rng, ng);
    Mat basis = lg.L.columns() * rng.invertible(ng);
    CoisoFiber f;
    f.rho_G = basis.block(0, 0, ng, ng);
    f.sigma_G = basis.block(ng, 0, ng, ng);
    f.c0 = rng.mat(ng, n, 3, 2);
    if (rng.integer(0, 3) == 0) f.c0 = Mat(ng, n);
    f.L = random_lagrangian(rng, n);
    Subspace fp = fiber_product(f.L, f.c0, f.rho_G, f.sigma_G);
    long k = static_cast<long>(fp.dim());
    auto rc = static_cast<std::size_t>(std::max(0L, k + rng.integer(-1, 1)));
    Mat coeff = rng.mat(fp.dim(), rc, 4, 1);
    if (rc > 1 && rng.integer(0, 2) == 0)
        for (std::size_t i = 0; i < fp.dim(); ++i) coeff(i, rc - 1) = coeff(i, 0);
    Mat m = fp.columns() * coeff;
    f.rho_C = m.block(0, 0, n, rc);
    f.cA = m.block(2 * n, 0, ng, rc);
    return f;
}

CoisotropicDatum orbit_lagrangian(const GroupoidBundle& g, const OrbitSample& orbit) {
    g.validate();
    if (orbit.tangent.size() != orbit.objects.size()) throw std::invalid_argument("one tangent basis per orbit object");
    CoisotropicDatum d;
    d.G = g;
    d.C.name = g.name + "|orbit";
    auto position = [&](std::size_t y) {
        for (std::size_t i = 0; i < orbit.objects.size(); ++i)
            if (orbit.objects[i] == y) return i;
        throw std::invalid_argument("orbit arrow leaves the sampled orbit");
    };
    for (std::size_t i = 0; i < orbit.objects.size(); ++i) {
        const auto& y = g.objects.at(orbit.objects[i]);
        const Mat& b = orbit.tangent[i];
        if (b.rows() != y.n || rank(b) != b.cols() || column_space(b) != column_space(y.rho))
            throw std::invalid_argument("orbit tangent at object " + std::to_string(i) + " is not im rho");
        std::size_t k = b.cols();
        Mat rho_o = solve_matrix(b, y.rho);
        Mat omega = y.sigma.transpose() * y.rho;  // omega(a, b) = <sigma a, rho b>
        Mat gamma(k, k);
        if (k > 0) {
            Mat right = solve_matrix(rho_o, Mat::identity(k));
            gamma = right.transpose() * omega * right;
        }
        if (rho_o.transpose() * gamma * rho_o != omega)
            throw std::invalid_argument("gamma(rho a, rho b) = omega(a, b) is not well defined at object " +
                                        std::to_string(i));
        d.C.objects.push_back(ObjectFiber{k, y.r, rho_o, b.transpose() * y.sigma, y.phi.pullback(b)});
        d.L.push_back(graph_two_form(gamma));
        d.c.obj.push_back(orbit.objects[i]);
        d.c.c0.push_back(b);
        d.c.cA.push_back(Mat::identity(y.r));
    }
    std::vector<Mat> bases;
    for (std::size_t j : orbit.arrows) {
        const auto& a = g.arrows.at(j);
        std::size_t is = position(a.src), it = position(a.tgt);
        const Mat& bs = orbit.tangent[is];
        const Mat& bt = orbit.tangent[it];
        Mat bg = intersect(preimage(a.s_star, column_space(bs)), preimage(a.t_star, column_space(bt))).columns();
        ArrowFiber r;
        r.src = is;
        r.tgt = it;
        r.m = bg.cols();
        r.s_star = solve_matrix(bs, a.s_star * bg);
        r.t_star = solve_matrix(bt, a.t_star * bg);
        r.omega = pullback_form(bg, a.omega);
        r.Lg = solve_matrix(bg, a.Lg);
        r.Rg = solve_matrix(bg, a.Rg);
        r.unit = a.unit;
        if (a.unit) r.u_star = solve_matrix(bg, a.u_star * bs);
        d.C.arrows.push_back(r);
        d.c.arrow.push_back(j);
        d.c.c1.push_back(bg);
        bases.push_back(bg);
    }
    auto arrow_position = [&](std::size_t j) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < orbit.arrows.size(); ++i)
            if (orbit.arrows[i] == j) return i;
        return std::nullopt;
    };
    for (const auto& p : g.pairs) {
        auto pg = arrow_position(p.g), ph = arrow_position(p.h), pgh = arrow_position(p.gh);
        if (!pg || !ph || !pgh) continue;
        const auto& ag = d.C.arrows[*pg];
        const auto& ah = d.C.arrows[*ph];
        Mat comp = composable_tangents(ag, ah);
        Mat out = p.m_star * block_diag(bases[*pg], bases[*ph]) * comp;
        Mat coords = solve_matrix(bases[*pgh], out);
        Mat mstar(d.C.arrows[*pgh].m, ag.m + ah.m);
        if (comp.cols() > 0) {
            Mat ct = comp.transpose();
            mstar = coords * solve_matrix(ct * comp, ct);
        }
        d.C.pairs.push_back(PairFiber{*pg, *ph, *pgh, mstar});
    }
    d.C.validate();
    return d;
}

Report zero_shifted_poisson_check(const GroupoidBundle& g, const std::vector<DiracFiber>& L) {
    g.validate();
    if (L.size() != g.objects.size()) throw std::invalid_argument("one Dirac fiber per object");
    Report rep("zero-shifted");
    Check& tw = rep.check("zsp.untwisted", "phi = 0");
    Check& dir = rep.check("zsp.dirac", "L is Lagrangian");
    Check& inv = rep.check("zsp.invariant", "s^* L = t^* L");
    Check& ker = rep.check("zsp.kernel", "im rho = ker L");
    Check& half = rep.check("zsp.image_in_kernel", "im rho contained in ker L");
    half.diagnostic = true;
    for (std::size_t x = 0; x < g.objects.size(); ++x) {
        const auto& o = g.objects[x];
        tw.tick();
        if (!o.phi.is_zero()) tw.violate(obj_label(x) + ": phi != 0");
        bool lag = L[x].n == o.n && is_lagrangian(o.n, L[x].L);
        dir.expect(lag, obj_label(x));
        if (!lag) continue;
        Subspace im = column_space(o.rho), k = kernel_of(L[x]);
        ker.expect(im == k, obj_label(x) + ": im rho = " + fmt(im) + ", ker L = " + fmt(k));
        half.expect(k.contains(im), obj_label(x));
    }
    for (std::size_t j = 0; j < g.arrows.size(); ++j) {
        const auto& a = g.arrows[j];
        if (!is_lagrangian(L[a.src].n, L[a.src].L) || !is_lagrangian(L[a.tgt].n, L[a.tgt].L)) continue;
        DiracFiber ls = pullback(a.s_star, L[a.src]), lt = pullback(a.t_star, L[a.tgt]);
        inv.expect(ls == lt, "arrow " + std::to_string(j) + ": s^*L = " + fmt(ls.L) + ", t^*L = " + fmt(lt.L));
    }
    return rep;
}

std::size_t fiber_product_rank(const InfinitesimalSample& s) {
    std::size_t nn = s.L_N.n, nm = s.L_M.n;
    if (s.c.rows() != nm || s.c.cols() != nn) throw DimensionError("infinitesimal sample map shape");
    Subspace both = outer_sum(s.L_N.L, s.L_M.L);
    // coordinates (v, a, w, b)
    Mat cons(nm + nn, 2 * nn + 2 * nm);
    cons.set_block(0, 0, s.c);
    cons.set_block(0, 2 * nn, -Mat::identity(nm));
    cons.set_block(nm, nn, Mat::identity(nn));
    cons.set_block(nm, 2 * nn + nm, -s.c.transpose());
    return intersect(both, kernel(cons)).dim();
}

Report infinitesimal_coisotropic_check(const std::vector<InfinitesimalSample>& samples) {
    Report rep("infinitesimal");
    Check& phi = rep.check("inf.phi", "c^* phi = psi");
    Check& cr = rep.check("inf.constant_rank", "L_N x_c L_M has constant rank");
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        phi.expect(s.phi.pullback(s.c) == s.psi, "sample " + std::to_string(i));
        std::size_t r = fiber_product_rank(s);
        cr.tick();
        cr.rank("sample " + std::to_string(i), static_cast<std::int64_t>(r));
        if (!first) {
            first = r;
        } else if (r != *first) {
            cr.fail("rank " + std::to_string(*first) + " at sample 0, rank " + std::to_string(r) + " at sample " +
                    std::to_string(i));
        }
    }
    return rep;
}

}  // namespace diraclab
