#include "diraclab/morita.hpp"

#include <map>

namespace diraclab {

namespace {

std::string obj_label(std::size_t x) { return "object " + std::to_string(x); }
std::string arrow_label(std::size_t j) { return "arrow " + std::to_string(j); }

Mat pull(const Mat& form, const Mat& f) { return pullback_form(f, form); }
ThreeForm pull(const ThreeForm& form, const Mat& f) { return form.pullback(f); }

Mat right_inverse(const Mat& f) { return solve_matrix(f, Mat::identity(f.rows())); }

// Failures of sub count as failures of c when the hypotheses held, and as
// violations otherwise.
void conclude(Check& c, bool hypotheses_ok, const Report& sub) {
    c.tick();
    for (const auto& k : sub.checks()) {
        if (k.diagnostic || k.status == Status::pass) continue;
        std::string w = k.id + (k.witnesses.empty() ? "" : ": " + k.witnesses.front());
        if (k.status == Status::fail && hypotheses_ok)
            c.fail(w);
        else
            c.violate(w);
    }
}

void require_cover(const MorphismFiber& f, const GroupoidBundle& h, const char* what) {
    if (f.obj.size() != h.objects.size() || f.c0.size() != h.objects.size() || f.cA.size() != h.objects.size() ||
        f.arrow.size() != h.arrows.size() || f.c1.size() != h.arrows.size())
        throw std::invalid_argument(std::string(what) + ": morphism fiber does not cover the source");
}

template <class Form>
std::vector<Form> descend_forms(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                                const std::vector<Form>& beta) {
    require_cover(f, H, "descent");
    if (beta.size() != H.objects.size()) throw std::invalid_argument("descent: one form per H object");
    for (std::size_t j = 0; j < H.arrows.size(); ++j) {
        const auto& a = H.arrows[j];
        if (pull(beta[a.src], a.s_star) != pull(beta[a.tgt], a.t_star))
            throw DescentError("not basic: s^* and t^* differ at H " + arrow_label(j));
    }
    std::vector<std::optional<Form>> out(G.objects.size());
    std::vector<std::size_t> from(G.objects.size());
    for (std::size_t x = 0; x < H.objects.size(); ++x) {
        Mat F;
        try {
            F = right_inverse(f.c0[x]);
        } catch (const std::domain_error&) {
            throw std::invalid_argument("descent: f_* is not onto at H " + obj_label(x));
        }
        Form alpha = pull(beta[x], F);
        if (pull(alpha, f.c0[x]) != beta[x]) throw DescentError("does not factor through f at H " + obj_label(x));
        std::size_t y = f.obj[x];
        if (out[y] && *out[y] != alpha)
            throw DescentError("H objects " + std::to_string(from[y]) + " and " + std::to_string(x) +
                               " over G " + obj_label(y) + " give different forms");
        if (!out[y]) {
            out[y] = alpha;
            from[y] = x;
        }
    }
    std::vector<Form> res;
    for (std::size_t y = 0; y < out.size(); ++y) {
        if (!out[y]) throw std::invalid_argument("descent: G " + obj_label(y) + " is not in the image");
        res.push_back(*out[y]);
    }
    return res;
}

// l -> (rho l, f l) into T_H x_{T_G} A_G.
Mat lift_map(const WeakMoritaFiber& w) { return vstack(w.rho_H, w.fA); }

}  // namespace

WeakMoritaFiber morita_fiber(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                             std::size_t x, bool strict) {
    require_cover(f, H, "morita fiber");
    const auto& hx = H.objects.at(x);
    const auto& gy = G.objects.at(f.obj[x]);
    return WeakMoritaFiber{f.c0[x], f.cA[x], hx.rho, gy.rho, strict};
}

Report weak_morita_check(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f, bool strict) {
    Report rep("morita");
    Check& mor = rep.check("wm.morphism", "f is a groupoid morphism");
    require_cover(f, H, "weak morita check");
    Report m = morphism_check(H, G, f);
    mor.tick();
    for (const auto& c : m.checks())
        if (c.status != Status::pass) mor.fail(c.id);
    Check& base = rep.check("wm.base_onto", "f_* : T_H -> T_G onto");
    Check& onto = rep.check("wm.lift_onto", "(rho, f_*) : A_H -> T_H x_{T_G} A_G onto");
    Check* one = strict ? &rep.check("wm.lift_one_to_one", "(rho, f_*) one-to-one") : nullptr;
    Check& cover = rep.check("wm.objects_covered", "every sampled G object has a preimage");
    cover.diagnostic = true;
    std::vector<bool> hit(G.objects.size());
    for (std::size_t x = 0; x < H.objects.size(); ++x) {
        auto w = morita_fiber(H, G, f, x, strict);
        hit.at(f.obj[x]) = true;
        base.expect(is_surjective(w.f0), obj_label(x) + ": rank " + std::to_string(rank(w.f0)));
        Subspace fp = kernel(hstack(w.f0, -w.rho_G));
        Mat lm = lift_map(w);
        onto.rank(obj_label(x) + " fiber product", static_cast<std::int64_t>(fp.dim()));
        onto.expect(column_space(lm) == fp, obj_label(x) + ": image rank " + std::to_string(rank(lm)) + " of " +
                                                std::to_string(fp.dim()));
        if (one) one->expect(is_injective(lm), obj_label(x));
    }
    for (std::size_t y = 0; y < hit.size(); ++y) cover.expect(hit[y], "G " + obj_label(y));
    return rep;
}

Vec lift(const WeakMoritaFiber& w, const Vec& v, const Vec& a) {
    if (v.size() != w.f0.cols() || a.size() != w.fA.rows()) throw DimensionError("lift: vector shapes");
    if (w.f0 * v != w.rho_G * a) throw std::invalid_argument("lift: f_* v != rho a");
    auto b = solve(lift_map(w), concat(v, a));
    if (!b) throw std::domain_error("lift: (rho, f_*) is not onto at this point");
    return *b;
}

std::vector<Mat> descend_basic_form(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                                    const std::vector<Mat>& beta) {
    return descend_forms(H, G, f, beta);
}

std::vector<ThreeForm> descend_basic_form(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                                          const std::vector<ThreeForm>& beta) {
    return descend_forms(H, G, f, beta);
}

std::vector<Mat> pulled_back_forms(const GroupoidBundle& target, const MorphismFiber& m) {
    std::vector<Mat> out;
    for (std::size_t j = 0; j < m.arrow.size(); ++j) out.push_back(pullback_form(m.c1[j], target.arrows.at(m.arrow[j]).omega));
    return out;
}

DiracDescent descend_dirac(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                           const std::vector<DiracFiber>& L, const std::vector<Mat>& forms) {
    require_cover(f, H, "dirac descent");
    if (L.size() != H.objects.size() || forms.size() != H.arrows.size())
        throw std::invalid_argument("dirac descent: one fiber per H object and one form per H arrow");
    DiracDescent out;
    Report& rep = out.report;
    rep = Report("descent");
    Check& comp = rep.check("descent.compatibility", "t^* L = s^* L + graph(f^* omega)");
    for (std::size_t j = 0; j < H.arrows.size(); ++j) {
        const auto& a = H.arrows[j];
        Report r = compatibility_check(a, L[a.src], L[a.tgt], forms[j]);
        comp.tick();
        if (!r.passed()) comp.violate("H " + arrow_label(j));
    }
    Check& inv = rep.check("descent.invariance", "f_* L agrees along each fiber");
    Check& rt = rep.check("descent.round_trip", "f^* f_* L = L");
    std::vector<std::optional<DiracFiber>> pushed(G.objects.size());
    std::vector<std::size_t> from(G.objects.size());
    for (std::size_t x = 0; x < H.objects.size(); ++x) {
        DiracFiber p = pushforward(f.c0[x], L[x]);
        std::size_t y = f.obj[x];
        inv.tick();
        if (pushed[y] && *pushed[y] != p)
            throw DescentError("f_* L differs between H objects " + std::to_string(from[y]) + " and " +
                               std::to_string(x) + " over G " + obj_label(y));
        if (!pushed[y]) {
            pushed[y] = p;
            from[y] = x;
        }
        rt.expect(pullback(f.c0[x], p) == L[x], "H " + obj_label(x) + ": f_* L = " + fmt(p.L));
    }
    for (std::size_t y = 0; y < pushed.size(); ++y) {
        if (!pushed[y]) throw std::invalid_argument("dirac descent: G " + obj_label(y) + " is not in the image");
        out.L.push_back(*pushed[y]);
    }
    Check& bg = rep.check("descent.background", "phi = f^* zeta");
    std::vector<ThreeForm> phis;
    for (const auto& o : H.objects) phis.push_back(o.phi);
    bg.tick();
    try {
        out.zeta = descend_forms(H, G, f, phis);
    } catch (const DescentError& e) {
        bg.violate(e.what());
    }
    return out;
}

OrbitPoisson orbit_poisson_correspondence(const GroupoidBundle& g, const QuotientChart& chart,
                                          const std::vector<DiracFiber>& L) {
    if (chart.point.size() != g.objects.size() || chart.pi_star.size() != g.objects.size() ||
        L.size() != g.objects.size())
        throw std::invalid_argument("orbit chart: one entry per object");
    OrbitPoisson out;
    Report& rep = out.report;
    rep = Report("orbit");
    Check& ch = rep.check("opc.chart", "pi_* onto with kernel im rho");
    Check& inv = rep.check("opc.invariance", "pi_* L agrees over each orbit point");
    Check& poi = rep.check("opc.poisson", "pi_* L is the graph of a bivector");
    Check& rt = rep.check("opc.round_trip", "pi^* pi_* L = L");
    Check& eq = rep.check("opc.equivalence", "0-shifted Poisson iff it descends to a Poisson structure");
    std::size_t points = 0;
    for (auto p : chart.point) points = std::max(points, p + 1);
    std::vector<std::optional<DiracFiber>> pushed(points);
    bool descends = true;
    for (std::size_t x = 0; x < g.objects.size(); ++x) {
        const Mat& pi = chart.pi_star[x];
        if (pi.rows() != chart.dim || pi.cols() != g.objects[x].n) throw DimensionError("orbit chart: pi_* shape");
        ch.tick();
        if (!is_surjective(pi) || kernel(pi) != column_space(g.objects[x].rho)) ch.violate(obj_label(x));
        DiracFiber p = pushforward(pi, L[x]);
        auto& slot = pushed[chart.point[x]];
        inv.expect(!slot || *slot == p, obj_label(x));
        if (!slot) slot = p;
        bool back = pullback(pi, p) == L[x];
        rt.expect(back, obj_label(x));
        descends = descends && back && as_bivector(p).has_value();
    }
    out.bivector.resize(points);
    for (std::size_t q = 0; q < points; ++q) {
        if (!pushed[q]) continue;
        auto b = as_bivector(*pushed[q]);
        poi.expect(b.has_value(), "chart point " + std::to_string(q));
        if (b) out.bivector[q] = *b;
    }
    bool zsp = zero_shifted_poisson_check(g, L).passed();
    eq.expect(zsp == (descends && inv.ok()), std::string("0-shifted Poisson: ") + (zsp ? "yes" : "no"));
    return out;
}

Connection unital_connection(const GroupoidBundle& g) {
    Connection c;
    for (const auto& a : g.arrows) c.tau.push_back(a.unit ? a.u_star : right_inverse(a.s_star));
    return c;
}

Connection random_connection(const GroupoidBundle& g, RationalRng& rng) {
    Connection c = unital_connection(g);
    for (std::size_t j = 0; j < g.arrows.size(); ++j) {
        const auto& a = g.arrows[j];
        if (!a.unit) c.tau[j] = c.tau[j] + a.Rg * rng.mat(a.Rg.cols(), a.s_star.rows(), 3, 2);
    }
    return c;
}

Report connection_check(const GroupoidBundle& g, const Connection& c) {
    if (c.tau.size() != g.arrows.size()) throw std::invalid_argument("connection: one splitting per arrow");
    Report rep("connection");
    Check& split = rep.check("conn.splitting", "s_* tau = id");
    Check& unital = rep.check("conn.unital", "tau = u_* at units");
    Check& inv = rep.check("conn.sigma_check", "sigma-check R = id, sigma-check tau = 0");
    for (std::size_t j = 0; j < g.arrows.size(); ++j) {
        const auto& a = g.arrows[j];
        split.expect(a.s_star * c.tau[j] == Mat::identity(a.s_star.rows()), arrow_label(j));
        if (a.unit) unital.expect(c.tau[j] == a.u_star, arrow_label(j));
        try {
            Mat sc = sigma_check(a, c.tau[j]);
            inv.expect(sc * a.Rg == Mat::identity(a.Rg.cols()) && (sc * c.tau[j]).is_zero(), arrow_label(j));
        } catch (const std::domain_error&) {
            inv.tick();
            inv.fail(arrow_label(j) + ": v - tau s v leaves im R");
        }
    }
    return rep;
}

Mat sigma_check(const ArrowFiber& a, const Mat& tau) {
    return solve_matrix(a.Rg, Mat::identity(a.m) - tau * a.s_star);
}

Mat ad_T(const ArrowFiber& a, const Mat& tau) { return a.t_star * tau; }

Mat ad_A(const ArrowFiber& a, const Mat& tau) { return sigma_check(a, tau) * a.Lg; }

Mat basic_curvature(const GroupoidBundle& g, const Connection& c, std::size_t pair) {
    if (pair >= g.pairs.size()) throw std::invalid_argument("curvature: no sampled pair " + std::to_string(pair));
    const auto& p = g.pairs[pair];
    const auto& ag = g.arrows.at(p.g);
    const auto& ah = g.arrows.at(p.h);
    const auto& agh = g.arrows.at(p.gh);
    Mat both = vstack(c.tau.at(p.g) * ad_T(ah, c.tau.at(p.h)), c.tau.at(p.h));
    return sigma_check(agh, c.tau.at(p.gh)) * (p.m_star * both);
}

Report adjoint_identities(const GroupoidBundle& g, const Connection& c) {
    Report rep("adjoint");
    Check& dt = rep.check("ad.defect_T", "Ad_g Ad_h v - Ad_gh v = rho K(g,h) v");
    Check& da = rep.check("ad.defect_A", "Ad_g Ad_h a - Ad_gh a = K(g,h) rho a");
    Check& rt = rep.check("ad.right_translation", "(Ad_g a)^R = a^L + tau rho a");
    Check& pr = rep.check("ad.pairing", "<sigma Ad a, Ad v> = <sigma a, v> + omega(tau rho a, tau v)");
    for (std::size_t j = 0; j < g.arrows.size(); ++j) {
        const auto& a = g.arrows[j];
        const Mat& tau = c.tau.at(j);
        const auto& src = g.objects[a.src];
        const auto& tgt = g.objects[a.tgt];
        Mat adt = ad_T(a, tau), ada = ad_A(a, tau);
        rt.expect(a.Rg * ada == a.Lg + tau * src.rho, arrow_label(j));
        Mat lhs = ada.transpose() * tgt.sigma.transpose() * adt;
        Mat rhs = src.sigma.transpose() + (tau * src.rho).transpose() * a.omega * tau;
        pr.expect(lhs == rhs, arrow_label(j) + ": defect " + fmt(lhs - rhs));
    }
    for (std::size_t i = 0; i < g.pairs.size(); ++i) {
        const auto& p = g.pairs[i];
        const auto& ag = g.arrows[p.g];
        const auto& ah = g.arrows[p.h];
        const auto& agh = g.arrows[p.gh];
        Mat k = basic_curvature(g, c, i);
        std::string at = "pair " + std::to_string(i);
        Mat t = ad_T(ag, c.tau[p.g]) * ad_T(ah, c.tau[p.h]) - ad_T(agh, c.tau[p.gh]);
        dt.expect(t == g.objects[ag.tgt].rho * k, at);
        Mat s = ad_A(ag, c.tau[p.g]) * ad_A(ah, c.tau[p.h]) - ad_A(agh, c.tau[p.gh]);
        da.expect(s == k * g.objects[ah.src].rho, at);
        dt.rank(at + " K", static_cast<std::int64_t>(rank(k)));
    }
    return rep;
}

Report homotopy_identities(const GroupoidBundle& h, const GroupoidBundle& g, const MorphismFiber& f,
                           const MorphismFiber& gm, const NatTransFiber& theta, const NatTransFiber& eta,
                           const Connection& c, const std::vector<std::size_t>& pair_of) {
    require_cover(f, h, "homotopy identities");
    require_cover(gm, h, "homotopy identities");
    if (theta.arrow.size() != h.objects.size() || eta.arrow.size() != h.objects.size() ||
        pair_of.size() != h.objects.size())
        throw std::invalid_argument("homotopy identities: one arrow and one pair per H object");
    Report rep("homotopy");
    rep.merge(nat_trans_form_identity(h, g, f, gm, theta), "theta/");
    rep.merge(nat_trans_form_identity(h, g, gm, f, eta), "eta/");
    Check& tan = rep.check("hom.tangent", "g_* v - Ad f_* v = rho theta-dot v");
    Check& alg = rep.check("hom.algebroid", "g_* b - Ad f_* b = theta-dot rho b");
    Check& form = rep.check("hom.form", "theta^* omega in terms of theta-dot, Ad and tau");
    Check& inv = rep.check("hom.inverse", "theta-dot + Ad eta-dot + K(theta, eta) g_* = 0");
    for (std::size_t x = 0; x < h.objects.size(); ++x) {
        std::size_t jt = theta.arrow[x], je = eta.arrow[x];
        const auto& at = g.arrows.at(jt);
        const auto& ae = g.arrows.at(je);
        const Mat& tau = c.tau.at(jt);
        const auto& y = g.objects.at(at.tgt);
        const Mat& f0 = f.c0[x];
        Mat td = sigma_check(at, tau) * theta.theta_star[x];
        Mat adt = ad_T(at, tau);
        tan.expect(gm.c0[x] - adt * f0 == y.rho * td, obj_label(x));
        alg.expect(gm.cA[x] - ad_A(at, tau) * f.cA[x] == td * h.objects[x].rho, obj_label(x));

        Mat w = adt * f0, tf = tau * f0;
        Mat lhs = pullback_form(theta.theta_star[x], at.omega);
        Mat rhs = td.transpose() * y.sigma.transpose() * w - w.transpose() * y.sigma * td +
                  td.transpose() * y.sigma.transpose() * y.rho * td + tf.transpose() * at.omega * tf;
        form.expect(lhs == rhs, obj_label(x) + ": defect " + fmt(lhs - rhs));

        const auto& p = g.pairs.at(pair_of[x]);
        if (p.g != jt || p.h != je)
            throw std::invalid_argument("homotopy identities: pair " + std::to_string(pair_of[x]) +
                                        " is not (theta(x), eta(x))");
        const auto& unit = g.arrows.at(p.gh);
        if (!unit.unit || c.tau.at(p.gh) != unit.u_star) {
            inv.tick();
            inv.violate(obj_label(x) + ": theta(x) eta(x) is not a unit with tau = u_*");
            continue;
        }
        Mat ed = sigma_check(ae, c.tau.at(je)) * eta.theta_star[x];
        Mat sum = td + ad_A(at, tau) * ed + basic_curvature(g, c, pair_of[x]) * gm.c0[x];
        inv.expect(sum.is_zero(), obj_label(x) + ": " + fmt(sum));
    }
    rep.merge(adjoint_identities(g, c));
    return rep;
}

std::vector<Mat> connecting_form(const MoritaEquivalenceDatum& d) {
    require_cover(d.gmap, d.K, "connecting form");
    if (d.gamma.size() != d.L.objects.size()) throw std::invalid_argument("connecting form: one gamma per L object");
    auto t1 = pullback_by_transformation(d.G1, d.theta1);
    auto t2 = pullback_by_transformation(d.G2, d.theta2);
    std::vector<Mat> out;
    for (std::size_t x = 0; x < d.K.objects.size(); ++x)
        out.push_back(-pullback_form(d.gmap.c0[x], d.gamma.at(d.gmap.obj[x])) + t1.at(x) - t2.at(x));
    return out;
}

Report symplectic_morita_check(const MoritaEquivalenceDatum& d) {
    Report rep("smorita");
    Check& mor = rep.check("smorita.morphisms", "psi_i, c_i, g, phi_i are groupoid morphisms");
    struct M {
        const char* name;
        const GroupoidBundle& src;
        const GroupoidBundle& tgt;
        const MorphismFiber& f;
        bool strict = false;
    };
    for (const M& m : {M{"psi1", d.K, d.C1, d.psi1}, M{"psi2", d.K, d.C2, d.psi2}, M{"g", d.K, d.L, d.gmap},
                       M{"phi1", d.L, d.G1, d.phi1}, M{"phi2", d.L, d.G2, d.phi2}, M{"c1", d.C1, d.G1, d.c1},
                       M{"c2", d.C2, d.G2, d.c2}}) {
        require_cover(m.f, m.src, m.name);
        mor.tick();
        if (!morphism_check(m.src, m.tgt, m.f).passed()) mor.fail(m.name);
    }
    Check& mo = rep.check("smorita.morita", "phi_i Morita, psi_i weak Morita (Morita when strict)");
    for (const M& m : {M{"phi1", d.L, d.G1, d.phi1, true}, M{"phi2", d.L, d.G2, d.phi2, true},
                       M{"psi1", d.K, d.C1, d.psi1, d.strict}, M{"psi2", d.K, d.C2, d.psi2, d.strict}}) {
        mo.tick();
        Report r = weak_morita_check(m.src, m.tgt, m.f, m.strict);
        for (const auto& c : r.checks())
            if (c.status != Status::pass && !c.diagnostic) mo.violate(std::string(m.name) + ": " + c.id);
    }
    Check& th = rep.check("smorita.transformations", "theta_i : c_i psi_i => phi_i g");
    {
        th.tick();
        Report r1 = nat_trans_form_identity(d.K, d.G1, compose(d.c1, d.psi1), compose(d.phi1, d.gmap), d.theta1);
        Report r2 = nat_trans_form_identity(d.K, d.G2, compose(d.c2, d.psi2), compose(d.phi2, d.gmap), d.theta2);
        if (!r1.passed()) th.fail("theta1");
        if (!r2.passed()) th.fail("theta2");
    }
    Check& om = rep.check("smorita.omega", "phi1^* w1 - phi2^* w2 = t^* gamma - s^* gamma");
    if (d.gamma.size() != d.L.objects.size() || d.dgamma.size() != d.L.objects.size())
        throw std::invalid_argument("symplectic morita: one gamma and dgamma per L object");
    for (std::size_t j = 0; j < d.L.arrows.size(); ++j) {
        const auto& a = d.L.arrows[j];
        Mat lhs = pullback_form(d.phi1.c1[j], d.G1.arrows.at(d.phi1.arrow[j]).omega) -
                  pullback_form(d.phi2.c1[j], d.G2.arrows.at(d.phi2.arrow[j]).omega);
        Mat rhs = pullback_form(a.t_star, d.gamma[a.tgt]) - pullback_form(a.s_star, d.gamma[a.src]);
        om.expect(lhs == rhs, "L " + arrow_label(j) + ": defect " + fmt(lhs - rhs));
    }
    Check& ph = rep.check("smorita.phi", "phi1^* phi1 - phi2^* phi2 = -d gamma");
    for (std::size_t x = 0; x < d.L.objects.size(); ++x) {
        ThreeForm lhs = d.G1.objects.at(d.phi1.obj[x]).phi.pullback(d.phi1.c0[x]) +
                        -d.G2.objects.at(d.phi2.obj[x]).phi.pullback(d.phi2.c0[x]);
        ph.expect(lhs == -d.dgamma[x], "L " + obj_label(x));
    }
    bool hyp = mo.ok() && om.ok() && ph.ok() && mor.ok();

    Check& bij = rep.check("smorita.bijective", "l -> (rho l, phi1 l, phi2 l) onto the fiber product");
    for (std::size_t x = 0; x < d.L.objects.size(); ++x) {
        const auto& l = d.L.objects[x];
        const auto& y1 = d.G1.objects.at(d.phi1.obj[x]);
        const auto& y2 = d.G2.objects.at(d.phi2.obj[x]);
        const Mat &p1 = d.phi1.c0[x], &p2 = d.phi2.c0[x];
        std::size_t n = l.n, r1 = y1.r, r2 = y2.r;
        Mat e(y1.n + y2.n + n, n + r1 + r2);
        e.set_block(0, 0, p1);
        e.set_block(0, n, -y1.rho);
        e.set_block(y1.n, 0, p2);
        e.set_block(y1.n, n + r1, -y2.rho);
        e.set_block(y1.n + y2.n, 0, d.gamma[x].transpose());
        e.set_block(y1.n + y2.n, n, -(p1.transpose() * y1.sigma));
        e.set_block(y1.n + y2.n, n + r1, p2.transpose() * y2.sigma);
        Subspace fp = kernel(e);
        Mat m = vstack(vstack(l.rho, d.phi1.cA[x]), d.phi2.cA[x]);
        bij.rank("L " + obj_label(x) + " fiber product", static_cast<std::int64_t>(fp.dim()));
        bool ok = (e * m).is_zero() && is_injective(m) && rank(m) == fp.dim();
        bij.tick();
        if (!ok) {
            std::string w = "L " + obj_label(x) + ": rank " + std::to_string(rank(m)) + " of " + std::to_string(fp.dim());
            if (hyp)
                bij.fail(w);
            else
                bij.violate(w);
        }
    }

    Check& lag = rep.check("smorita.lagrangian", "graph(gamma) is 1-shifted Lagrangian on L -> G1 x G2^-");
    {
        GroupoidBundle target = product_bundle(d.G1, opposite(d.G2));
        std::size_t n2 = d.G2.objects.size(), m2 = d.G2.arrows.size();
        CoisotropicDatum cd{d.L, target, {}, {}};
        for (std::size_t x = 0; x < d.L.objects.size(); ++x) {
            std::size_t k = d.phi1.obj[x] * n2 + d.phi2.obj[x];
            cd.c.obj.push_back(k);
            cd.c.c0.push_back(vstack(d.phi1.c0[x], d.phi2.c0[x]));
            cd.c.cA.push_back(vstack(d.phi1.cA[x], d.phi2.cA[x]));
            cd.C.objects[x].phi = target.objects[k].phi.pullback(cd.c.c0[x]);
            cd.L.push_back(graph_two_form(d.gamma[x]));
        }
        for (std::size_t j = 0; j < d.L.arrows.size(); ++j) {
            cd.c.arrow.push_back(d.phi1.arrow[j] * m2 + d.phi2.arrow[j]);
            cd.c.c1.push_back(vstack(d.phi1.c1[j], d.phi2.c1[j]));
        }
        Report r = is_coisotropic(cd);
        for (std::size_t x = 0; x < d.L.objects.size(); ++x) {
            auto nm = nondeg_map(cd, x);
            Check& nd = r.check("lagrangian.nondegenerate");
            nd.expect(nm.surjective && nm.injective, "L " + obj_label(x));
        }
        conclude(lag, hyp, r);
    }

    if (!d.delta.empty()) {
        Check& del = rep.check("smorita.delta", "stored delta = -g^* gamma + theta1^* w1 - theta2^* w2");
        auto dl = connecting_form(d);
        for (std::size_t x = 0; x < dl.size(); ++x) del.expect(d.delta.at(x) == dl[x], "K " + obj_label(x));
    }
    return rep;
}

MoritaEquivalenceDatum reverse(const MoritaEquivalenceDatum& d) {
    MoritaEquivalenceDatum r = d;
    std::swap(r.C1, r.C2);
    std::swap(r.G1, r.G2);
    std::swap(r.psi1, r.psi2);
    std::swap(r.phi1, r.phi2);
    std::swap(r.c1, r.c2);
    std::swap(r.theta1, r.theta2);
    for (auto& g : r.gamma) g = -g;
    for (auto& g : r.dgamma) g = -g;
    for (auto& g : r.delta) g = -g;
    return r;
}

TransferResult transfer(const MoritaEquivalenceDatum& d, const std::vector<DiracFiber>& L1) {
    if (L1.size() != d.C1.objects.size()) throw std::invalid_argument("transfer: one fiber per C1 object");
    require_cover(d.psi1, d.K, "transfer");
    require_cover(d.psi2, d.K, "transfer");
    TransferResult out;
    Report& rep = out.report;
    rep = Report("transfer");
    Check& in = rep.check("transfer.inputs", "L1 coisotropic and the datum a symplectic Morita equivalence");
    CoisotropicDatum first{d.C1, d.G1, d.c1, L1};
    in.tick();
    Report r1 = is_coisotropic(first), rm = symplectic_morita_check(d);
    for (const auto& k : r1.checks())
        if (k.status != Status::pass && !k.diagnostic) in.violate("L1: " + k.id);
    for (const auto& k : rm.checks())
        if (k.status != Status::pass && !k.diagnostic) in.violate("datum: " + k.id);
    bool hyp = in.ok();

    auto delta = connecting_form(d);
    for (std::size_t x = 0; x < d.K.objects.size(); ++x)
        out.L0.push_back(gauge(pullback(d.psi1.c0[x], L1.at(d.psi1.obj[x])), delta[x]));

    GroupoidBundle k = d.K;
    for (std::size_t x = 0; x < k.objects.size(); ++x)
        k.objects[x].phi = d.C2.objects.at(d.psi2.obj[x]).phi.pullback(d.psi2.c0[x]);
    DiracDescent dd = descend_dirac(k, d.C2, d.psi2, out.L0, pulled_back_forms(d.G2, compose(d.c2, d.psi2)));
    out.L2 = dd.L;
    // compatibility of L0 is a consequence here, not a hypothesis
    Report step1;
    Check& s1 = step1.check("descent.compatibility");
    s1 = *dd.report.find("descent.compatibility");
    if (s1.status == Status::hypothesis_violated) s1.status = Status::fail;
    conclude(rep.check("transfer.step1", "t^* L0 = s^* L0 + graph(psi2^* c2^* w2)"), hyp, step1);
    Report rt;
    rt.check("descent.round_trip") = *dd.report.find("descent.round_trip");
    conclude(rep.check("transfer.round_trip", "psi2^* L2 = psi1^* L1 + graph(delta)"), hyp, rt);

    CoisotropicDatum second{d.C2, d.G2, d.c2, out.L2};
    conclude(rep.check("transfer.coisotropic", "L2 is 1-shifted coisotropic on c2"), hyp, is_coisotropic(second));
    if (d.strict && is_strong(first).passed())
        conclude(rep.check("transfer.strong", "strong is preserved by strict equivalences"), hyp, is_strong(second));
    return out;
}

Report gauge_equiv_check(const GroupoidBundle& c, const std::vector<DiracFiber>& L, const std::vector<DiracFiber>& Lp,
                         const std::vector<Mat>& beta, const std::vector<ThreeForm>& dbeta) {
    std::size_t n = c.objects.size();
    if (L.size() != n || Lp.size() != n || beta.size() != n || dbeta.size() != n)
        throw std::invalid_argument("gauge equivalence: one entry per object");
    Report rep("gauge");
    Check& rel = rep.check("gauge.relation", "L' = L + graph(beta)");
    Check& basic = rep.check("gauge.basic", "s^* beta = t^* beta");
    Check& closed = rep.check("gauge.closed", "d beta = 0");
    for (std::size_t x = 0; x < n; ++x) {
        rel.expect(Lp[x] == gauge(L[x], beta[x]), obj_label(x));
        closed.expect(dbeta[x].is_zero(), obj_label(x));
    }
    for (std::size_t j = 0; j < c.arrows.size(); ++j) {
        const auto& a = c.arrows[j];
        basic.expect(pullback_form(a.s_star, beta[a.src]) == pullback_form(a.t_star, beta[a.tgt]), arrow_label(j));
    }
    return rep;
}

std::vector<ChainPoint> chain_points(const MoritaEquivalenceDatum& d1, const MoritaEquivalenceDatum& d2) {
    std::vector<ChainPoint> out;
    for (std::size_t k1 = 0; k1 < d1.K.objects.size(); ++k1)
        for (std::size_t k2 = 0; k2 < d2.K.objects.size(); ++k2)
            for (std::size_t c = 0; c < d1.C2.arrows.size(); ++c) {
                const auto& a = d1.C2.arrows[c];
                if (a.src == d1.psi2.obj[k1] && a.tgt == d2.psi1.obj[k2]) out.push_back({k1, c, k2});
            }
    return out;
}

Report transfer_composition_check(const MoritaEquivalenceDatum& d1, const MoritaEquivalenceDatum& d2,
                                  const std::vector<DiracFiber>& L1) {
    if (d1.C2.objects.size() != d2.C1.objects.size() || d1.C2.arrows.size() != d2.C1.arrows.size() ||
        d1.G2.objects.size() != d2.G1.objects.size())
        throw std::invalid_argument("composition: the equivalences do not share the middle");
    Report rep("composition");
    auto t1 = transfer(d1, L1);
    auto t2 = transfer(d2, t1.L2);
    Check& tr = rep.check("comp.transfers", "both transfers succeed");
    conclude(tr, false, t1.report);
    conclude(tr, false, t2.report);

    Check& hyp = rep.check("comp.hypothesis", "c2(c) joins phi12 g1(k1) to phi22 g2(k2)");
    Check& cf = rep.check("comp.connecting_form", "delta-hat = pr1^* delta1 + pr2^* delta2 + eta^* c2^* w2 + zeta");
    Check& inv = rep.check("comp.invariance", "the composite transfer agrees over each C3 object");
    Check& zd = rep.check("comp.zeta_descends", "zeta = psi-hat2^* beta");
    Check& ge = rep.check("comp.gauge", "composite transfer = T2(T1(L1)) + graph(beta)");
    Check& basic = rep.check("comp.basic", "beta basic on C3");

    auto delta1 = connecting_form(d1);
    auto delta2 = connecting_form(d2);
    std::size_t n3 = d2.C2.objects.size();
    std::vector<std::optional<DiracFiber>> composite(n3);
    std::vector<std::optional<Mat>> beta(n3);
    for (const auto& pt : chain_points(d1, d2)) {
        std::string at = "(" + std::to_string(pt.k1) + ", " + std::to_string(pt.c) + ", " + std::to_string(pt.k2) + ")";
        const auto& ca = d1.C2.arrows[pt.c];
        const Mat& q1 = d1.psi2.c0[pt.k1];
        const Mat& q2 = d2.psi1.c0[pt.k2];
        std::size_t n1 = q1.cols(), m = ca.m, n2 = q2.cols();
        Mat e(q1.rows() + q2.rows(), n1 + m + n2);
        e.set_block(0, 0, q1);
        e.set_block(0, n1, -ca.s_star);
        e.set_block(q1.rows(), n1, -ca.t_star);
        e.set_block(q1.rows(), n1 + m, q2);
        Mat p = kernel(e).columns();
        Mat pr1 = p.block(0, 0, n1, p.cols()), pr0 = p.block(n1, 0, m, p.cols()),
            pr2 = p.block(n1 + m, 0, n2, p.cols());

        std::size_t l1 = d1.gmap.obj[pt.k1], l2 = d2.gmap.obj[pt.k2];
        std::size_t gc = d1.c2.arrow.at(pt.c);
        const auto& ga = d1.G2.arrows.at(gc);
        hyp.tick();
        if (ga.src != d1.phi2.obj[l1] || ga.tgt != d2.phi1.obj[l2]) {
            hyp.violate(at);
            continue;
        }
        Mat mid = pullback_form(d1.c2.c1.at(pt.c) * pr0, ga.omega);
        Mat g_gamma = pullback_form(d1.gmap.c0[pt.k1] * pr1, d1.gamma.at(l1)) +
                      pullback_form(d2.gmap.c0[pt.k2] * pr2, d2.gamma.at(l2)) - mid;
        Mat th1 = pullback_form(d1.theta1.theta_star[pt.k1] * pr1, d1.G1.arrows.at(d1.theta1.arrow[pt.k1]).omega);
        Mat th3 = pullback_form(d2.theta2.theta_star[pt.k2] * pr2, d2.G2.arrows.at(d2.theta2.arrow[pt.k2]).omega);
        Mat dhat = -g_gamma + th1 - th3;
        Mat zeta = pullback_form(d1.theta2.theta_star[pt.k1] * pr1, d1.G2.arrows.at(d1.theta2.arrow[pt.k1]).omega) -
                   pullback_form(d2.theta1.theta_star[pt.k2] * pr2, d2.G1.arrows.at(d2.theta1.arrow[pt.k2]).omega);
        Mat parts = pullback_form(pr1, delta1[pt.k1]) + pullback_form(pr2, delta2[pt.k2]) + mid + zeta;
        cf.expect(dhat == parts, at + ": defect " + fmt(dhat - parts));

        Mat psi1 = d1.psi1.c0[pt.k1] * pr1;
        Mat psi2 = d2.psi2.c0[pt.k2] * pr2;
        std::size_t z = d2.psi2.obj[pt.k2];
        DiracFiber l0 = gauge(pullback(psi1, L1.at(d1.psi1.obj[pt.k1])), dhat);
        DiracFiber l3 = pushforward(psi2, l0);
        inv.expect(!composite[z] || *composite[z] == l3, at);
        if (!composite[z]) composite[z] = l3;

        zd.tick();
        Mat b;
        try {
            Mat f = right_inverse(psi2);
            b = pullback_form(f, zeta);
        } catch (const std::domain_error&) {
            zd.fail(at + ": psi-hat2 not onto");
            continue;
        }
        if (pullback_form(psi2, b) != zeta) zd.fail(at + ": zeta does not factor");
        if (beta[z] && *beta[z] != b) zd.fail(at + ": beta differs along the fiber");
        if (!beta[z]) beta[z] = b;
    }
    for (std::size_t z = 0; z < n3; ++z) {
        if (!composite[z] || !beta[z] || z >= t2.L2.size()) continue;
        ge.expect(*composite[z] == gauge(t2.L2[z], *beta[z]), "C3 " + obj_label(z));
    }
    for (std::size_t j = 0; j < d2.C2.arrows.size(); ++j) {
        const auto& a = d2.C2.arrows[j];
        if (!beta[a.src] || !beta[a.tgt]) continue;
        basic.expect(pullback_form(a.s_star, *beta[a.src]) == pullback_form(a.t_star, *beta[a.tgt]), arrow_label(j));
    }
    return rep;
}

}  // namespace diraclab
