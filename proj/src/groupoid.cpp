#include "diraclab/groupoid.hpp"

#include <cstdlib>
#include <sstream>

namespace diraclab {

namespace {

void need(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("malformed groupoid bundle: " + what);
}

bool shape(const Mat& m, std::size_t r, std::size_t c) { return m.rows() == r && m.cols() == c; }

std::string at_object(std::size_t i) { return "object " + std::to_string(i); }
std::string at_arrow(std::size_t i) { return "arrow " + std::to_string(i); }

}  // namespace

std::optional<std::size_t> GroupoidBundle::unit_of(std::size_t x) const {
    for (std::size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i].unit && arrows[i].src == x) return i;
    return std::nullopt;
}

void GroupoidBundle::validate() const {
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const auto& o = objects[i];
        need(shape(o.rho, o.n, o.r), at_object(i) + " anchor shape");
        need(shape(o.sigma, o.n, o.r), at_object(i) + " sigma shape");
        need(o.phi.dim() == o.n, at_object(i) + " 3-form dimension");
    }
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        const auto& a = arrows[i];
        need(a.src < objects.size() && a.tgt < objects.size(), at_arrow(i) + " endpoint index");
        const auto& s = objects[a.src];
        const auto& t = objects[a.tgt];
        need(shape(a.s_star, s.n, a.m), at_arrow(i) + " source map shape");
        need(shape(a.t_star, t.n, a.m), at_arrow(i) + " target map shape");
        need(shape(a.omega, a.m, a.m) && is_antisymmetric(a.omega), at_arrow(i) + " 2-form");
        need(shape(a.Lg, a.m, s.r), at_arrow(i) + " left translation shape");
        need(shape(a.Rg, a.m, t.r), at_arrow(i) + " right translation shape");
        if (a.unit) {
            need(a.src == a.tgt, at_arrow(i) + " unit with distinct endpoints");
            need(shape(a.u_star, a.m, s.n), at_arrow(i) + " unit map shape");
        }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        need(p.g < arrows.size() && p.h < arrows.size() && p.gh < arrows.size(), "pair index");
        const auto& g = arrows[p.g];
        const auto& h = arrows[p.h];
        const auto& gh = arrows[p.gh];
        need(g.src == h.tgt, "pair " + std::to_string(i) + " not composable");
        need(gh.src == h.src && gh.tgt == g.tgt, "pair " + std::to_string(i) + " product endpoints");
        need(shape(p.m_star, gh.m, g.m + h.m), "pair " + std::to_string(i) + " multiplication shape");
    }
}

Samples Samples::from_env() {
    Samples s;
    const char* env = std::getenv("DIRACLAB_SAMPLES");
    if (!env || !*env) return s;
    std::string text(env);
    std::vector<std::size_t> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t v = std::stoul(item);
        if (v == 0) throw std::invalid_argument("DIRACLAB_SAMPLES entries must be positive");
        vals.push_back(v);
    }
    if (vals.size() == 1) return Samples{vals[0], vals[0], vals[0]};
    if (vals.size() != 3) throw std::invalid_argument("DIRACLAB_SAMPLES wants one or three counts");
    return Samples{vals[0], vals[1], vals[2]};
}

Mat composable_tangents(const ArrowFiber& g, const ArrowFiber& h) {
    return kernel(hstack(g.s_star, -h.t_star)).columns();
}

Report qs_check(const GroupoidBundle& g) {
    g.validate();
    if (g.objects.empty()) throw std::invalid_argument("malformed groupoid bundle: no objects");
    Report rep("qs");
    Check& item1 = rep.check("qs.lemma.item1", "rho^T sigma + sigma^T rho = 0");
    Check& item2 = rep.check("qs.lemma.item2", "ker rho meet ker sigma = 0");
    Check& item3 = rep.check("qs.lemma.item3", "ker(rho^* + sigma^*) = im(rho, sigma)");
    Check& item4 = rep.check("qs.lemma.item4", "s^T sigma(a) = i_{a^L} omega");
    Check& dimc = rep.check("qs.dimension", "dim T_g = 2 dim T_x");
    Check& kunit = rep.check("qs.kernel.units", "ker omega meet ker s meet ker t = 0 at units");
    Check& karrow = rep.check("qs.kernel.arrows", "ker omega meet ker s meet ker t = 0 at every sampled arrow");
    karrow.diagnostic = true;
    Check& iso = rep.check("qs.unit.isotropic", "u^* omega = 0");
    Check& sections = rep.check("qs.unit.sections", "s u = t u = id");
    Check& sigdef = rep.check("qs.sigma.definition", "sigma(a) = u^*(i_a omega)");
    Check& anchor = rep.check("qs.anchor.definition", "rho = t R, s R = 0, L = R - u rho at units");
    Check& transl = rep.check("qs.translations", "s L = -rho, t R = rho, t L = 0, s R = 0");
    Check& mult = rep.check("qs.multiplicative", "m^* omega = pr1^* omega + pr2^* omega");
    Check& tid = rep.check("qs.translation_identity", "m_*(v, a) = v + a^L_g");
    Check& pend = rep.check("qs.pair.structure", "s m = s pr2, t m = t pr1 on composable tangents");

    for (std::size_t i = 0; i < g.objects.size(); ++i) {
        const auto& o = g.objects[i];
        Mat sym = o.rho.transpose() * o.sigma + o.sigma.transpose() * o.rho;
        item1.tick();
        if (!sym.is_zero()) {
            for (std::size_t a = 0; a < o.r; ++a)
                for (std::size_t b = 0; b < o.r; ++b)
                    if (sgn(sym(a, b)) != 0) {
                        item1.fail(at_object(i) + ": a = e" + std::to_string(a) + ", b = e" + std::to_string(b) +
                                   ", <sigma a, rho b> + <sigma b, rho a> = " + fmt(sym(a, b)));
                        a = b = o.r;
                    }
        }
        Mat stacked = vstack(o.rho, o.sigma);
        Subspace joint = kernel(stacked);
        item2.expect(joint.dim() == 0, joint.dim() ? at_object(i) + ": a = " + fmt(joint.vector(0)) : "");
        item2.rank(at_object(i), static_cast<std::int64_t>(rank(o.rho)));
        Subspace lhs = kernel(hstack(o.sigma.transpose(), o.rho.transpose()));
        Subspace rhs = column_space(stacked);
        item3.expect(lhs == rhs, at_object(i) + ": ker = " + fmt(lhs) + ", im = " + fmt(rhs));
    }

    for (std::size_t j = 0; j < g.arrows.size(); ++j) {
        const auto& a = g.arrows[j];
        const auto& src = g.objects[a.src];
        const auto& tgt = g.objects[a.tgt];
        Mat lhs = a.s_star.transpose() * src.sigma;
        Mat rhs = a.omega.transpose() * a.Lg;
        item4.tick();
        if (lhs != rhs)
            for (std::size_t c = 0; c < src.r; ++c)
                if (lhs.col(c) != rhs.col(c)) {
                    item4.fail(at_arrow(j) + ": a = e" + std::to_string(c) + ", s^T sigma a = " + fmt(lhs.col(c)) +
                               ", i_{a^L} omega = " + fmt(rhs.col(c)));
                    break;
                }
        dimc.expect(a.m == 2 * src.n && src.n == tgt.n,
                    at_arrow(j) + ": dim T_g = " + std::to_string(a.m) + ", dim T_x = " + std::to_string(src.n));
        Subspace k = kernel(vstack(a.omega, vstack(a.s_star, a.t_star)));
        std::string kw = k.dim() ? at_arrow(j) + ": v = " + fmt(k.vector(0)) : "";
        karrow.expect(k.dim() == 0, kw);
        bool ok = (a.s_star * a.Lg == -src.rho) && (a.t_star * a.Rg == tgt.rho) && (a.t_star * a.Lg).is_zero() &&
                  (a.s_star * a.Rg).is_zero();
        transl.expect(ok, at_arrow(j));
        if (!a.unit) continue;
        kunit.expect(k.dim() == 0, kw);
        iso.expect(pullback_form(a.u_star, a.omega).is_zero(), at_arrow(j) + ": u^* omega = " +
                                                                    fmt(pullback_form(a.u_star, a.omega)));
        Mat id = Mat::identity(src.n);
        sections.expect(a.s_star * a.u_star == id && a.t_star * a.u_star == id, at_arrow(j));
        Mat sig = a.u_star.transpose() * a.omega.transpose() * a.Rg;
        sigdef.expect(sig == src.sigma, at_arrow(j) + ": computed " + fmt(sig) + ", stored " + fmt(src.sigma));
        anchor.expect(a.t_star * a.Rg == src.rho && (a.s_star * a.Rg).is_zero() &&
                          a.Lg == a.Rg - a.u_star * src.rho && rank(a.Rg) == src.r,
                      at_arrow(j));
    }

    for (std::size_t p = 0; p < g.pairs.size(); ++p) {
        const auto& pr = g.pairs[p];
        const auto& ag = g.arrows[pr.g];
        const auto& ah = g.arrows[pr.h];
        const auto& agh = g.arrows[pr.gh];
        Mat basis = composable_tangents(ag, ah);
        Mat lhs = pullback_form(pr.m_star * basis, agh.omega);
        Mat rhs = pullback_form(basis, block_diag(ag.omega, ah.omega));
        mult.expect(lhs == rhs, "pair " + std::to_string(p) + ": m^* omega - pr^* omega = " + fmt(lhs - rhs));
        Mat pr1(ag.m, ag.m + ah.m), pr2(ah.m, ag.m + ah.m);
        pr1.set_block(0, 0, Mat::identity(ag.m));
        pr2.set_block(0, ag.m, Mat::identity(ah.m));
        pend.expect(agh.s_star * pr.m_star * basis == ah.s_star * pr2 * basis &&
                        agh.t_star * pr.m_star * basis == ag.t_star * pr1 * basis,
                    "pair " + std::to_string(p));
        if (!ah.unit || pr.gh != pr.g) continue;
        // (v, a) with s_* v = rho a; the algebroid element sits at the unit as R a.
        const auto& x = g.objects[ah.src];
        Mat constraint = hstack(ag.s_star, -x.rho);
        Mat va = kernel(constraint).columns();
        Mat v = va.block(0, 0, ag.m, va.cols());
        Mat aa = va.block(ag.m, 0, x.r, va.cols());
        Mat lhs2 = pr.m_star * vstack(v, ah.Rg * aa);
        Mat rhs2 = v + ag.Lg * aa;
        tid.expect(lhs2 == rhs2, "pair " + std::to_string(p) + ": defect " + fmt(lhs2 - rhs2));
    }
    return rep;
}

DiracFiber induced_dirac(const ObjectFiber& x) { return make_dirac(x.n, column_space(vstack(x.rho, x.sigma))); }

Report compatibility_check(const ArrowFiber& arrow, const DiracFiber& l_src, const DiracFiber& l_tgt,
                           const Mat& form) {
    Report rep("compatibility");
    Check& c = rep.check("coiso.compatibility", "t^* L = s^* L + graph(c^* omega)");
    if (l_src.n != arrow.s_star.rows() || l_tgt.n != arrow.t_star.rows() || form.rows() != arrow.m)
        throw DimensionError("compatibility check: ambient mismatch");
    DiracFiber lhs = pullback(arrow.t_star, l_tgt);
    DiracFiber rhs = gauge(pullback(arrow.s_star, l_src), form);
    c.expect(lhs == rhs, "t^*L = " + fmt(lhs.L) + ", s^*L + graph = " + fmt(rhs.L));
    return rep;
}

GroupoidBundle gauge_qs(const GroupoidBundle& g, const std::vector<Mat>& gamma, const std::vector<ThreeForm>& dgamma) {
    if (gamma.size() != g.objects.size() || dgamma.size() != g.objects.size())
        throw DimensionError("gauge: one 2-form and one 3-form per object");
    GroupoidBundle out = g;
    out.name = g.name + "+gauge";
    for (std::size_t i = 0; i < g.objects.size(); ++i) {
        auto& o = out.objects[i];
        if (!shape(gamma[i], o.n, o.n) || !is_antisymmetric(gamma[i]) || dgamma[i].dim() != o.n)
            throw DimensionError("gauge: form shape mismatch");
        o.phi = o.phi + dgamma[i];
        o.sigma = o.sigma + gamma[i] * o.rho;
    }
    for (auto& a : out.arrows)
        a.omega = a.omega + pullback_form(a.s_star, gamma[a.src]) - pullback_form(a.t_star, gamma[a.tgt]);
    return out;
}

GroupoidBundle opposite(const GroupoidBundle& g) {
    GroupoidBundle out = g;
    out.name = g.name + "^-";
    for (auto& o : out.objects) {
        o.sigma = -o.sigma;
        o.phi = -o.phi;
    }
    for (auto& a : out.arrows) a.omega = -a.omega;
    return out;
}

GroupoidBundle point_groupoid() {
    GroupoidBundle g;
    g.name = "point";
    g.objects.push_back(ObjectFiber{0, 0, Mat(0, 0), Mat(0, 0), ThreeForm(0)});
    ArrowFiber u;
    u.s_star = u.t_star = u.omega = u.Lg = u.Rg = u.u_star = Mat(0, 0);
    u.unit = true;
    g.arrows.push_back(u);
    g.pairs.push_back(PairFiber{0, 0, 0, Mat(0, 0)});
    return g;
}

ThreeForm direct_sum(const ThreeForm& a, const ThreeForm& b) {
    std::size_t n = a.dim() + b.dim();
    Mat p1(a.dim(), n), p2(b.dim(), n);
    p1.set_block(0, 0, Mat::identity(a.dim()));
    p2.set_block(0, a.dim(), Mat::identity(b.dim()));
    return a.pullback(p1) + b.pullback(p2);
}

ObjectFiber product_object(const ObjectFiber& a, const ObjectFiber& b) {
    return ObjectFiber{a.n + b.n, a.r + b.r, block_diag(a.rho, b.rho), block_diag(a.sigma, b.sigma),
                       direct_sum(a.phi, b.phi)};
}

ArrowFiber product_arrow(const ArrowFiber& a, const ArrowFiber& b, std::size_t src, std::size_t tgt) {
    ArrowFiber p;
    p.src = src;
    p.tgt = tgt;
    p.m = a.m + b.m;
    p.s_star = block_diag(a.s_star, b.s_star);
    p.t_star = block_diag(a.t_star, b.t_star);
    p.omega = block_diag(a.omega, b.omega);
    p.Lg = block_diag(a.Lg, b.Lg);
    p.Rg = block_diag(a.Rg, b.Rg);
    p.unit = a.unit && b.unit;
    if (p.unit) p.u_star = block_diag(a.u_star, b.u_star);
    return p;
}

GroupoidBundle product_bundle(const GroupoidBundle& a, const GroupoidBundle& b) {
    GroupoidBundle p;
    p.name = a.name + " x " + b.name;
    std::size_t nb = b.objects.size(), mb = b.arrows.size();
    for (const auto& x : a.objects)
        for (const auto& y : b.objects) p.objects.push_back(product_object(x, y));
    for (const auto& g : a.arrows)
        for (const auto& h : b.arrows) p.arrows.push_back(product_arrow(g, h, g.src * nb + h.src, g.tgt * nb + h.tgt));
    for (const auto& q : a.pairs)
        for (const auto& r : b.pairs) {
            // (ga, gb, ha, hb) -> (ga, ha) and (gb, hb)
            std::size_t ga = a.arrows[q.g].m, ha = a.arrows[q.h].m;
            std::size_t gb = b.arrows[r.g].m, hb = b.arrows[r.h].m;
            Mat m(q.m_star.rows() + r.m_star.rows(), ga + gb + ha + hb);
            m.set_block(0, 0, q.m_star.block(0, 0, q.m_star.rows(), ga));
            m.set_block(0, ga + gb, q.m_star.block(0, ga, q.m_star.rows(), ha));
            m.set_block(q.m_star.rows(), ga, r.m_star.block(0, 0, r.m_star.rows(), gb));
            m.set_block(q.m_star.rows(), ga + gb + ha, r.m_star.block(0, gb, r.m_star.rows(), hb));
            p.pairs.push_back(PairFiber{q.g * mb + r.g, q.h * mb + r.h, q.gh * mb + r.gh, m});
        }
    return p;
}

MorphismFiber identity_morphism(const GroupoidBundle& g) {
    MorphismFiber f;
    for (std::size_t i = 0; i < g.objects.size(); ++i) {
        f.obj.push_back(i);
        f.c0.push_back(Mat::identity(g.objects[i].n));
        f.cA.push_back(Mat::identity(g.objects[i].r));
    }
    for (std::size_t j = 0; j < g.arrows.size(); ++j) {
        f.arrow.push_back(j);
        f.c1.push_back(Mat::identity(g.arrows[j].m));
    }
    return f;
}

Report morphism_check(const GroupoidBundle& c, const GroupoidBundle& g, const MorphismFiber& f) {
    c.validate();
    g.validate();
    if (f.obj.size() != c.objects.size() || f.c0.size() != c.objects.size() || f.cA.size() != c.objects.size() ||
        f.arrow.size() != c.arrows.size() || f.c1.size() != c.arrows.size())
        throw std::invalid_argument("morphism fiber does not cover the source bundle");
    Report rep("morphism");
    Check& idx = rep.check("morph.indices", "c(s h) = s c(h), c(t h) = t c(h) on sampled indices");
    Check& src = rep.check("morph.source", "s c1 = c0 s");
    Check& tgt = rep.check("morph.target", "t c1 = c0 t");
    Check& units = rep.check("morph.units", "units to units, c1 u = u c0");
    Check& transl = rep.check("morph.translations", "c1 R = R cA, c1 L = L cA");
    Check& anch = rep.check("morph.anchor", "c0 rho = rho cA");
    for (std::size_t i = 0; i < c.objects.size(); ++i) {
        const auto& x = c.objects[i];
        bool ok = f.obj[i] < g.objects.size();
        idx.expect(ok, at_object(i) + " maps outside the target");
        if (!ok) continue;
        const auto& y = g.objects[f.obj[i]];
        if (!shape(f.c0[i], y.n, x.n) || !shape(f.cA[i], y.r, x.r))
            throw DimensionError("morphism object map shape at " + at_object(i));
        anch.expect(f.c0[i] * x.rho == y.rho * f.cA[i], at_object(i));
    }
    for (std::size_t j = 0; j < c.arrows.size(); ++j) {
        const auto& a = c.arrows[j];
        bool ok = f.arrow[j] < g.arrows.size() && g.arrows[f.arrow[j]].src == f.obj[a.src] &&
                  g.arrows[f.arrow[j]].tgt == f.obj[a.tgt];
        idx.expect(ok, at_arrow(j) + " endpoints do not match");
        if (!ok) continue;
        const auto& b = g.arrows[f.arrow[j]];
        if (!shape(f.c1[j], b.m, a.m)) throw DimensionError("morphism arrow map shape at " + at_arrow(j));
        src.expect(b.s_star * f.c1[j] == f.c0[a.src] * a.s_star, at_arrow(j));
        tgt.expect(b.t_star * f.c1[j] == f.c0[a.tgt] * a.t_star, at_arrow(j));
        transl.expect(f.c1[j] * a.Rg == b.Rg * f.cA[a.tgt] && f.c1[j] * a.Lg == b.Lg * f.cA[a.src], at_arrow(j));
        if (a.unit) units.expect(b.unit && f.c1[j] * a.u_star == b.u_star * f.c0[a.src], at_arrow(j));
    }
    return rep;
}

MorphismFiber compose(const MorphismFiber& second, const MorphismFiber& first) {
    MorphismFiber f;
    for (std::size_t i = 0; i < first.obj.size(); ++i) {
        std::size_t k = first.obj[i];
        f.obj.push_back(second.obj.at(k));
        f.c0.push_back(second.c0.at(k) * first.c0[i]);
        f.cA.push_back(second.cA.at(k) * first.cA[i]);
    }
    for (std::size_t j = 0; j < first.arrow.size(); ++j) {
        std::size_t k = first.arrow[j];
        f.arrow.push_back(second.arrow.at(k));
        f.c1.push_back(second.c1.at(k) * first.c1[j]);
    }
    return f;
}

std::vector<Mat> pullback_by_transformation(const GroupoidBundle& g, const NatTransFiber& t) {
    std::vector<Mat> out;
    for (std::size_t x = 0; x < t.arrow.size(); ++x)
        out.push_back(pullback_form(t.theta_star[x], g.arrows.at(t.arrow[x]).omega));
    return out;
}

Report nat_trans_form_identity(const GroupoidBundle& h, const GroupoidBundle& g, const MorphismFiber& f,
                               const MorphismFiber& gm, const NatTransFiber& theta) {
    if (theta.arrow.size() != h.objects.size() || theta.theta_star.size() != h.objects.size())
        throw std::invalid_argument("transformation fiber does not cover the objects");
    Report rep("nat");
    Check& ends = rep.check("nat.endpoints", "s theta_* = f_*, t theta_* = g_*");
    Check& form = rep.check("nat.form_identity", "g^* w - f^* w = t^* theta^* w - s^* theta^* w");
    for (std::size_t x = 0; x < h.objects.size(); ++x) {
        const auto& a = g.arrows.at(theta.arrow[x]);
        ends.expect(a.src == f.obj[x] && a.tgt == gm.obj[x] && a.s_star * theta.theta_star[x] == f.c0[x] &&
                        a.t_star * theta.theta_star[x] == gm.c0[x],
                    at_object(x));
    }
    auto tw = pullback_by_transformation(g, theta);
    for (std::size_t j = 0; j < h.arrows.size(); ++j) {
        const auto& a = h.arrows[j];
        Mat lhs = pullback_form(gm.c1[j], g.arrows.at(gm.arrow[j]).omega) -
                  pullback_form(f.c1[j], g.arrows.at(f.arrow[j]).omega);
        Mat rhs = pullback_form(a.t_star, tw[a.tgt]) - pullback_form(a.s_star, tw[a.src]);
        form.expect(lhs == rhs, at_arrow(j) + ": defect " + fmt(lhs - rhs));
    }
    return rep;
}

Report vertical_composite_identity(const GroupoidBundle& g, const NatTransFiber& eta, const NatTransFiber& theta,
                                   const std::vector<std::size_t>& pair_of, NatTransFiber* composite) {
    Report rep("nat");
    Check& c = rep.check("nat.vertical_composite", "(eta * theta)^* w = eta^* w + theta^* w");
    NatTransFiber out;
    auto ew = pullback_by_transformation(g, eta);
    auto tw = pullback_by_transformation(g, theta);
    for (std::size_t x = 0; x < eta.arrow.size(); ++x) {
        const auto& p = g.pairs.at(pair_of.at(x));
        if (p.g != eta.arrow[x] || p.h != theta.arrow[x])
            throw std::invalid_argument("pair fiber does not match the two transformations");
        Mat star = p.m_star * vstack(eta.theta_star[x], theta.theta_star[x]);
        out.arrow.push_back(p.gh);
        out.theta_star.push_back(star);
        Mat lhs = pullback_form(star, g.arrows[p.gh].omega);
        c.expect(lhs == ew[x] + tw[x], at_object(x) + ": defect " + fmt(lhs - ew[x] - tw[x]));
    }
    if (composite) *composite = out;
    return rep;
}

}  // namespace diraclab
