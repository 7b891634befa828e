#include "diraclab/scenarios.hpp"

#include <limits>
#include <map>

namespace diraclab {

namespace {

std::string at(std::size_t i) { return "object " + std::to_string(i); }

Mat column(const Vec& v) { return Mat::from_columns(v.size(), {v}); }
Mat row(const Vec& v) { return Mat::from_rows(v.size(), {v}); }

// J on C^n in (x, y) coordinates: (x, y) -> (-y, x).
Vec complex_i(const Vec& z) {
    std::size_t n = z.size() / 2;
    Vec out(z.size());
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = -z[n + i];
        out[n + i] = z[i];
    }
    return out;
}

struct Cq {
    Q re, im;
};
Cq mul(const Cq& a, const Cq& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Cq inverse(const Cq& a) {
    Q d = a.re * a.re + a.im * a.im;
    return {a.re / d, -a.im / d};
}
Cq coordinate(const Vec& z, std::size_t j) {
    std::size_t n = z.size() / 2;
    return {z[j], z[n + j]};
}

bool is_identity(const Rotation& r) { return r.c == 1 && r.s == 0; }

std::optional<std::size_t> find_rotation(const std::vector<Rotation>& rs, const Rotation& r) {
    for (std::size_t k = 0; k < rs.size(); ++k)
        if (rs[k] == r) return k;
    return std::nullopt;
}

ObjectFiber chart_object(std::size_t d) { return ObjectFiber{d, 0, Mat(d, 0), Mat(d, 0), ThreeForm(d)}; }

// Every sampled object at the same point groupoid arrow.
MorphismFiber to_point(const GroupoidBundle& g) {
    MorphismFiber f;
    for (const auto& o : g.objects) {
        f.obj.push_back(0);
        f.c0.push_back(Mat(0, o.n));
        f.cA.push_back(Mat(0, o.r));
    }
    for (const auto& a : g.arrows) {
        f.arrow.push_back(0);
        f.c1.push_back(Mat(0, a.m));
    }
    return f;
}

NatTransFiber units(const GroupoidBundle& g, const MorphismFiber& f) {
    NatTransFiber t;
    for (std::size_t x = 0; x < f.obj.size(); ++x) {
        std::size_t u = *g.unit_of(f.obj[x]);
        t.arrow.push_back(u);
        t.theta_star.push_back(g.arrows[u].u_star * f.c0[x]);
    }
    return t;
}

// T*S^1 over the given levels with one arrow per (level, rotation).
GroupoidBundle cotangent_circle(const std::vector<Q>& levels, const std::vector<Rotation>& rotations) {
    GroupoidBundle g;
    g.name = "cotangent-circle";
    std::size_t k = rotations.size();
    Mat mult{{1, 0, 1, 0}, {0, 0, 0, 1}};
    for (std::size_t j = 0; j < levels.size(); ++j) {
        g.objects.push_back(ObjectFiber{1, 1, Mat(1, 1), Mat{{-1}}, ThreeForm(1)});
        for (std::size_t r = 0; r < k; ++r) {
            ArrowFiber a;
            a.src = a.tgt = j;
            a.m = 2;
            a.s_star = a.t_star = Mat{{0, 1}};
            a.omega = Mat{{0, -1}, {1, 0}};
            a.Rg = a.Lg = Mat{{1}, {0}};
            a.unit = is_identity(rotations[r]);
            if (a.unit) a.u_star = Mat{{0}, {1}};
            g.arrows.push_back(a);
        }
        for (std::size_t r1 = 0; r1 < k; ++r1)
            for (std::size_t r2 = 0; r2 < k; ++r2)
                if (auto r3 = find_rotation(rotations, rotations[r1] * rotations[r2]))
                    g.pairs.push_back(PairFiber{j * k + r1, j * k + r2, j * k + *r3, mult});
    }
    return g;
}

Vec reflect(const Vec& z, const Vec& u) {
    Q t = 2 * dot(z, u) / dot(u, u);
    return z - t * u;
}

bool squares(const mpz_class& n, int k, std::vector<mpz_class>& out) {
    if (k == 1) {
        mpz_class r = sqrt(n);
        if (r * r != n) return false;
        out.push_back(r);
        return true;
    }
    for (mpz_class s = sqrt(n); s >= 0; --s) {
        out.push_back(s);
        if (squares(n - s * s, k - 1, out)) return true;
        out.pop_back();
    }
    return false;
}

Mat stack_left(const Mat& m, std::size_t rows) { return vstack(Mat(rows, m.cols()), m); }
Mat stack_right(const Mat& m, std::size_t rows) { return vstack(m, Mat(rows, m.cols())); }

void conclude(Check& ch, bool ok, const std::string& witness) {
    ch.tick();
    if (!ok) ch.fail(witness);
}

}  // namespace

Mat standard_symplectic(std::size_t k) {
    Mat w(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        w(i, k + i) = 1;
        w(k + i, i) = -1;
    }
    return w;
}

GroupoidBundle build_pair_groupoid(std::size_t n, const Mat& b, std::size_t points) {
    if (b.rows() != n || b.cols() != n) throw std::invalid_argument("pair groupoid: omega_base must be n x n");
    if (!is_antisymmetric(b)) throw std::invalid_argument("pair groupoid: omega_base is not antisymmetric");
    if (rank(b) != n) throw std::invalid_argument("pair groupoid: omega_base is degenerate");
    if (points == 0) throw std::invalid_argument("pair groupoid: at least one sampled point");
    Mat id = Mat::identity(n);
    GroupoidBundle g;
    g.name = "pair";
    for (std::size_t x = 0; x < points; ++x) g.objects.push_back(ObjectFiber{n, n, id, b.transpose(), ThreeForm(n)});
    // arrow (i, j) : j -> i has index i * points + j
    for (std::size_t i = 0; i < points; ++i)
        for (std::size_t j = 0; j < points; ++j) {
            ArrowFiber a;
            a.src = j;
            a.tgt = i;
            a.m = 2 * n;
            a.t_star = hstack(id, Mat(n, n));
            a.s_star = hstack(Mat(n, n), id);
            a.omega = block_diag(b, -b);
            a.Rg = vstack(id, Mat(n, n));
            a.Lg = vstack(Mat(n, n), -id);
            a.unit = i == j;
            if (a.unit) a.u_star = vstack(id, id);
            g.arrows.push_back(a);
        }
    Mat m(2 * n, 4 * n);
    m.set_block(0, 0, id);
    m.set_block(n, 3 * n, id);
    for (std::size_t i = 0; i < points; ++i)
        for (std::size_t j = 0; j < points; ++j)
            for (std::size_t k = 0; k < points; ++k)
                g.pairs.push_back(PairFiber{i * points + j, j * points + k, i * points + k, m});
    return g;
}

Rotation half_angle_rotation(const Q& t) {
    Q d = 1 + t * t;
    return Rotation{(1 - t * t) / d, 2 * t / d};
}

Rotation operator*(const Rotation& a, const Rotation& b) {
    return Rotation{a.c * b.c - a.s * b.s, a.s * b.c + a.c * b.s};
}

Mat rotation_matrix(const Rotation& r, std::size_t n) {
    Mat m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = r.c;
        m(i, n + i) = -r.s;
        m(n + i, i) = r.s;
        m(n + i, n + i) = r.c;
    }
    return m;
}

OrbitChart projective_chart(std::size_t n) {
    OrbitChart c;
    c.dim = n == 0 ? 0 : 2 * (n - 1);
    // for n = 1 the orbit space is a point and the chart is defined everywhere
    auto base = [n](const Vec& z) {
        if (n == 1) return Cq{1, 0};
        Cq a = coordinate(z, 0);
        if (a.re == 0 && a.im == 0) throw std::domain_error("projective chart: z_1 = 0");
        return inverse(a);
    };
    c.point = [n, base](const Vec& z) {
        Cq q = base(z);
        Vec w(2 * (n - 1));
        for (std::size_t j = 1; j < n; ++j) {
            Cq v = mul(coordinate(z, j), q);
            w[j - 1] = v.re;
            w[n - 1 + j - 1] = v.im;
        }
        return w;
    };
    c.differential = [n, base](const Vec& z) {
        Cq q = base(z);
        Mat d(2 * (n - 1), 2 * n);
        // dw = q dz_j - z_j q^2 dz_1, and p (dx + i dy) has real part p.re dx - p.im dy
        auto put = [&](std::size_t j, std::size_t var, const Cq& p) {
            std::size_t u = j - 1, v = n - 1 + j - 1;
            d(u, var) += p.re;
            d(u, n + var) -= p.im;
            d(v, var) += p.im;
            d(v, n + var) += p.re;
        };
        for (std::size_t j = 1; j < n; ++j) {
            put(j, j, q);
            Cq p = mul(mul(coordinate(z, j), q), q);
            put(j, 0, Cq{-p.re, -p.im});
        }
        return d;
    };
    return c;
}

std::optional<Vec> sphere_point(const Q& r2, std::size_t dim) {
    if (r2 < 0 || dim == 0) return r2 == 0 ? std::optional<Vec>(Vec(dim)) : std::nullopt;
    if (r2 == 0) return Vec(dim);
    mpz_class num = r2.get_num(), den = r2.get_den();
    std::vector<mpz_class> s;
    if (!squares(num * den, static_cast<int>(std::min<std::size_t>(dim, 4)), s)) return std::nullopt;
    Vec z(dim);
    for (std::size_t i = 0; i < s.size(); ++i) {
        z[i] = Q(s[i], den);
        z[i].canonicalize();
    }
    return z;
}

HamiltonianActionDatum circle_action(std::size_t n, const std::vector<Vec>& pts,
                                     const std::vector<Rotation>& rotations) {
    if (n == 0) throw std::invalid_argument("circle action: n >= 1");
    if (rotations.empty() || !is_identity(rotations[0]))
        throw std::invalid_argument("circle action: the first rotation must be the identity");
    HamiltonianActionDatum h;
    h.n = n;
    h.rotations = rotations;
    h.chart = projective_chart(n);
    std::size_t dim = 2 * n, k = rotations.size();
    std::map<Vec, std::size_t> index;
    std::map<Q, std::size_t> level_index;
    for (const auto& z : pts) {
        if (z.size() != dim) throw DimensionError("circle action: point of the wrong dimension");
        if (index.count(z)) continue;
        index[z] = h.points.size();
        h.points.push_back(z);
        Q mu = dot(z, z) / 2;
        if (!level_index.count(mu)) {
            level_index[mu] = h.levels.size();
            h.levels.push_back(mu);
        }
    }
    auto& d = h.datum;
    d.G = cotangent_circle(h.levels, rotations);
    d.C.name = "action";
    std::vector<Mat> rot;
    for (const auto& r : rotations) rot.push_back(rotation_matrix(r, n));
    Mat omega = standard_symplectic(n);
    for (const auto& z : h.points) {
        d.C.objects.push_back(ObjectFiber{dim, 1, column(complex_i(z)), Mat(dim, 1), ThreeForm(dim)});
        d.L.push_back(graph_two_form(omega));
        d.c.obj.push_back(level_index[dot(z, z) / 2]);
        d.c.c0.push_back(row(z));
        d.c.cA.push_back(Mat{{1}});
    }
    // arrow (R, z) : z -> R z with tangent (dtheta, dm)
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> arrow_of;
    for (std::size_t x = 0; x < h.points.size(); ++x) {
        const Vec& z = h.points[x];
        Vec xz = complex_i(z);
        for (std::size_t r = 0; r < k; ++r) {
            auto it = index.find(rot[r] * z);
            if (it == index.end()) continue;
            ArrowFiber a;
            a.src = x;
            a.tgt = it->second;
            a.m = dim + 1;
            a.s_star = hstack(Mat(dim, 1), Mat::identity(dim));
            a.t_star = hstack(column(rot[r] * xz), rot[r]);
            a.omega = Mat(dim + 1, dim + 1);
            a.Rg = column(unit_vec(dim + 1, 0));
            a.Lg = vstack(Mat{{1}}, column(-xz));
            a.unit = r == 0;
            if (a.unit) a.u_star = vstack(Mat(1, dim), Mat::identity(dim));
            arrow_of[{r, x}] = d.C.arrows.size();
            d.C.arrows.push_back(a);
            d.c.arrow.push_back(d.c.obj[x] * k + r);
            Mat c1(2, dim + 1);
            c1(0, 0) = 1;
            c1.set_block(1, 1, row(z));
            d.c.c1.push_back(c1);
        }
    }
    Mat mult(dim + 1, 2 * (dim + 1));
    mult(0, 0) = 1;
    mult(0, dim + 1) = 1;
    mult.set_block(1, dim + 2, Mat::identity(dim));
    for (auto [key_h, h_idx] : arrow_of) {
        auto [r2, x] = key_h;
        std::size_t w = d.C.arrows[h_idx].tgt;
        for (std::size_t r1 = 0; r1 < k; ++r1) {
            auto g_it = arrow_of.find({r1, w});
            if (g_it == arrow_of.end()) continue;
            auto r3 = find_rotation(rotations, rotations[r1] * rotations[r2]);
            if (!r3) continue;
            auto gh_it = arrow_of.find({*r3, x});
            if (gh_it == arrow_of.end()) continue;
            d.C.pairs.push_back(PairFiber{g_it->second, h_idx, gh_it->second, mult});
        }
    }
    return h;
}

HamiltonianActionDatum build_circle_hamiltonian(std::size_t n, const Q& level, std::size_t orbits, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("circle hamiltonian: n >= 1");
    if (level < 0) throw std::invalid_argument("circle hamiltonian: the moment map is nonnegative");
    auto first = sphere_point(2 * level, 2 * n);
    if (!first) throw std::invalid_argument("circle hamiltonian: no rational point found on level " + to_string(level));
    std::vector<Vec> base{*first};
    if (level > 0) {
        auto chart = projective_chart(n);
        std::vector<Vec> seen{n > 1 ? chart.point(*first) : *first};
        RationalRng rng(seed);
        for (std::size_t tries = 0; base.size() < orbits && tries < 200 * orbits; ++tries) {
            Vec u = rng.vec(2 * n, 3, 2);
            if (is_zero(u)) continue;
            Vec z = reflect(base[rng.integer(0, static_cast<long>(base.size()) - 1)], u);
            if (z[0] == 0 && z[n] == 0) continue;
            Vec key = n > 1 ? chart.point(z) : z;
            bool fresh = true;
            for (const auto& s : seen) fresh = fresh && s != key;
            if (!fresh) continue;
            seen.push_back(key);
            base.push_back(z);
        }
    }
    std::vector<Rotation> rotations{Rotation{1, 0}, half_angle_rotation(Q(1, 2)), half_angle_rotation(Q(-1, 2))};
    std::vector<Vec> pts;
    for (const auto& b : base)
        for (const auto& r : rotations) pts.push_back(rotation_matrix(r, n) * b);
    pts.push_back(Vec(2 * n));
    auto h = circle_action(n, pts, rotations);
    h.datum.C.name = "circle-action";
    return h;
}

Report hamiltonian_check(const HamiltonianActionDatum& h) {
    const auto& d = h.datum;
    Report rep("hamiltonian");
    Check& mom = rep.check("ham.moment_form", "mu^* phi_G = phi_M");
    Check& comp = rep.check("ham.action_compat", "a^* L = pr_M^* L + graph(pr_G^* omega)");
    Check& nd = rep.check("ham.nondegenerate", "ker mu_* meet ker L = 0");
    Check& eq = rep.check("ham.coisotropic_equivalence", "Hamiltonian iff coisotropic on G x| M -> G");
    for (std::size_t x = 0; x < d.C.objects.size(); ++x) {
        const auto& phi_g = d.G.objects[d.c.obj[x]].phi;
        mom.expect(phi_g.pullback(d.c.c0[x]) == d.C.objects[x].phi, at(x));
        Subspace k = intersect(kernel(d.c.c0[x]), kernel_of(d.L[x]));
        nd.expect(k.dim() == 0, at(x) + ": " + fmt(k));
    }
    for (std::size_t j = 0; j < d.C.arrows.size(); ++j) {
        const auto& a = d.C.arrows[j];
        Mat form = pullback_form(d.c.c1[j], d.G.arrows[d.c.arrow[j]].omega);
        comp.expect(compatibility_check(a, d.L[a.src], d.L[a.tgt], form).passed(), "arrow " + std::to_string(j));
    }
    Report coiso = is_coisotropic(d);
    bool hamiltonian = mom.ok() && comp.ok() && nd.ok();
    conclude(eq, coiso.passed() == hamiltonian,
             std::string("coisotropic: ") + (coiso.passed() ? "yes" : "no") + ", Hamiltonian: " +
                 (hamiltonian ? "yes" : "no"));
    rep.merge(qs_check(d.G), "G/");
    return rep;
}

CoisotropicDatum level_datum(const HamiltonianActionDatum& h, const Q& level) {
    std::size_t k = h.rotations.size();
    for (std::size_t j = 0; j < h.levels.size(); ++j) {
        if (h.levels[j] != level) continue;
        OrbitSample o{{j}, {Mat(1, 0)}, {}};
        for (std::size_t r = 0; r < k; ++r) o.arrows.push_back(j * k + r);
        auto c = orbit_lagrangian(h.datum.G, o);
        c.C.name = "level";
        return c;
    }
    throw std::invalid_argument("level " + to_string(level) + " is not sampled");
}

Mat direct_reduced_form(const Mat& omega, const Mat& dmu, const Mat& pi_star) {
    Mat b = kernel(dmu).columns();
    Mat w = pullback_form(b, omega);
    Mat pb = pi_star * b;
    if (!is_surjective(pb)) throw std::invalid_argument("reduced form: the chart is not onto the level");
    Mat right = solve_matrix(pb, Mat::identity(pb.rows()));
    Mat out = pullback_form(right, w);
    if (pullback_form(pb, out) != w) throw std::invalid_argument("reduced form: omega does not descend to the chart");
    return out;
}

Reduction run_reduction(const HamiltonianActionDatum& h, const CoisotropicDatum& level) {
    const auto& act = h.datum;
    auto point = point_groupoid();
    std::size_t max = std::numeric_limits<std::size_t>::max();
    Samples all{max, max, max};

    // level into point x G^-, with L and its background negated
    GroupoidBundle c1 = level.C;
    MorphismFiber m1 = level.c;
    std::vector<DiracFiber> l1;
    for (std::size_t x = 0; x < c1.objects.size(); ++x) {
        c1.objects[x].phi = -c1.objects[x].phi;
        m1.c0[x] = stack_left(m1.c0[x], 0);
        m1.cA[x] = stack_left(m1.cA[x], 0);
        l1.push_back(negate(level.L[x]));
    }
    auto d1 = make_correspondence(point, act.G, c1, m1, l1);
    MorphismFiber m2 = act.c;
    for (std::size_t x = 0; x < act.C.objects.size(); ++x) {
        m2.c0[x] = stack_right(m2.c0[x], 0);
        m2.cA[x] = stack_right(m2.cA[x], 0);
    }
    auto d2 = make_correspondence(act.G, point, act.C, m2, act.L);

    Reduction out;
    Report& rep = out.report;
    rep = Report("reduction");
    out.product = strong_intersection(d1, d2, all);
    const auto& r = out.product;
    rep.merge(r.report, "intersection/");
    rep.merge(strong_exact_sequence(d1, d2, r), "sequence/");
    const auto& H = r.product.datum.C;

    Check& chart_ok = rep.check("reduce.chart", "pi_* onto the chart with kernel im rho on the level");
    Check& free = rep.check("reduce.locally_free", "ker rho_M = 0 implies transverse with R° = 0");
    Check& tr = rep.check("reduce.transfer", "transfer along the level to the orbit chart");
    Check& orc = rep.check("reduce.oracle", "reduced fiber = graph of the Marsden-Weinstein form");
    Check& nd = rep.check("reduce.nondegenerate", "free level: ker L_red = 0");
    Check& opc = rep.check("reduce.orbit_poisson", "pi_* L_H is the Poisson structure of L_red");

    // chart points and pi_* on T_H
    std::map<Vec, std::size_t> chart_index;
    std::vector<std::size_t> chart_of(H.objects.size());
    std::vector<Mat> pi(H.objects.size());
    std::vector<std::size_t> witness_object;
    bool locally_free = true;
    for (std::size_t i = 0; i < H.objects.size(); ++i) {
        const auto& f = r.fibers[i];
        const Vec& z = h.points[f.at.x2];
        try {
            Vec w = h.chart.point(z);
            auto [it, fresh] = chart_index.emplace(w, out.chart_points.size());
            if (fresh) {
                out.chart_points.push_back(w);
                witness_object.push_back(i);
            }
            chart_of[i] = it->second;
            pi[i] = h.chart.differential(z) * f.p2;
        } catch (const std::domain_error& e) {
            chart_ok.tick();
            chart_ok.violate(at(i) + ": " + e.what());
            continue;
        }
        chart_ok.tick();
        if (!is_surjective(pi[i]) || kernel(pi[i]) != column_space(H.objects[i].rho))
            chart_ok.violate(at(i) + ": ker pi_* = " + fmt(kernel(pi[i])));
        if (kernel(act.C.objects[f.at.x2].rho).dim() == 0) {
            free.expect(f.transverse && r.ledger.points[i].R_ann.dim() == 0, at(i));
        } else {
            locally_free = false;
        }
    }
    for (std::size_t j = 0; j < H.arrows.size() && chart_ok.ok(); ++j) {
        const auto& a = H.arrows[j];
        chart_ok.tick();
        if (chart_of[a.src] != chart_of[a.tgt]) chart_ok.violate("arrow " + std::to_string(j) + " leaves its orbit");
    }
    if (!chart_ok.ok()) {
        tr.violate("no orbit chart on this level");
        return out;
    }

    // chart groupoid of the orbit space, units only
    std::size_t dim = h.chart.dim, points = out.chart_points.size();
    GroupoidBundle Q0;
    Q0.name = "orbit-chart";
    for (std::size_t p = 0; p < points; ++p) {
        Q0.objects.push_back(chart_object(dim));
        ArrowFiber u;
        u.src = u.tgt = p;
        u.m = dim;
        u.s_star = u.t_star = u.u_star = Mat::identity(dim);
        u.omega = Mat(dim, dim);
        u.Lg = u.Rg = Mat(dim, 0);
        u.unit = true;
        Q0.arrows.push_back(u);
        Q0.pairs.push_back(PairFiber{p, p, p, hstack(Mat::identity(dim), Mat(dim, dim))});
    }
    MorphismFiber psi2;
    for (std::size_t i = 0; i < H.objects.size(); ++i) {
        psi2.obj.push_back(chart_of[i]);
        psi2.c0.push_back(pi[i]);
        psi2.cA.push_back(Mat(0, H.objects[i].r));
    }
    for (const auto& a : H.arrows) {
        psi2.arrow.push_back(chart_of[a.src]);
        psi2.c1.push_back(pi[a.src] * a.s_star);
    }
    const auto& P = r.product.datum.G;
    auto idH = identity_morphism(H);
    auto idP = identity_morphism(P);
    auto c2 = to_point(Q0);
    MoritaEquivalenceDatum med{H,    H,    Q0,   P,    P,  P,  idH, psi2, to_point(H), idP, idP, r.product.datum.c, c2,
                               units(P, r.product.datum.c), units(P, compose(c2, psi2)), {Mat(0, 0)}, {ThreeForm(0)},
                               {},   false};
    try {
        auto t = transfer(med, r.product.datum.L);
        rep.merge(t.report, "transfer/");
        out.L = t.L2;
        tr.expect(t.report.passed(), "transfer report");
        if (t.report.hypothesis_violated()) tr.violate("transfer hypotheses");
    } catch (const DescentError& e) {
        tr.expect(false, e.what());
        return out;
    }

    QuotientChart qc{dim, chart_of, pi};
    auto op = orbit_poisson_correspondence(H, qc, r.product.datum.L);
    rep.merge(op.report, "orbit/");

    bool zero_dim = true;
    for (const auto& o : level.C.objects) zero_dim = zero_dim && o.n == 0;
    Mat omega = standard_symplectic(h.n);
    for (std::size_t p = 0; p < points; ++p) {
        if (locally_free) nd.expect(kernel_of(out.L[p]).dim() == 0, "chart point " + std::to_string(p));
        auto b = as_bivector(out.L[p]);
        opc.expect(!b || *b == op.bivector[p], "chart point " + std::to_string(p));
        if (!zero_dim) continue;
        const Vec& z = h.points[r.fibers[witness_object[p]].at.x2];
        try {
            out.oracle.push_back(graph_two_form(direct_reduced_form(omega, row(z), h.chart.differential(z))));
            orc.expect(out.oracle.back() == out.L[p], "chart point " + std::to_string(p) + " at " + fmt(z));
        } catch (const std::invalid_argument& e) {
            orc.expect(false, e.what());
        }
    }
    if (!zero_dim) orc.diagnostic = true;
    return out;
}

PolyDiracFrame build_lie_poisson_so3() {
    std::size_t n = 3;
    std::vector<std::vector<Poly>> pi(n, std::vector<Poly>(n, Poly(n)));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i + 1) % n, k = (i + 2) % n;
        pi[i][j] = Poly::var(n, k);
        pi[j][i] = -Poly::var(n, k);
    }
    return bivector_frame(pi, Form(n, 3));
}

CoisotropicDatum build_orbit_restriction(const GroupoidBundle& g, const OrbitSample& orbit) {
    return orbit_lagrangian(g, orbit);
}

}  // namespace diraclab
