#include "diraclab/scenarios.hpp"

#include <algorithm>

namespace diraclab {

namespace {

CoisotropicDatum identity_datum(const GroupoidBundle& g) {
    CoisotropicDatum d{g, g, identity_morphism(g), {}};
    for (const auto& o : g.objects) d.L.push_back(induced_dirac(o));
    return d;
}

// id : g -> point x g^-, and id : g -> g x point^-.
Correspondence into_right(const GroupoidBundle& g, const std::vector<DiracFiber>& l) {
    MorphismFiber c = identity_morphism(g);
    for (std::size_t x = 0; x < g.objects.size(); ++x) {
        c.c0[x] = vstack(Mat(0, g.objects[x].n), c.c0[x]);
        c.cA[x] = vstack(Mat(0, g.objects[x].r), c.cA[x]);
    }
    return make_correspondence(point_groupoid(), g, g, c, l);
}

Correspondence into_left(const GroupoidBundle& g, const std::vector<DiracFiber>& l) {
    MorphismFiber c = identity_morphism(g);
    for (std::size_t x = 0; x < g.objects.size(); ++x) {
        c.c0[x] = vstack(c.c0[x], Mat(0, g.objects[x].n));
        c.cA[x] = vstack(c.cA[x], Mat(0, g.objects[x].r));
    }
    return make_correspondence(g, point_groupoid(), g, c, l);
}

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

Report intersection_suite(const GroupoidBundle& g, const Samples& samples) {
    Report rep("intersection");
    auto base = identity_datum(g);
    std::vector<DiracFiber> neg;
    for (const auto& l : base.L) neg.push_back(negate(l));
    auto d1 = into_right(g, neg);
    auto d2 = into_left(g, base.L);
    auto s = strong_intersection(d1, d2, samples);
    rep.merge(s.report, "strong/");
    rep.merge(strong_exact_sequence(d1, d2, s), "strong/");
    auto h = homotopy_intersection(d1, d2, homotopy_points(d1, d2, samples));
    rep.merge(h.report, "homotopy/");
    return rep;
}

Report homotopy_suite(const GroupoidBundle& g, std::uint64_t seed) {
    Report rep("homotopy");
    RationalRng rng(seed);
    for (int k = 0; k < 2; ++k) {
        auto c = random_connection(g, rng);
        std::string p = "connection" + std::to_string(k + 1) + "/";
        rep.merge(connection_check(g, c), p);
        rep.merge(adjoint_identities(g, c), p);
    }
    return rep;
}

// b against a point with gamma = b, transported there and back.
Report morita_suite(const GroupoidBundle& g, const Mat& b) {
    Report rep("morita");
    auto p = point_groupoid();
    auto id = identity_morphism(g);
    auto tp = to_point(g);
    std::vector<Mat> gamma(g.objects.size(), b);
    std::vector<ThreeForm> dgamma(g.objects.size(), ThreeForm(b.rows()));
    MoritaEquivalenceDatum d{g,  g,  p,  g,  g,  p,  id, tp, id, id, tp, id, identity_morphism(p),
                             units(g, id), units(p, tp), gamma, dgamma, {}, true};
    rep.merge(symplectic_morita_check(d), "equivalence/");
    auto l1 = identity_datum(g).L;
    auto there = transfer(d, l1);
    rep.merge(there.report, "forward/");
    auto back = transfer(reverse(d), there.L2);
    rep.merge(back.report, "backward/");
    Check& rt = rep.check("morita.round_trip", "backward transfer of the forward transfer gives L1");
    for (std::size_t x = 0; x < l1.size(); ++x) rt.expect(back.L2[x] == l1[x], "object " + std::to_string(x));
    rep.merge(transfer_composition_check(d, reverse(d), l1), "composition/");
    return rep;
}

Report chain_suite(const std::vector<CoisotropicDatum>& data, std::uint64_t seed) {
    Report rep("chain");
    Check& agree = rep.check("chain.agreement", "quasi-isomorphism iff nondeg map bijective");
    auto record = [&](const ChainMapResult& r, const std::string& where) {
        Check& ch = rep.check("chain.squares", "both squares of the chain map commute");
        ch.expect(r.report.passed(), where);
        agree.expect(r.quasi_iso() == (r.nondeg.surjective && r.nondeg.injective), where);
    };
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t x = 0; x < data[i].C.objects.size(); ++x)
            record(chain_map_check(data[i], x), "datum " + std::to_string(i) + " object " + std::to_string(x));
    RationalRng rng(seed);
    for (int k = 0; k < 50; ++k) record(chain_map_check(random_coiso_fiber(rng)), "random fiber " + std::to_string(k));
    return rep;
}

Mat pair_form(const ScenarioSpec& s, std::size_t n) {
    std::string form = s.text("form", "std");
    if (n % 2 != 0) throw std::invalid_argument("pair-groupoid: n must be even");
    Mat w = standard_symplectic(n / 2);
    if (form == "std") return w;
    if (form != "random") throw std::invalid_argument("pair-groupoid: form is std or random");
    RationalRng rng(s.seed);
    Mat q = rng.invertible(n);
    return q.transpose() * w * q;
}

Scenario pair_scenario(const ScenarioSpec& spec) {
    Scenario s;
    std::size_t n = spec.count("n", 2);
    if (n > 8) throw std::invalid_argument("pair-groupoid: n <= 8");
    Mat b = pair_form(spec, n);
    auto g = build_pair_groupoid(n, b, std::max<std::size_t>(1, std::min<std::size_t>(spec.count("points", 2), 4)));
    std::string corrupt = spec.text("corrupt", "none");
    if (corrupt == "sigma" && n > 0) {
        g.objects[0].sigma(0, 0) += 1;
    } else if (corrupt == "omega" && n > 0) {
        g.arrows.back().omega(0, 1) += 1;
        g.arrows.back().omega(1, 0) -= 1;
    } else if (corrupt != "none") {
        throw std::invalid_argument("pair-groupoid: corrupt is none, sigma or omega");
    }
    s.bundles.push_back(g);
    s.suites = {"qs", "coisotropic", "chain", "intersection", "homotopy", "morita"};
    if (corrupt == "none") {
        s.data.push_back(identity_datum(g));
        OrbitSample full;
        for (std::size_t x = 0; x < g.objects.size(); ++x) {
            full.objects.push_back(x);
            full.tangent.push_back(Mat::identity(n));
        }
        for (std::size_t j = 0; j < g.arrows.size(); ++j) full.arrows.push_back(j);
        s.data.push_back(build_orbit_restriction(g, full));
    }
    return s;
}

Scenario circle_scenario(const ScenarioSpec& spec) {
    Scenario s;
    std::size_t count = spec.count("levels", 3);
    if (count == 0 || count > 8) throw std::invalid_argument("cotangent-circle: 1 <= levels <= 8");
    std::vector<Vec> pts;
    for (std::size_t j = 0; j < count; ++j) pts.push_back(Vec{Q(static_cast<long>(j)), Q(0)});
    // levels j^2 / 2 of the action on C, only the groupoid is kept
    auto h = circle_action(1, pts, {Rotation{1, 0}, half_angle_rotation(Q(1, 2)), half_angle_rotation(Q(-1, 2))});
    const auto& g = h.datum.G;
    s.bundles.push_back(g);
    s.data.push_back(identity_datum(g));
    s.data.push_back(build_orbit_restriction(g, OrbitSample{{0}, {Mat(1, 0)}, {0, 1, 2}}));
    s.suites = {"qs", "coisotropic", "chain", "intersection", "homotopy"};
    return s;
}

Scenario hamiltonian_scenario(const ScenarioSpec& spec) {
    Scenario s;
    std::size_t n = spec.count("n", 2);
    if (n == 0 || n > 4) throw std::invalid_argument("circle-hamiltonian: 1 <= n <= 4");
    Q level = spec.scalar("level", Q(1, 2));
    std::size_t orbits = spec.count("orbits", spec.samples.objects);
    if (orbits == 0 || orbits > 32) throw std::invalid_argument("circle-hamiltonian: 1 <= orbits <= 32");
    auto h = build_circle_hamiltonian(n, level, orbits, spec.seed);
    std::string corrupt = spec.text("corrupt", "none");
    if (corrupt == "dirac") {
        for (auto& l : h.datum.L) l = tangent_dirac(2 * n);
    } else if (corrupt != "none") {
        throw std::invalid_argument("circle-hamiltonian: corrupt is none or dirac");
    }
    s.bundles.push_back(h.datum.G);
    s.data.push_back(h.datum);
    s.data.push_back(level_datum(h, level));
    s.hamiltonian = h;
    s.suites = {"qs", "coisotropic", "hamiltonian", "reduction"};
    return s;
}

Scenario so3_scenario(const ScenarioSpec& spec) {
    Scenario s;
    s.frame = build_lie_poisson_so3();
    RationalRng rng(spec.seed);
    std::size_t count = spec.count("points", 20);
    if (count == 0 || count > 64) throw std::invalid_argument("lie-poisson-so3: 1 <= points <= 64");
    s.frame_points = sample_points(rng, 3, count);
    s.suites = {"dorfman"};
    return s;
}

}  // namespace

Q ScenarioSpec::scalar(const std::string& key, const Q& fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        return parse_scalar(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("parameter " + key + ": not a rational number: " + it->second);
    }
}

std::size_t ScenarioSpec::count(const std::string& key, std::size_t fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const std::string& v = it->second;
    if (v.empty() || !std::all_of(v.begin(), v.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) || v.size() > 6)
        throw std::invalid_argument("parameter " + key + ": not a count: " + v);
    return std::stoul(v);
}

std::string ScenarioSpec::text(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

const std::vector<CatalogEntry>& scenario_catalog() {
    static const std::vector<CatalogEntry> entries{
        {"pair-groupoid", "V x V over Q^n with omega = pr1*b - pr2*b",
         {{"n", "2"}, {"form", "std"}, {"points", "2"}, {"corrupt", "none"}}},
        {"cotangent-circle", "T*S^1 over sampled levels", {{"levels", "3"}}},
        {"circle-hamiltonian", "S^1 rotating C^n, moment map |z|^2/2",
         {{"n", "2"}, {"level", "1/2"}, {"orbits", "8"}, {"corrupt", "none"}}},
        {"lie-poisson-so3", "linear Poisson structure on so(3)*", {{"points", "20"}}},
    };
    return entries;
}

Scenario build_scenario(const ScenarioSpec& spec) {
    Scenario s;
    if (spec.name == "pair-groupoid") s = pair_scenario(spec);
    else if (spec.name == "cotangent-circle") s = circle_scenario(spec);
    else if (spec.name == "circle-hamiltonian") s = hamiltonian_scenario(spec);
    else if (spec.name == "lie-poisson-so3") s = so3_scenario(spec);
    else throw std::invalid_argument("unknown scenario: " + spec.name);
    s.spec = spec;
    for (const auto& kv : spec.params) {
        const auto& entries = scenario_catalog();
        auto e = std::find_if(entries.begin(), entries.end(), [&](const CatalogEntry& c) { return c.name == spec.name; });
        if (!e->defaults.count(kv.first)) throw std::invalid_argument("unknown parameter for " + spec.name + ": " + kv.first);
    }
    return s;
}

Report run_suite(const Scenario& s, const std::string& suite) {
    if (suite == "all") {
        Report rep(s.spec.name);
        for (const auto& name : s.suites) {
            try {
                rep.merge(run_suite(s, name), name + ":");
            } catch (const std::exception& e) {
                Check& ch = rep.check(name + ":suite.aborted", "the suite ran to completion");
                ch.tick();
                ch.fail(e.what());
            }
        }
        return rep;
    }
    if (std::find(s.suites.begin(), s.suites.end(), suite) == s.suites.end())
        throw std::invalid_argument("scenario " + s.spec.name + " has no suite " + suite);
    Report rep(suite);
    if (suite == "qs") {
        for (const auto& g : s.bundles) rep.merge(qs_check(g), g.name + "/");
    } else if (suite == "coisotropic") {
        for (const auto& g : s.bundles) {
            Check& ind = rep.check("identity.induced", "im(rho, sigma) is Lagrangian at every object");
            ind.tick();
            try {
                rep.merge(is_coisotropic(identity_datum(g)), "identity/" + g.name + "/");
            } catch (const NotLagrangian& e) {
                ind.fail(g.name + ": " + e.what());
            }
        }
        for (std::size_t i = 0; i < s.data.size(); ++i)
            rep.merge(is_coisotropic(s.data[i]), "datum" + std::to_string(i) + "/" + s.data[i].C.name + "/");
    } else if (suite == "chain") {
        rep.merge(chain_suite(s.data, s.spec.seed));
    } else if (suite == "intersection") {
        rep.merge(intersection_suite(s.bundles.at(0), s.spec.samples));
    } else if (suite == "homotopy") {
        rep.merge(homotopy_suite(s.bundles.at(0), s.spec.seed));
    } else if (suite == "morita") {
        const auto& g = s.bundles.at(0);
        rep.merge(morita_suite(g, g.objects.at(0).sigma.transpose()));
    } else if (suite == "hamiltonian") {
        rep.merge(hamiltonian_check(*s.hamiltonian));
    } else if (suite == "reduction") {
        const auto& h = *s.hamiltonian;
        rep.merge(run_reduction(h, s.data.at(1)).report);
    } else if (suite == "dorfman") {
        rep.merge(involutivity_check(*s.frame, s.frame_points));
    }
    return rep;
}

}  // namespace diraclab
