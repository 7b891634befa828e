#include "diraclab/serialize.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <map>
#include <sstream>

namespace diraclab {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field: ") + key);
    return j.at(key);
}

void expect_schema(const Json& j, const char* schema) {
    const Json& s = field(j, "schema");
    if (!s.is_string() || s.get<std::string>() != schema)
        throw SchemaError(std::string("expected schema ") + schema + ", got " + s.dump());
}

Q scalar_from_json(const Json& j) {
    if (!j.is_string()) throw SchemaError("scalar must be a \"p/q\" string");
    try {
        return parse_scalar(j.get<std::string>());
    } catch (const std::exception&) {
        throw SchemaError("bad scalar: " + j.get<std::string>());
    }
}

std::size_t index_from_json(const Json& j) {
    if (!j.is_number_unsigned()) throw SchemaError("index must be a nonnegative integer: " + j.dump());
    return j.get<std::size_t>();
}

template <class T, class F>
std::vector<T> list(const Json& j, F&& one) {
    if (!j.is_array()) throw SchemaError("expected an array");
    std::vector<T> out;
    for (const auto& e : j) out.push_back(one(e));
    return out;
}

template <class T, class F>
Json array_of(const std::vector<T>& v, F&& one) {
    Json a = Json::array();
    for (const auto& e : v) a.push_back(one(e));
    return a;
}

// Any nlohmann type error or validation failure becomes a SchemaError.
template <class F>
auto guarded(const char* what, F&& body) {
    try {
        return body();
    } catch (const SchemaError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    } catch (const std::logic_error& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    }
}

Json object_json(const ObjectFiber& o) {
    return Json{{"n", o.n}, {"r", o.r}, {"rho", to_json(o.rho)}, {"sigma", to_json(o.sigma)}, {"phi", to_json(o.phi)}};
}

ObjectFiber object_from_json(const Json& j) {
    return ObjectFiber{index_from_json(field(j, "n")), index_from_json(field(j, "r")), mat_from_json(field(j, "rho")),
                       mat_from_json(field(j, "sigma")), three_form_from_json(field(j, "phi"))};
}

Json arrow_json(const ArrowFiber& a) {
    Json j{{"src", a.src},
           {"tgt", a.tgt},
           {"m", a.m},
           {"s_star", to_json(a.s_star)},
           {"t_star", to_json(a.t_star)},
           {"omega", to_json(a.omega)},
           {"Lg", to_json(a.Lg)},
           {"Rg", to_json(a.Rg)},
           {"unit", a.unit}};
    if (a.unit) j["u_star"] = to_json(a.u_star);
    return j;
}

ArrowFiber arrow_from_json(const Json& j) {
    ArrowFiber a;
    a.src = index_from_json(field(j, "src"));
    a.tgt = index_from_json(field(j, "tgt"));
    a.m = index_from_json(field(j, "m"));
    a.s_star = mat_from_json(field(j, "s_star"));
    a.t_star = mat_from_json(field(j, "t_star"));
    a.omega = mat_from_json(field(j, "omega"));
    a.Lg = mat_from_json(field(j, "Lg"));
    a.Rg = mat_from_json(field(j, "Rg"));
    const Json& u = field(j, "unit");
    if (!u.is_boolean()) throw SchemaError("unit must be a boolean");
    a.unit = u.get<bool>();
    if (a.unit) a.u_star = mat_from_json(field(j, "u_star"));
    return a;
}

// Bundles keyed by content hash, each written once.
class BundleTable {
public:
    std::string add(const GroupoidBundle& g) {
        std::string h = content_hash(g);
        if (!table_.contains(h)) table_[h] = dump_bundle(g);
        return h;
    }
    const Json& json() const { return table_; }

private:
    Json table_ = Json::object();
};

GroupoidBundle resolve(const Json& doc, const char* key) {
    const Json& ref = field(doc, key);
    if (!ref.is_string()) throw SchemaError(std::string(key) + " must be a content hash");
    const Json& table = field(doc, "bundles");
    std::string h = ref.get<std::string>();
    if (!table.is_object() || !table.contains(h)) throw SchemaError("dangling bundle reference " + h);
    GroupoidBundle g = load_bundle(table.at(h));
    if (content_hash(g) != h) throw SchemaError("bundle " + h + " does not match its content hash");
    return g;
}

Json mats(const std::vector<Mat>& v) {
    return array_of(v, [](const Mat& m) { return to_json(m); });
}
std::vector<Mat> mats_from(const Json& j) { return list<Mat>(j, mat_from_json); }

}  // namespace

Json to_json(const Mat& m) {
    Json data = Json::array();
    for (const auto& q : m.data()) data.push_back(to_string(q));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Mat mat_from_json(const Json& j) {
    return guarded("matrix", [&] {
        std::size_t r = index_from_json(field(j, "rows")), c = index_from_json(field(j, "cols"));
        auto data = list<Q>(field(j, "data"), scalar_from_json);
        if (data.size() != r * c) throw SchemaError("matrix: rows * cols entries expected");
        return Mat(r, c, std::move(data));
    });
}

Json to_json(const ThreeForm& t) {
    Json comps = Json::array();
    std::size_t n = t.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                if (t(i, j, k) != 0) comps.push_back(Json{i, j, k, to_string(t(i, j, k))});
    return Json{{"dim", n}, {"components", comps}};
}

ThreeForm three_form_from_json(const Json& j) {
    return guarded("3-form", [&] {
        std::size_t n = index_from_json(field(j, "dim"));
        ThreeForm t(n);
        for (const auto& c : field(j, "components")) {
            if (!c.is_array() || c.size() != 4) throw SchemaError("3-form component is [i, j, k, value]");
            std::size_t a = index_from_json(c[0]), b = index_from_json(c[1]), d = index_from_json(c[2]);
            if (!(a < b && b < d && d < n)) throw SchemaError("3-form component indices must increase below dim");
            t.set(a, b, d, scalar_from_json(c[3]));
        }
        return t;
    });
}

Json to_json(const DiracFiber& l) { return Json{{"n", l.n}, {"basis", to_json(l.L.basis())}}; }

DiracFiber dirac_from_json(const Json& j) {
    return guarded("Dirac fiber", [&] {
        std::size_t n = index_from_json(field(j, "n"));
        Mat b = mat_from_json(field(j, "basis"));
        if (b.cols() != 2 * n) throw SchemaError("Dirac fiber basis must have 2n columns");
        return make_dirac(n, row_space(b));
    });
}

Json to_json(const MorphismFiber& f) {
    return Json{{"obj", f.obj}, {"c0", mats(f.c0)}, {"cA", mats(f.cA)}, {"arrow", f.arrow}, {"c1", mats(f.c1)}};
}

MorphismFiber morphism_from_json(const Json& j) {
    return guarded("morphism", [&] {
        MorphismFiber f{list<std::size_t>(field(j, "obj"), index_from_json), mats_from(field(j, "c0")),
                        mats_from(field(j, "cA")), list<std::size_t>(field(j, "arrow"), index_from_json),
                        mats_from(field(j, "c1"))};
        if (f.c0.size() != f.obj.size() || f.cA.size() != f.obj.size() || f.c1.size() != f.arrow.size())
            throw SchemaError("morphism: one matrix per object and per arrow");
        return f;
    });
}

Json to_json(const NatTransFiber& t) { return Json{{"arrow", t.arrow}, {"theta_star", mats(t.theta_star)}}; }

NatTransFiber nat_trans_from_json(const Json& j) {
    return guarded("transformation", [&] {
        NatTransFiber t{list<std::size_t>(field(j, "arrow"), index_from_json), mats_from(field(j, "theta_star"))};
        if (t.arrow.size() != t.theta_star.size()) throw SchemaError("transformation: one differential per object");
        return t;
    });
}

Json dump_bundle(const GroupoidBundle& g) {
    Json pairs = Json::array();
    for (const auto& p : g.pairs) pairs.push_back(Json{{"g", p.g}, {"h", p.h}, {"gh", p.gh}, {"m_star", to_json(p.m_star)}});
    return Json{{"schema", "gfb-v1"},
                {"name", g.name},
                {"objects", array_of(g.objects, object_json)},
                {"arrows", array_of(g.arrows, arrow_json)},
                {"pairs", pairs}};
}

GroupoidBundle load_bundle(const Json& j) {
    return guarded("gfb-v1", [&] {
        expect_schema(j, "gfb-v1");
        GroupoidBundle g;
        const Json& name = field(j, "name");
        if (!name.is_string()) throw SchemaError("name must be a string");
        g.name = name.get<std::string>();
        g.objects = list<ObjectFiber>(field(j, "objects"), object_from_json);
        g.arrows = list<ArrowFiber>(field(j, "arrows"), arrow_from_json);
        g.pairs = list<PairFiber>(field(j, "pairs"), [](const Json& p) {
            return PairFiber{index_from_json(field(p, "g")), index_from_json(field(p, "h")),
                             index_from_json(field(p, "gh")), mat_from_json(field(p, "m_star"))};
        });
        g.validate();
        return g;
    });
}

std::string content_hash(const GroupoidBundle& g) {
    std::string text = dump_bundle(g).dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

Json dump_datum(const CoisotropicDatum& d) {
    BundleTable t;
    std::string c = t.add(d.C), g = t.add(d.G);
    return Json{{"schema", "cd-v1"},
                {"C", c},
                {"G", g},
                {"c", to_json(d.c)},
                {"L", array_of(d.L, [](const DiracFiber& l) { return to_json(l); })},
                {"bundles", t.json()}};
}

CoisotropicDatum load_datum(const Json& j) {
    return guarded("cd-v1", [&] {
        expect_schema(j, "cd-v1");
        CoisotropicDatum d{resolve(j, "C"), resolve(j, "G"), morphism_from_json(field(j, "c")),
                           list<DiracFiber>(field(j, "L"), dirac_from_json)};
        if (d.L.size() != d.C.objects.size() || d.c.obj.size() != d.C.objects.size() ||
            d.c.arrow.size() != d.C.arrows.size())
            throw SchemaError("cd-v1: one Dirac fiber and one morphism entry per C object");
        return d;
    });
}

Json dump_morita(const MoritaEquivalenceDatum& d) {
    BundleTable t;
    Json j{{"schema", "med-v1"}};
    j["K"] = t.add(d.K);
    j["C1"] = t.add(d.C1);
    j["C2"] = t.add(d.C2);
    j["L"] = t.add(d.L);
    j["G1"] = t.add(d.G1);
    j["G2"] = t.add(d.G2);
    j["morphisms"] = Json{{"psi1", to_json(d.psi1)}, {"psi2", to_json(d.psi2)}, {"g", to_json(d.gmap)},
                          {"phi1", to_json(d.phi1)}, {"phi2", to_json(d.phi2)}, {"c1", to_json(d.c1)},
                          {"c2", to_json(d.c2)}};
    j["transformations"] = Json{{"theta1", to_json(d.theta1)}, {"theta2", to_json(d.theta2)}};
    j["gamma"] = mats(d.gamma);
    j["dgamma"] = array_of(d.dgamma, [](const ThreeForm& f) { return to_json(f); });
    j["delta"] = mats(d.delta);
    j["strict"] = d.strict;
    j["bundles"] = t.json();
    return j;
}

MoritaEquivalenceDatum load_morita(const Json& j) {
    return guarded("med-v1", [&] {
        expect_schema(j, "med-v1");
        const Json& m = field(j, "morphisms");
        const Json& t = field(j, "transformations");
        const Json& strict = field(j, "strict");
        if (!strict.is_boolean()) throw SchemaError("strict must be a boolean");
        return MoritaEquivalenceDatum{resolve(j, "K"),
                                      resolve(j, "C1"),
                                      resolve(j, "C2"),
                                      resolve(j, "L"),
                                      resolve(j, "G1"),
                                      resolve(j, "G2"),
                                      morphism_from_json(field(m, "psi1")),
                                      morphism_from_json(field(m, "psi2")),
                                      morphism_from_json(field(m, "g")),
                                      morphism_from_json(field(m, "phi1")),
                                      morphism_from_json(field(m, "phi2")),
                                      morphism_from_json(field(m, "c1")),
                                      morphism_from_json(field(m, "c2")),
                                      nat_trans_from_json(field(t, "theta1")),
                                      nat_trans_from_json(field(t, "theta2")),
                                      mats_from(field(j, "gamma")),
                                      list<ThreeForm>(field(j, "dgamma"), three_form_from_json),
                                      mats_from(field(j, "delta")),
                                      strict.get<bool>()};
    });
}

Json dump_reduction(const Reduction& r) {
    Json points = Json::array();
    for (std::size_t p = 0; p < r.chart_points.size(); ++p) {
        Json e{{"chart", array_of(r.chart_points[p], [](const Q& q) { return to_string(q); })}};
        e["L"] = p < r.L.size() ? to_json(r.L[p]) : Json(nullptr);
        if (p < r.oracle.size()) {
            e["oracle"] = to_json(r.oracle[p]);
            e["match"] = p < r.L.size() && r.L[p] == r.oracle[p];
        }
        points.push_back(e);
    }
    std::string status = r.report.passed() ? (r.report.hypothesis_violated() ? "hypothesis-violated" : "pass") : "fail";
    return Json{{"schema", "df-v1"}, {"status", status}, {"points", points}};
}

std::string to_text(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
}

ScenarioSpec scenario_from_json(const Json& j, const Samples& defaults) {
    return guarded("scenario", [&] {
        ScenarioSpec s;
        const Json& name = field(j, "name");
        if (!name.is_string()) throw SchemaError("scenario name must be a string");
        s.name = name.get<std::string>();
        s.samples = defaults;
        if (j.contains("params")) {
            const Json& p = j.at("params");
            if (!p.is_object()) throw SchemaError("params must be an object");
            for (const auto& [k, v] : p.items()) {
                if (v.is_string()) s.params[k] = v.get<std::string>();
                else if (v.is_number_integer() || v.is_boolean()) s.params[k] = v.dump();
                else throw SchemaError("parameter " + k + ": strings, integers or booleans only");
            }
        }
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("samples")) {
            const Json& sm = j.at("samples");
            auto get = [&](const char* key, std::size_t fallback) {
                if (!sm.contains(key)) return fallback;
                std::size_t v = index_from_json(sm.at(key));
                if (v == 0) throw SchemaError(std::string("samples.") + key + " must be positive");
                return v;
            };
            s.samples = Samples{get("objects", defaults.objects), get("arrows", defaults.arrows),
                                get("pairs", defaults.pairs)};
        }
        return s;
    });
}

Json to_json(const ScenarioSpec& s) {
    Json params = Json::object();
    for (const auto& [k, v] : s.params) params[k] = v;
    return Json{{"name", s.name},
                {"params", params},
                {"seed", s.seed},
                {"samples", Json{{"objects", s.samples.objects}, {"arrows", s.samples.arrows}, {"pairs", s.samples.pairs}}}};
}

}  // namespace diraclab
