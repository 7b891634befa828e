// Extension module behind the diraclab Python package. Everything crosses the
// boundary as JSON text; the package turns it into dicts and Fractions.

#include "diraclab/serialize.hpp"

#include <pybind11/pybind11.h>

namespace py = pybind11;
using namespace diraclab;

namespace {

ScenarioSpec spec_from(const std::string& text) { return scenario_from_json(parse_json(text), Samples::from_env()); }

std::string catalog() {
    Json out = Json::array();
    for (const auto& e : scenario_catalog()) {
        auto s = build_scenario(ScenarioSpec{e.name, {}, 1, Samples{}});
        out.push_back(Json{{"name", e.name}, {"summary", e.summary}, {"defaults", e.defaults}, {"suites", s.suites}});
    }
    return out.dump();
}

std::string verify(const std::string& scenario, const std::string& suite) {
    auto s = build_scenario(spec_from(scenario));
    return run_suite(s, suite).to_json();
}

std::string verify_document(const std::string& text) {
    Json j = parse_json(text);
    std::string schema = j.value("schema", "");
    if (schema == "gfb-v1") {
        auto g = load_bundle(j);
        Report r("qs");
        r.merge(qs_check(g), g.name + "/");
        return r.to_json();
    }
    if (schema == "cd-v1") return is_coisotropic(load_datum(j)).to_json();
    if (schema == "med-v1") return symplectic_morita_check(load_morita(j)).to_json();
    throw SchemaError("unknown schema: " + schema);
}

std::string reduce(const std::string& scenario) {
    auto spec = spec_from(scenario);
    if (spec.name != "circle-hamiltonian") throw std::invalid_argument(spec.name + " does not support reduction");
    auto s = build_scenario(spec);
    auto red = run_reduction(*s.hamiltonian, s.data.at(1));
    return Json{{"fibers", dump_reduction(red)}, {"report", Json::parse(red.report.to_json())}}.dump();
}

std::string dump(const std::string& scenario) {
    auto s = build_scenario(spec_from(scenario));
    Json out{{"bundles", Json::array()}, {"data", Json::array()}};
    for (const auto& g : s.bundles) out["bundles"].push_back(dump_bundle(g));
    for (const auto& d : s.data) out["data"].push_back(dump_datum(d));
    return out.dump();
}

Mat mat_arg(const std::string& text) { return mat_from_json(parse_json(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.def("catalog", &catalog);
    m.def("verify", &verify, py::arg("scenario"), py::arg("suite") = "all");
    m.def("verify_document", &verify_document);
    m.def("reduce", &reduce);
    m.def("dump", &dump);
    m.def("content_hash", [](const std::string& text) { return content_hash(load_bundle(parse_json(text))); });
    m.def("graph_two_form", [](const std::string& w) { return to_json(graph_two_form(mat_arg(w))).dump(); });
    m.def("graph_bivector", [](const std::string& pi) { return to_json(graph_bivector(mat_arg(pi))).dump(); });
    m.def("pullback", [](const std::string& f, const std::string& l) {
        return to_json(pullback(mat_arg(f), dirac_from_json(parse_json(l)))).dump();
    });
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
}
