// Command-line front end: list, verify, reduce and dump scenarios.
//
// Exit codes: 0 every check passed, 1 a check failed or a hypothesis was
// violated, 2 the input could not be used.

#include "diraclab/serialize.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace diraclab;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path.string());
    out << text;
}

Samples parse_samples(const std::string& text) {
    std::vector<std::size_t> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("--samples wants one or three positive counts");
        v.push_back(std::stoul(item));
        if (v.back() == 0) throw UsageError("--samples wants positive counts");
    }
    if (v.size() == 1) return Samples{v[0], v[0], v[0]};
    if (v.size() == 3) return Samples{v[0], v[1], v[2]};
    throw UsageError("--samples wants one or three counts");
}

struct Common {
    std::string input;
    std::string report = "text";
    std::optional<std::uint64_t> seed;
    std::string samples;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("input", c.input, "scenario file, or a gfb-v1 / cd-v1 / med-v1 dump")->required();
    cmd->add_option("--report", c.report, "report format")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--seed", c.seed, "overrides the scenario seed");
    cmd->add_option("--samples", c.samples, "objects,arrows,pairs or one count for all");
}

ScenarioSpec load_spec(const Json& j, const Common& c) {
    ScenarioSpec s = scenario_from_json(j, Samples::from_env());
    if (c.seed) s.seed = *c.seed;
    if (!c.samples.empty()) s.samples = parse_samples(c.samples);
    return s;
}

void print(const Report& r, const std::string& format, std::ostream& os) {
    if (format == "json") os << r.to_json() << "\n";
    else os << r.to_text();
}

int outcome(const Report& r) { return r.passed() && !r.hypothesis_violated() ? 0 : 1; }

// A dump is verified by the checks its schema carries.
Report verify_dump(const Json& j) {
    std::string schema = j.at("schema").is_string() ? j.at("schema").get<std::string>() : "";
    if (schema == "gfb-v1") {
        auto g = load_bundle(j);
        Report r("qs");
        r.merge(qs_check(g), g.name + "/");
        return r;
    }
    if (schema == "cd-v1") return is_coisotropic(load_datum(j));
    if (schema == "med-v1") return symplectic_morita_check(load_morita(j));
    throw UsageError("unknown schema " + j.at("schema").dump());
}

int cmd_list() {
    for (const auto& e : scenario_catalog()) {
        auto s = build_scenario(ScenarioSpec{e.name, {}, 1, Samples{}});
        std::cout << e.name << "  " << e.summary << "\n  params:";
        for (const auto& [k, v] : e.defaults) std::cout << " " << k << "=" << v;
        std::cout << "\n  suites:";
        for (const auto& name : s.suites) std::cout << " " << name;
        std::cout << "\n";
    }
    return 0;
}

int cmd_verify(const Common& c, const std::string& suite) {
    Json j = read_json(c.input);
    if (j.is_object() && j.contains("schema")) {
        Report r = verify_dump(j);
        print(r, c.report, std::cout);
        return outcome(r);
    }
    Scenario s = build_scenario(load_spec(j, c));
    if (suite != "all" && std::find(s.suites.begin(), s.suites.end(), suite) == s.suites.end())
        throw UsageError("scenario " + s.spec.name + " has no suite " + suite);
    Report r;
    try {
        r = run_suite(s, suite);
    } catch (const std::exception& e) {
        std::cerr << "diraclab: suite aborted: " << e.what() << "\n";
        return 1;
    }
    print(r, c.report, std::cout);
    return outcome(r);
}

int cmd_reduce(const Common& c, const std::string& level, const std::string& coisotropic, const std::string& out) {
    ScenarioSpec spec = load_spec(read_json(c.input), c);
    if (spec.name != "circle-hamiltonian") throw UsageError("scenario " + spec.name + " does not support reduction");
    if (!level.empty()) spec.params["level"] = level;
    Scenario s = build_scenario(spec);
    const auto& h = *s.hamiltonian;
    CoisotropicDatum datum = s.data.at(1);
    if (coisotropic != "orbit") {
        datum = load_datum(read_json(coisotropic));
        if (content_hash(datum.G) != content_hash(h.datum.G))
            throw UsageError("the coisotropic datum does not sit over this scenario's groupoid");
    }
    Reduction red = run_reduction(h, datum);
    std::string df = to_text(dump_reduction(red));
    std::size_t matched = 0;
    for (std::size_t p = 0; p < red.oracle.size(); ++p) matched += p < red.L.size() && red.L[p] == red.oracle[p];
    std::ostream& log = out.empty() ? std::cerr : std::cout;
    if (out.empty()) std::cout << df;
    else write_file(out, df);
    print(red.report, c.report, log);
    if (red.oracle.empty()) log << "oracle: not applicable\n";
    else log << "oracle: " << matched << "/" << red.oracle.size() << " chart points match\n";
    if (red.report.hypothesis_violated()) log << "hypothesis-violated: the quotient is not a chart at this level\n";
    return outcome(red.report);
}

int cmd_dump(const Common& c, const std::string& dir) {
    Scenario s = build_scenario(load_spec(read_json(c.input), c));
    std::vector<std::pair<std::string, Json>> docs;
    for (std::size_t i = 0; i < s.bundles.size(); ++i)
        docs.emplace_back("bundle" + std::to_string(i) + ".gfb.json", dump_bundle(s.bundles[i]));
    for (std::size_t i = 0; i < s.data.size(); ++i)
        docs.emplace_back("datum" + std::to_string(i) + ".cd.json", dump_datum(s.data[i]));
    if (dir.empty()) {
        Json all = Json::array();
        for (auto& [name, j] : docs) all.push_back(j);
        std::cout << to_text(all);
        return 0;
    }
    std::filesystem::create_directories(dir);
    for (const auto& [name, j] : docs) {
        write_file(std::filesystem::path(dir) / name, to_text(j));
        std::cout << (std::filesystem::path(dir) / name).string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks of coisotropic structures on quasi-symplectic groupoids"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "show the scenario catalog");

    Common vc;
    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run verification suites");
    add_common(verify, vc);
    verify->add_option("--suite", suite, "suite name or all");

    Common rc;
    std::string level, coisotropic = "orbit", out;
    auto* reduce = app.add_subcommand("reduce", "reduce a Hamiltonian scenario and compare with the oracle");
    add_common(reduce, rc);
    reduce->add_option("--level", level, "moment level p/q");
    reduce->add_option("--coisotropic", coisotropic, "orbit, or a cd-v1 file over the scenario's groupoid");
    reduce->add_option("--out", out, "write the df-v1 fibers here instead of stdout");

    Common dc;
    std::string dir;
    auto* dump = app.add_subcommand("dump", "write bundle and datum dumps");
    add_common(dump, dc);
    dump->add_option("--out", dir, "directory for one file per dump");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*list) return cmd_list();
        if (*verify) return cmd_verify(vc, suite);
        if (*reduce) return cmd_reduce(rc, level, coisotropic, out);
        if (*dump) return cmd_dump(dc, dir);
    } catch (const UsageError& e) {
        std::cerr << "diraclab: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "diraclab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "diraclab: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
