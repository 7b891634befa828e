#include "diraclab/report.hpp"

#include <json.hpp>

#include <sstream>

namespace diraclab {

namespace {
constexpr std::size_t kMaxWitnesses = 8;
}

std::string status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::hypothesis_violated: return "hypothesis-violated";
    }
    return "?";
}

void Check::fail(std::string witness) {
    status = Status::fail;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
}

void Check::violate(std::string witness) {
    if (status == Status::pass) status = Status::hypothesis_violated;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
}

Check& Report::check(const std::string& id, const std::string& anchor) {
    for (auto& c : checks_)
        if (c.id == id) return c;
    Check& c = checks_.emplace_back();
    c.id = id;
    c.anchor = anchor;
    return c;
}

const Check* Report::find(const std::string& id) const {
    for (const auto& c : checks_)
        if (c.id == id) return &c;
    return nullptr;
}

void Report::merge(const Report& other, const std::string& prefix) {
    for (const auto& c : other.checks_) {
        Check& mine = check(prefix + c.id, c.anchor);
        mine.evaluated += c.evaluated;
        mine.diagnostic = mine.diagnostic || c.diagnostic;
        if (c.status == Status::fail)
            mine.status = Status::fail;
        else if (c.status == Status::hypothesis_violated && mine.status == Status::pass)
            mine.status = Status::hypothesis_violated;
        for (const auto& w : c.witnesses)
            if (mine.witnesses.size() < kMaxWitnesses) mine.witnesses.push_back(w);
        mine.ranks.insert(mine.ranks.end(), c.ranks.begin(), c.ranks.end());
    }
}

bool Report::passed() const {
    for (const auto& c : checks_)
        if (c.status == Status::fail && !c.diagnostic) return false;
    return true;
}

bool Report::hypothesis_violated() const {
    for (const auto& c : checks_)
        if (c.status == Status::hypothesis_violated) return true;
    return false;
}

bool Report::has_failure(const std::string& id) const {
    const Check* c = find(id);
    return c && c->status == Status::fail;
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite_;
    j["passed"] = passed();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks_) {
        nlohmann::ordered_json e;
        e["id"] = c.id;
        e["anchor"] = c.anchor;
        e["status"] = status_name(c.status);
        e["diagnostic"] = c.diagnostic;
        e["evaluated"] = c.evaluated;
        e["witnesses"] = c.witnesses;
        auto ranks = nlohmann::ordered_json::array();
        for (const auto& [where, value] : c.ranks) ranks.push_back({{"at", where}, {"rank", value}});
        e["ranks"] = ranks;
        arr.push_back(std::move(e));
    }
    j["checks"] = arr;
    return j.dump(2) + "\n";
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "suite " << suite_ << ": " << (!passed() ? "FAIL" : hypothesis_violated() ? "HYPOTHESIS-VIOLATED" : "PASS")
       << "\n";
    for (const auto& c : checks_) {
        os << "  [" << status_name(c.status) << (c.diagnostic ? ", diagnostic" : "") << "] " << c.id
           << " (" << c.evaluated << " evaluated)";
        if (!c.anchor.empty()) os << "  " << c.anchor;
        os << "\n";
        for (const auto& w : c.witnesses) os << "      witness: " << w << "\n";
    }
    return os.str();
}

std::string fmt(const Q& q) { return q.get_str(); }

std::string fmt(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].get_str();
    }
    return s + ")";
}

std::string fmt(const Mat& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) s += "; ";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) s += " ";
            s += m(i, j).get_str();
        }
    }
    return s + "]";
}

std::string fmt(const Subspace& s) {
    std::string out = "span{";
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if (i) out += ", ";
        out += fmt(s.vector(i));
    }
    return out + "}";
}

}  // namespace diraclab
