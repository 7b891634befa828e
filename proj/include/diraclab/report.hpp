#pragma once

#include "diraclab/linalg.hpp"

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace diraclab {

enum class Status { pass, fail, hypothesis_violated };

std::string status_name(Status s);

struct Check {
    std::string id;
    std::string anchor;  // the identity being checked, in formula form
    Status status = Status::pass;
    std::size_t evaluated = 0;
    std::vector<std::string> witnesses;
    std::vector<std::pair<std::string, std::int64_t>> ranks;
    // Diagnostic checks are reported but never make the report fail.
    bool diagnostic = false;

    void tick() { ++evaluated; }
    void fail(std::string witness);
    void violate(std::string witness);
    void expect(bool ok, const std::string& witness) {
        tick();
        if (!ok) fail(witness);
    }
    void rank(std::string where, std::int64_t value) { ranks.emplace_back(std::move(where), value); }
    bool ok() const { return status == Status::pass; }
};

class Report {
public:
    explicit Report(std::string suite = "") : suite_(std::move(suite)) {}

    // Returns the record with this id, creating it in insertion order.
    Check& check(const std::string& id, const std::string& anchor = "");
    const Check* find(const std::string& id) const;
    void merge(const Report& other, const std::string& prefix = "");

    const std::string& suite() const { return suite_; }
    const std::deque<Check>& checks() const { return checks_; }

    bool passed() const;            // no failing non-diagnostic check
    bool any_failed() const { return !passed(); }
    bool hypothesis_violated() const;
    bool has_failure(const std::string& id) const;

    std::string to_json() const;
    std::string to_text() const;

private:
    std::string suite_;
    std::deque<Check> checks_;  // stable references for check()
};

std::string fmt(const Q& q);
std::string fmt(const Vec& v);
std::string fmt(const Mat& m);
std::string fmt(const Subspace& s);

}  // namespace diraclab
