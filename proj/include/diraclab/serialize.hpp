#pragma once

#include "diraclab/scenarios.hpp"

#include <json.hpp>

#include <stdexcept>

namespace diraclab {

using Json = nlohmann::ordered_json;

// A document that does not match its schema, or a dangling bundle reference.
struct SchemaError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Scalars are written as "p/q" strings so every value survives exactly.
Json to_json(const Mat& m);
Json to_json(const ThreeForm& t);
Json to_json(const DiracFiber& l);
Json to_json(const MorphismFiber& f);
Json to_json(const NatTransFiber& t);
Mat mat_from_json(const Json& j);
ThreeForm three_form_from_json(const Json& j);
DiracFiber dirac_from_json(const Json& j);
MorphismFiber morphism_from_json(const Json& j);
NatTransFiber nat_trans_from_json(const Json& j);

// "gfb-v1"
Json dump_bundle(const GroupoidBundle& g);
GroupoidBundle load_bundle(const Json& j);
// sha256 of the compact dump, hex.
std::string content_hash(const GroupoidBundle& g);

// "cd-v1": bundles stored once under their content hash and referenced by it.
Json dump_datum(const CoisotropicDatum& d);
CoisotropicDatum load_datum(const Json& j);

// "med-v1"
Json dump_morita(const MoritaEquivalenceDatum& d);
MoritaEquivalenceDatum load_morita(const Json& j);

// "df-v1": reduced Dirac fibers at the chart points, with the oracle fibers if any.
Json dump_reduction(const Reduction& r);

// Two-space indented text with a trailing newline; identical input gives identical bytes.
std::string to_text(const Json& j);
// Throws SchemaError on malformed text.
Json parse_json(const std::string& text);

// Scenario file: {"name", "params", "seed", "samples": {objects, arrows, pairs}}.
// Missing samples fall back to `defaults`.
ScenarioSpec scenario_from_json(const Json& j, const Samples& defaults = Samples{});
Json to_json(const ScenarioSpec& s);

}  // namespace diraclab
