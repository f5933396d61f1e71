#pragma once

// JSON documents exchanged with the command-line tool: toy configurations, hidden-variable
// model files, audit reports and scenario summaries. Output uses ordered_json so that keys
// appear in a fixed order and re-runs are byte-identical.

#include <string_view>

#include <nlohmann/json.hpp>

#include "kentsim/beables.hpp"
#include "kentsim/locality.hpp"
#include "kentsim/pilot_wave.hpp"
#include "kentsim/toyqm.hpp"

namespace kentsim::io {

using Json = nlohmann::ordered_json;

/// Parses text as JSON; syntax errors become ModelError carrying nlohmann's line/column text.
Json parse_json(std::string_view text);

/// Fields: a, b (number or [re, im]), x1, x2 (x3, x4 for Bell), T, m, and either
/// photons: [{position, direction}] or t1. Throws ConfigError naming the offending field.
toyqm::ToyConfig toy_config_from_json(const Json& j);
Json to_json(const toyqm::ToyConfig& cfg);

/// {"lambdas": [...], "measures": {"a1b1": [...], ...},
///  "cond": {"<lambda>": {"a1b1": {"++": p, "+-": p, "-+": p, "--": p}, ...}, ...}}
/// Throws ModelError naming the offending field path.
locality::FiniteHVModel model_from_json(const Json& j);
Json to_json(const locality::FiniteHVModel& m);

Json to_json(const locality::AuditReport& r);
Json to_json(const locality::ObservableStats& s);
Json to_json(const toyqm::FinalCondition& fc, const toyqm::BranchSet& bs);
Json to_json(const beables::RegimeTable& t);
Json to_json(const models::PWStats& s);

}  // namespace kentsim::io
