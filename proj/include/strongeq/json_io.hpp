#pragma once

#include <string>

#include <json.hpp>

#include "strongeq/discovery.hpp"
#include "strongeq/se_oracle.hpp"
#include "strongeq/simplifier.hpp"
#include "strongeq/syntax.hpp"

namespace strongeq {

inline nlohmann::json atom_names_json(AtomSet s, const SymbolTable& table) {
  return nlohmann::json(table.names(s));
}

// {"x": [names], "y": [names]}
inline nlohmann::json to_json(const HTPair& pair, const SymbolTable& table) {
  return {{"x", atom_names_json(pair.x, table)}, {"y", atom_names_json(pair.y, table)}};
}

inline nlohmann::json to_json(const DiscoveryReport& report, const SymbolTable& table) {
  nlohmann::json mismatches = nlohmann::json::array();
  for (const auto& mm : report.mismatches) {
    nlohmann::json tuple = nlohmann::json::array();
    for (const auto& r : mm.tuple) tuple.push_back(format_rule(r, table));
    mismatches.push_back({{"tuple", tuple}, {"oracle", mm.oracle}, {"cond", mm.condition}});
  }
  return {{"shape", {report.shape.k, report.shape.m, report.shape.n}},
          {"atoms", report.atom_count},
          {"total", report.total},
          {"se_positive", report.se_positive},
          {"cond_positive", report.condition_positive},
          {"mismatch_count", report.mismatch_count},
          {"mismatches", mismatches},
          {"elapsed_ms", report.elapsed.count()}};
}

// One object per step. Single-index fields are scalars, multi-index fields arrays:
//   {"step":"T5-delete","removed":i}
//   {"step":"T7-head-clean","index":i,"rule":"..."}
//   {"step":"T6-delete","kept":i,"removed":j}
//   {"step":"T8-delete","kept":[i,j],"removed":l}
//   {"step":"T9-replace","removed":[i,j],"rule":"..."}
inline nlohmann::json to_json(const SimplifyStep& step, const SymbolTable& table) {
  nlohmann::json j{{"step", step_name(step.kind)}};
  switch (step.kind) {
    case StepKind::DeleteTautology: j["removed"] = step.consumed.at(0); break;
    case StepKind::HeadClean: j["index"] = step.consumed.at(0); break;
    case StepKind::DeleteGivenOne:
      j["kept"] = step.kept.at(0);
      j["removed"] = step.consumed.at(0);
      break;
    case StepKind::DeleteGivenTwo:
      j["kept"] = step.kept;
      j["removed"] = step.consumed.at(0);
      break;
    case StepKind::ReplacePair: j["removed"] = step.consumed; break;
  }
  if (step.produced) j["rule"] = format_rule(*step.produced, table);
  return j;
}

inline std::string trace_to_json_lines(const SimplifyTrace& trace, const SymbolTable& table) {
  std::string out;
  for (const auto& s : trace) {
    out += to_json(s, table).dump();
    out += '\n';
  }
  return out;
}

}  // namespace strongeq
