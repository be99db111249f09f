#pragma once

#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pamr/diagnostic.hpp"
#include "pamr/graph.hpp"
#include "pamr/lexicon.hpp"

namespace pamr {

/// Severity a rule reports when no override is configured. R4 reports a
/// non-`+` polite value as an Error regardless of this default.
Severity default_severity(RuleId rule);

struct RuleConfig {
  std::set<RuleId> enabled{kAllRules.begin(), kAllRules.end()};
  std::map<RuleId, Severity> severity_overrides;

  bool is_enabled(RuleId rule) const { return enabled.contains(rule); }

  /// Only the listed rules enabled.
  static RuleConfig only(std::initializer_list<RuleId> rules);
};

/// Parses a comma-separated rule list ("R1,R5,G-CYCLE") into an enabled set.
/// Throws ContractError on unknown codes.
RuleConfig parse_rule_list(std::string_view list);

// Per-record annotation context that is not part of the graph itself.
struct ValidationContext {
  // Variables whose concepts were expanded from clitics (`# ::clitic x2 x4`).
  std::set<std::string> clitic_variables;
};

/// Runs the graph-level checks, then (if none failed) the PAMR rule catalog.
/// Output is ordered by variable preorder, then rule id.
std::vector<Diagnostic> validate(const Graph& g, const Lexicon& lex, const RuleConfig& cfg = {},
                                 const ValidationContext& ctx = {});

}  // namespace pamr
