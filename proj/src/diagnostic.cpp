#include "pamr/diagnostic.hpp"

namespace pamr {

namespace {

struct RuleInfo {
  RuleId id;
  std::string_view code;
  std::string_view name;
};

constexpr std::array<RuleInfo, kAllRules.size()> kRuleTable = {{
    {RuleId::GInstance, "G-INSTANCE", "Instance"},
    {RuleId::GDangle, "G-DANGLE", "Dangle"},
    {RuleId::GUnreachable, "G-UNREACHABLE", "Unreachable"},
    {RuleId::GCycle, "G-CYCLE", "Cycle"},
    {RuleId::R1InfinitiveLemma, "R1", "InfinitiveLemma"},
    {RuleId::R2LvcUnified, "R2", "LVCUnified"},
    {RuleId::R3VariantLv, "R3", "VariantLV"},
    {RuleId::R4PoliteForm, "R4", "PoliteForm"},
    {RuleId::R5ShayadAsMod, "R5", "ShayadAsMod"},
    {RuleId::R6ModalVerbArgs, "R6", "ModalVerbArgs"},
    {RuleId::R7PossessorClitic, "R7", "PossessorClitic"},
    {RuleId::R8PronounInventory, "R8", "PronounInventory"},
    {RuleId::R9CausativeArgs, "R9", "CausativeArgs"},
    {RuleId::R10ArgInFrame, "R10", "ArgInFrame"},
}};

const RuleInfo& info(RuleId rule) { return kRuleTable[static_cast<std::size_t>(rule)]; }

}  // namespace

std::string_view rule_code(RuleId rule) { return info(rule).code; }

std::string_view rule_name(RuleId rule) { return info(rule).name; }

std::optional<RuleId> parse_rule_code(std::string_view code) {
  for (const auto& entry : kRuleTable) {
    if (entry.code == code) return entry.id;
  }
  return std::nullopt;
}

bool is_graph_rule(RuleId rule) {
  return rule == RuleId::GInstance || rule == RuleId::GDangle ||
         rule == RuleId::GUnreachable || rule == RuleId::GCycle;
}

std::string_view severity_name(Severity severity) {
  switch (severity) {
    case Severity::Error:
      return "error";
    case Severity::Warning:
      return "warning";
    case Severity::Info:
      return "info";
  }
  return "error";
}

}  // namespace pamr
