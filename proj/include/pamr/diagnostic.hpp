#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace pamr {

enum class Severity { Error, Warning, Info };

// Stable rule identifiers. Enumerator order is the tie-break order used when
// sorting diagnostics, so graph-level rules come first and R10 follows R9.
enum class RuleId {
  GInstance,
  GDangle,
  GUnreachable,
  GCycle,
  R1InfinitiveLemma,
  R2LvcUnified,
  R3VariantLv,
  R4PoliteForm,
  R5ShayadAsMod,
  R6ModalVerbArgs,
  R7PossessorClitic,
  R8PronounInventory,
  R9CausativeArgs,
  R10ArgInFrame,
};

inline constexpr std::array<RuleId, 14> kAllRules = {
    RuleId::GInstance,         RuleId::GDangle,          RuleId::GUnreachable,
    RuleId::GCycle,            RuleId::R1InfinitiveLemma, RuleId::R2LvcUnified,
    RuleId::R3VariantLv,       RuleId::R4PoliteForm,     RuleId::R5ShayadAsMod,
    RuleId::R6ModalVerbArgs,   RuleId::R7PossessorClitic, RuleId::R8PronounInventory,
    RuleId::R9CausativeArgs,   RuleId::R10ArgInFrame,
};

/// "G-INSTANCE", "R1", ... as used in config files and on the command line.
std::string_view rule_code(RuleId rule);
std::optional<RuleId> parse_rule_code(std::string_view code);
/// Short human name, e.g. "InfinitiveLemma".
std::string_view rule_name(RuleId rule);
bool is_graph_rule(RuleId rule);

std::string_view severity_name(Severity severity);

struct Diagnostic {
  RuleId rule;
  Severity severity;
  std::string variable;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

}  // namespace pamr
