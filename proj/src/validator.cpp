#include "pamr/validator.hpp"

#include <algorithm>
#include <unordered_map>

#include "pamr/error.hpp"

namespace pamr {

namespace {

const std::string kShayad = "sh\xC3\xA2yad";            // shâyad
const std::string kBayestan = "b\xC3\xA2yestan";        // bâyestan
const std::string kTavanestan = "tav\xC3\xA2nestan";    // tavânestan
const std::string kDashtan = "d\xC3\xA2shtan";          // dâshtan

struct CoreArg {
  int index;
  std::string target;  // variable, or constant text for attributes
  bool is_variable;
};

// Per-variable views over the forward-normalized graph.
struct GraphIndex {
  std::unordered_map<std::string, std::string> concept_of;
  std::unordered_map<std::string, std::vector<Edge>> out;
  std::unordered_map<std::string, std::vector<Edge>> in;
  std::unordered_map<std::string, std::vector<Attribute>> attrs;
  std::unordered_map<std::string, std::vector<CoreArg>> core;

  explicit GraphIndex(const Graph& g) {
    for (const auto& inst : g.instances()) concept_of.emplace(inst.var, inst.label);
    for (auto& e : g.normalized_edges()) {
      int idx = core_arg_index(e.role);
      if (idx >= 0) core[e.source].push_back({idx, e.target, true});
      in[e.target].push_back(e);
      out[e.source].push_back(std::move(e));
    }
    for (auto& a : g.attributes()) {
      int idx = core_arg_index(a.role);
      if (idx >= 0) core[a.source].push_back({idx, a.value.value, false});
      attrs[a.source].push_back(std::move(a));
    }
  }

  const std::string& label(const std::string& var) const {
    static const std::string kEmpty;
    auto it = concept_of.find(var);
    return it == concept_of.end() ? kEmpty : it->second;
  }

  template <typename Map>
  static const typename Map::mapped_type& get(const Map& m, const std::string& key) {
    static const typename Map::mapped_type kEmpty{};
    auto it = m.find(key);
    return it == m.end() ? kEmpty : it->second;
  }
};

// Frame of `label` after variant normalization and spelling resolution.
const VerbFrame* event_frame(const Lexicon& lex, const std::string& label) {
  return lex.lookup_frame(lex.normalize_verb(label).lemma);
}

std::string ticked(std::string_view s) { return "'" + std::string(s) + "'"; }

class RuleRunner {
 public:
  RuleRunner(const Graph& g, const Lexicon& lex, const ValidationContext& ctx)
      : g_(g), lex_(lex), ctx_(ctx), idx_(g) {}

  std::vector<Diagnostic> run() {
    for (const auto& inst : g_.instances()) {
      const std::string& v = inst.var;
      const std::string& c = inst.label;
      infinitive_lemma(v, c);
      lvc_unified(v, c);
      variant_lv(v, c);
      polite_form(v, c);
      shayad_as_mod(v, c);
      modal_verb_args(v, c);
      possessor_clitic(v, c);
      pronoun_inventory(v, c);
      causative_args(v, c);
      arg_in_frame(v, c);
    }
    return std::move(out_);
  }

 private:
  void emit(RuleId rule, const std::string& var, std::string message,
            Severity severity) {
    out_.push_back({rule, severity, var, std::move(message)});
  }
  void emit(RuleId rule, const std::string& var, std::string message) {
    emit(rule, var, std::move(message), default_severity(rule));
  }

  const std::vector<CoreArg>& core(const std::string& v) const { return GraphIndex::get(idx_.core, v); }

  void infinitive_lemma(const std::string& v, const std::string& c) {
    if (core(v).empty()) return;
    if (lex_.concept_kind(c) == ConceptKind::Abstract || c == kShayad) return;
    if (event_frame(lex_, c)) return;
    for (const LvcEntry* e : lex_.lvcs_with_nv(c)) {
      if (e->nv_predicative) {
        emit(RuleId::R1InfinitiveLemma, v,
             "predicative nominal " + ticked(c) + " carries arguments; annotate it as the event " +
                 ticked(e->canonical));
        return;
      }
    }
    if (!lex_.lvcs_with_nv(c).empty()) {
      emit(RuleId::R1InfinitiveLemma, v,
           "non-predicative nominal " + ticked(c) + " cannot carry core arguments");
      return;
    }
    emit(RuleId::R1InfinitiveLemma, v,
         "concept " + ticked(c) + " has core arguments but is not an infinitive lemma in the lexicon");
  }

  void lvc_unified(const std::string& v, const std::string& c) {
    for (const auto& arg : core(v)) {
      if (!arg.is_variable) continue;
      const std::string& nv = idx_.label(arg.target);
      if (nv.empty()) continue;
      std::string fused = nv + "_" + c;
      const LvcEntry* entry = lex_.lvc_for(fused);
      if (!entry || entry->heavy_homograph) continue;
      emit(RuleId::R2LvcUnified, v,
           "light verb " + ticked(c) + " with nonverbal element " + ticked(nv) + " as ARG" +
               std::to_string(arg.index) + "; annotate the pair as the single concept " +
               ticked(entry->canonical));
    }
  }

  void variant_lv(const std::string& v, const std::string& c) {
    VariantKind kind = lex_.variant_kind(c);
    if (kind == VariantKind::None || kind == VariantKind::Formal) return;
    std::string_view why = kind == VariantKind::LightVerb          ? "light-verb variant"
                           : kind == VariantKind::SimpleEquivalent ? "simple verb with an LVC equivalent"
                                                                   : "morphological variant";
    emit(RuleId::R3VariantLv, v,
         std::string(why) + " " + ticked(c) + "; use " + ticked(lex_.normalize_verb(c).lemma));
  }

  void polite_form(const std::string& v, const std::string& c) {
    bool has_polite_plus = false;
    for (const auto& a : GraphIndex::get(idx_.attrs, v)) {
      if (a.role != "polite") continue;
      if (a.value.value == "+" && !a.value.quoted) {
        has_polite_plus = true;
      } else {
        emit(RuleId::R4PoliteForm, v, ":polite must be +, found " + ticked(a.value.value),
             Severity::Error);
      }
    }
    for (const auto& e : GraphIndex::get(idx_.out, v)) {
      if (e.role == "polite") {
        emit(RuleId::R4PoliteForm, v, ":polite must be +, found variable " + ticked(e.target),
             Severity::Error);
      }
    }
    if (lex_.variant_kind(c) == VariantKind::Formal && !has_polite_plus) {
      emit(RuleId::R4PoliteForm, v,
           "formal variant " + ticked(c) + "; annotate as " + ticked(lex_.normalize_verb(c).lemma) +
               " with :polite +");
    }
  }

  void shayad_as_mod(const std::string& v, const std::string& c) {
    if (c != kShayad) return;
    const auto& outgoing = GraphIndex::get(idx_.out, v);
    if (!outgoing.empty()) {
      emit(RuleId::R5ShayadAsMod, v,
           ticked(c) + " is used as a predicate (:" + outgoing.front().role +
               " edge); it must only modify via :mod");
      return;
    }
    for (const auto& e : GraphIndex::get(idx_.in, v)) {
      if (e.role != "mod") {
        emit(RuleId::R5ShayadAsMod, v,
             ticked(c) + " is attached by :" + e.role + "; it must only be the target of :mod");
        return;
      }
    }
  }

  void modal_verb_args(const std::string& v, const std::string& c) {
    if (c != kBayestan && c != kTavanestan) return;
    const CoreArg* arg1 = nullptr;
    for (const auto& a : core(v)) {
      if (a.index == 1) {
        arg1 = &a;
        break;
      }
    }
    if (!arg1) {
      emit(RuleId::R6ModalVerbArgs, v, "modal verb " + ticked(c) + " needs an :ARG1 event");
      return;
    }
    const std::string& target = arg1->is_variable ? idx_.label(arg1->target) : arg1->target;
    if (!arg1->is_variable || !event_frame(lex_, target)) {
      emit(RuleId::R6ModalVerbArgs, v,
           "modal verb " + ticked(c) + " has :ARG1 " + ticked(target) + ", which is not an event");
    }
  }

  void possessor_clitic(const std::string& v, const std::string& c) {
    if (c != kDashtan) return;
    const VerbFrame* frame = builtin_lexicon().lookup_frame(kDashtan);
    if (!frame) return;
    std::set<int> used;
    for (const auto& a : core(v)) used.insert(a.index);
    for (int i : used) {
      if (!frame->defines(i)) {
        emit(RuleId::R7PossessorClitic, v,
             ticked(c) + " takes ARG1 (owner) and ARG2 (possession); found ARG" + std::to_string(i));
      }
    }
    for (const auto& [i, gloss] : frame->args) {
      if (!used.contains(i)) {
        emit(RuleId::R7PossessorClitic, v,
             ticked(c) + " is missing ARG" + std::to_string(i) + " (" + gloss + ")");
      }
    }
  }

  void pronoun_inventory(const std::string& v, const std::string& c) {
    if (!ctx_.clitic_variables.contains(v)) return;
    if (!GraphIndex::get(idx_.out, v).empty()) {
      emit(RuleId::R8PronounInventory, v, "clitic-expanded variable has outgoing edges; it must be a pronoun leaf");
    } else if (!lex_.is_pronoun(c)) {
      emit(RuleId::R8PronounInventory, v, "clitic-expanded concept " + ticked(c) + " is not a pronoun");
    }
  }

  void causative_args(const std::string& v, const std::string& c) {
    const auto& args = core(v);
    if (args.empty()) return;
    const VerbFrame* frame = event_frame(lex_, c);
    if (!frame || !frame->defines(1)) return;
    bool has_arg0 = false;
    bool has_other = false;
    for (const auto& a : args) (a.index == 0 ? has_arg0 : has_other) = true;
    if (has_arg0 && !has_other) {
      emit(RuleId::R9CausativeArgs, v,
           ticked(c) + " has ARG0 but no other core argument; the causative needs its ARG1");
    }
  }

  void arg_in_frame(const std::string& v, const std::string& c) {
    const VerbFrame* frame = event_frame(lex_, c);
    if (!frame) return;
    std::set<int> reported;
    for (const auto& a : core(v)) {
      if (frame->defines(a.index) || !reported.insert(a.index).second) continue;
      emit(RuleId::R10ArgInFrame, v,
           "ARG" + std::to_string(a.index) + " is not defined by the frame of " + ticked(frame->lemma));
    }
  }

  const Graph& g_;
  const Lexicon& lex_;
  const ValidationContext& ctx_;
  GraphIndex idx_;
  std::vector<Diagnostic> out_;
};

std::vector<Diagnostic> finalize(const Graph& g, std::vector<Diagnostic> found, const RuleConfig& cfg) {
  std::erase_if(found, [&](const Diagnostic& d) { return !cfg.is_enabled(d.rule); });
  for (auto& d : found) {
    if (auto it = cfg.severity_overrides.find(d.rule); it != cfg.severity_overrides.end()) {
      d.severity = it->second;
    }
  }
  std::unordered_map<std::string, std::size_t> order;
  for (const auto& v : preorder(g)) order.emplace(v, order.size());
  auto rank = [&](const std::string& v) {
    auto it = order.find(v);
    return it == order.end() ? order.size() : it->second;
  };
  std::stable_sort(found.begin(), found.end(), [&](const Diagnostic& a, const Diagnostic& b) {
    auto ra = rank(a.variable);
    auto rb = rank(b.variable);
    if (ra != rb) return ra < rb;
    if (ra == order.size() && a.variable != b.variable) return a.variable < b.variable;
    return a.rule < b.rule;
  });
  return found;
}

}  // namespace

Severity default_severity(RuleId rule) {
  switch (rule) {
    case RuleId::R3VariantLv:
    case RuleId::R4PoliteForm:
    case RuleId::R9CausativeArgs:
      return Severity::Warning;
    case RuleId::R7PossessorClitic:
      return Severity::Info;
    default:
      return Severity::Error;
  }
}

RuleConfig RuleConfig::only(std::initializer_list<RuleId> rules) {
  RuleConfig cfg;
  cfg.enabled = rules;
  return cfg;
}

RuleConfig parse_rule_list(std::string_view list) {
  RuleConfig cfg;
  cfg.enabled.clear();
  std::size_t start = 0;
  while (start <= list.size()) {
    auto end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    std::string code(list.substr(start, end - start));
    std::erase(code, ' ');
    for (auto& ch : code) ch = static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 32 : ch);
    if (!code.empty()) {
      auto rule = parse_rule_code(code);
      if (!rule) throw ContractError("unknown rule id '" + code + "'");
      cfg.enabled.insert(*rule);
    }
    start = end + 1;
  }
  return cfg;
}

std::vector<Diagnostic> validate(const Graph& g, const Lexicon& lex, const RuleConfig& cfg,
                                 const ValidationContext& ctx) {
  std::vector<Diagnostic> structural = check_wellformed(g);
  if (!structural.empty()) return finalize(g, std::move(structural), cfg);
  return finalize(g, RuleRunner(g, lex, ctx).run(), cfg);
}

}  // namespace pamr
