#include <doctest.h>

#include <algorithm>

#include "pamr/corpus.hpp"
#include "pamr/error.hpp"
#include "pamr/penman.hpp"
#include "pamr/validator.hpp"
#include "support/test_support.hpp"

using namespace pamr;

namespace {

std::vector<AnnotatedSentence> load(const char* name) {
  LoadOptions opts;
  opts.require_wellformed = false;
  return load_corpus(testing::data_dir() / name, opts);
}

ValidationContext context_of(const AnnotatedSentence& rec) {
  ValidationContext ctx;
  for (auto& v : rec.clitic_variables()) ctx.clitic_variables.insert(v);
  return ctx;
}

std::vector<Diagnostic> check(std::string_view penman, const RuleConfig& cfg = {}) {
  return validate(parse_penman_or_throw(penman), builtin_lexicon(), cfg);
}

std::vector<RuleId> rules_of(const std::vector<Diagnostic>& ds) {
  std::vector<RuleId> out;
  for (const auto& d : ds) out.push_back(d.rule);
  return out;
}

std::vector<Diagnostic> without(std::vector<Diagnostic> ds, RuleId rule) {
  std::erase_if(ds, [&](const Diagnostic& d) { return d.rule == rule; });
  return ds;
}

// Structural faults the parser refuses to produce.
Graph duplicate_instance() {
  return GraphBuilder{}.set_root("a").add_instance("a", "xastan").add_instance("a", "raftan").build();
}
Graph dangling_edge() {
  return GraphBuilder{}.set_root("a").add_instance("a", "xastan").add_edge("a", "ARG0", "b").build();
}
Graph unreachable() {
  return GraphBuilder{}
      .set_root("a")
      .add_instance("a", "xastan")
      .add_instance("b", "doxtar")
      .add_instance("c", "raftan")
      .add_edge("c", "ARG0", "b")
      .build();
}

}  // namespace

TEST_CASE("guideline examples validate without errors") {
  for (const auto& rec : load("guideline_examples.amr")) {
    CAPTURE(rec.id);
    auto ds = validate(rec.graph, builtin_lexicon(), {}, context_of(rec));
    CHECK(std::none_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; }));
    CHECK(ds.empty());
  }
}

TEST_CASE("each rule fixture fires exactly its own rule") {
  auto corpus = load("rules.amr");
  REQUIRE(corpus.size() == 22);
  for (const auto& rec : corpus) {
    CAPTURE(rec.id);
    const std::string code = rec.id.substr(0, rec.id.size() - 1);
    const bool should_fire = rec.id.back() == '+';
    auto rule = parse_rule_code(code);
    REQUIRE(rule.has_value());
    auto ds = validate(rec.graph, builtin_lexicon(), {}, context_of(rec));
    if (should_fire) {
      REQUIRE(!ds.empty());
      for (const auto& d : ds) CHECK(d.rule == *rule);
    } else {
      CHECK(ds.empty());
    }
  }
}

TEST_CASE("toggling a rule removes only its findings") {
  auto corpus = load("rules.amr");
  std::vector<std::pair<Graph, ValidationContext>> cases;
  for (const auto& rec : corpus) cases.emplace_back(rec.graph, context_of(rec));
  cases.emplace_back(duplicate_instance(), ValidationContext{});
  cases.emplace_back(dangling_edge(), ValidationContext{});
  cases.emplace_back(unreachable(), ValidationContext{});

  for (RuleId rule : kAllRules) {
    CAPTURE(rule_code(rule));
    RuleConfig off;
    off.enabled.erase(rule);
    bool fired = false;
    for (const auto& [g, ctx] : cases) {
      auto all = validate(g, builtin_lexicon(), {}, ctx);
      fired = fired || std::any_of(all.begin(), all.end(), [&](const Diagnostic& d) { return d.rule == rule; });
      auto alone = validate(g, builtin_lexicon(), RuleConfig::only({rule}), ctx);
      std::vector<Diagnostic> expected_alone;
      std::copy_if(all.begin(), all.end(), std::back_inserter(expected_alone),
                   [&](const Diagnostic& d) { return d.rule == rule; });
      CHECK(validate(g, builtin_lexicon(), off, ctx) == without(all, rule));
      CHECK(alone == expected_alone);
    }
    CHECK(fired);
  }
}

TEST_CASE("graph rules") {
  CHECK(rules_of(validate(duplicate_instance(), builtin_lexicon())) == std::vector{RuleId::GInstance});
  CHECK(rules_of(validate(dangling_edge(), builtin_lexicon())) == std::vector{RuleId::GDangle});
  auto u = validate(unreachable(), builtin_lexicon());
  REQUIRE(!u.empty());
  CHECK(u.front().rule == RuleId::GUnreachable);
  CHECK(rules_of(check("(a / xastan :ARG0 a)")) == std::vector{RuleId::GCycle});
}

TEST_CASE("R1 infinitive lemma") {
  auto ds = check("(x / raft :ARG0 (y / dalghak))");
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule == RuleId::R1InfinitiveLemma);
  CHECK(ds[0].severity == Severity::Error);
  CHECK(ds[0].variable == "x");
  // A predicative nominal used as an event points at its LVC.
  auto nv = check("(x / raghs :ARG0 (y / dalghak))");
  REQUIRE(nv.size() == 1);
  CHECK(nv[0].message.find("raghs_kardan") != std::string::npos);
  // Abstract concepts and plain nouns are left alone.
  CHECK(check("(x / and :op1 (y / dalghak) :op2 (z / mâri))").empty());
  CHECK(check("(x / dalghak)").empty());
}

TEST_CASE("R2 unified LVC") {
  auto ds = check("(x / zadan :ARG0 (t / tagarg) :ARG2 (l / latme))");
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule == RuleId::R2LvcUnified);
  CHECK(ds[0].message.find("latme_zadan") != std::string::npos);
  CHECK(check("(x / latme_zadan :ARG0 (t / tagarg) :ARG1 (b / bâgh))").empty());
  // dast keshidan keeps its heavy reading.
  CHECK(check("(x / keshidan :ARG0 (p / pesar) :ARG1 (m / miz) :ARG2 (d / dast))").empty());
}

TEST_CASE("R3 and R4 variants") {
  auto r3 = check("(x / âb_shodan :ARG0 (a / âftâb) :ARG1 (b / barf))");
  REQUIRE(r3.size() == 1);
  CHECK(r3[0].rule == RuleId::R3VariantLv);
  CHECK(r3[0].severity == Severity::Warning);
  CHECK(r3[0].message.find("âb_kardan") != std::string::npos);

  auto warn = check("(x / fot_nemudan :ARG1 (p / pedar))");
  REQUIRE(warn.size() == 1);
  CHECK(warn[0].rule == RuleId::R4PoliteForm);
  CHECK(warn[0].severity == Severity::Warning);
  CHECK(check("(x / fot_nemudan :ARG1 (p / pedar) :polite +)").empty());

  auto bad = check("(x / fot_kardan :ARG1 (p / pedar) :polite \"yes\")");
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].rule == RuleId::R4PoliteForm);
  CHECK(bad[0].severity == Severity::Error);
  CHECK(check("(x / fot_kardan :ARG1 (p / pedar) :polite \"+\")").size() == 1);
  CHECK(check("(x / fot_kardan :ARG1 (p / pedar) :polite +)").empty());
}

TEST_CASE("R5 shâyad only as a mod leaf") {
  auto root = check("(x / shâyad :ARG1 (y / bâridan :ARG0 (z / bârân)))");
  REQUIRE(root.size() == 1);
  CHECK(root[0].rule == RuleId::R5ShayadAsMod);
  CHECK(root[0].variable == "x");
  auto wrong_role = check("(x / bâridan :ARG0 (y / bârân) :time (s / shâyad))");
  REQUIRE(wrong_role.size() == 1);
  CHECK(wrong_role[0].variable == "s");
  CHECK(check("(x / bâridan :ARG0 (y / bârân) :mod (s / shâyad))").empty());
}

TEST_CASE("R6 modal verbs take an event ARG1") {
  CHECK(rules_of(check("(x / bâyestan :ARG1 (d / dalghak))")) == std::vector{RuleId::R6ModalVerbArgs});
  CHECK(rules_of(check("(x / tavânestan :ARG0 (d / dalghak))")) ==
        std::vector{RuleId::R6ModalVerbArgs, RuleId::R9CausativeArgs});
  CHECK(check("(x / tavânestan :ARG0 (d / dalghak) :ARG1 (r / raftan :ARG0 d))").empty());
  // The complement may be a variant, resolved through normalization.
  CHECK(check("(x / bâyestan :ARG1 (r / birun_kardan :ARG0 (a / 'u) :ARG1 (d / dalghak)))").empty());
}

TEST_CASE("R7 possessive dâshtan") {
  auto missing = check("(x / dâshtan :ARG1 (m / man))");
  REQUIRE(missing.size() == 1);
  CHECK(missing[0].rule == RuleId::R7PossessorClitic);
  CHECK(missing[0].severity == Severity::Info);
  auto extra = check("(x / dâshtan :ARG0 (m / man) :ARG1 (p / pul) :ARG2 (k / ketâb))");
  CHECK(std::all_of(extra.begin(), extra.end(), [](const Diagnostic& d) {
    return d.rule == RuleId::R7PossessorClitic || d.rule == RuleId::R10ArgInFrame;
  }));
  CHECK(std::any_of(extra.begin(), extra.end(), [](const Diagnostic& d) {
    return d.rule == RuleId::R7PossessorClitic;
  }));
}

TEST_CASE("R8 clitic pronouns") {
  Graph g = parse_penman_or_throw("(x / didan :ARG0 (x3 / man) :ARG1 (x2 / ash))");
  ValidationContext ctx;
  ctx.clitic_variables = {"x2"};
  auto ds = validate(g, builtin_lexicon(), {}, ctx);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule == RuleId::R8PronounInventory);
  CHECK(ds[0].variable == "x2");
  // Without the metadata nothing marks x2 as a clitic.
  CHECK(validate(g, builtin_lexicon()).empty());
  // A pronoun that is not a leaf is also reported.
  Graph h = parse_penman_or_throw("(x / didan :ARG0 (x3 / man) :ARG1 (x2 / 'u :mod (b / bad)))");
  CHECK(rules_of(validate(h, builtin_lexicon(), {}, ctx)) == std::vector{RuleId::R8PronounInventory});
}

TEST_CASE("R9 and R10 against frames") {
  auto r9 = check("(x / rixtan :ARG0 (d / dalghak))");
  REQUIRE(r9.size() == 1);
  CHECK(r9[0].rule == RuleId::R9CausativeArgs);
  CHECK(r9[0].severity == Severity::Warning);
  CHECK(check("(x / rixtan :ARG0 (d / dalghak) :ARG1 (a / âb))").empty());
  // Intransitive frames never trigger R9.
  CHECK(check("(x / oftâdan :ARG0 (d / dalghak))").empty());

  auto r10 = check("(x / xastan :ARG0 (d / doxtar) :ARG3 (r / raftan) :ARG3 (s / shodan))");
  REQUIRE(r10.size() == 1);
  CHECK(r10[0].rule == RuleId::R10ArgInFrame);
  CHECK(r10[0].message.find("ARG3") != std::string::npos);
  // Inverse roles count for the frame of their forward source.
  CHECK(rules_of(check("(d / doxtar :ARG3-of (x / xastan :ARG0 d))")) == std::vector{RuleId::R10ArgInFrame});
}

TEST_CASE("a broken graph skips the catalog even with graph rules disabled") {
  auto ds = check("(x / raft :ARG0 (y / dalghak :mod x))");
  CHECK(rules_of(ds) == std::vector{RuleId::GCycle});
  RuleConfig no_cycle;
  no_cycle.enabled.erase(RuleId::GCycle);
  CHECK(check("(x / raft :ARG0 (y / dalghak :mod x))", no_cycle).empty());
}

TEST_CASE("configuration") {
  RuleConfig cfg = parse_rule_list("r1, G-cycle");
  CHECK(cfg.enabled == std::set<RuleId>{RuleId::R1InfinitiveLemma, RuleId::GCycle});
  CHECK_THROWS_AS(parse_rule_list("R11"), ContractError);

  RuleConfig loud;
  loud.severity_overrides[RuleId::R9CausativeArgs] = Severity::Error;
  auto ds = check("(x / rixtan :ARG0 (d / dalghak))", loud);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].severity == Severity::Error);
  for (RuleId r : kAllRules) CHECK(parse_rule_code(rule_code(r)) == r);
}

TEST_CASE("findings follow preorder") {
  auto ds = check("(x / raft :ARG0 (y / xastan :ARG0 (z / pesar) :ARG3 (w / bâgh)) :ARG1 (v / rixtan :ARG0 z))");
  std::vector<std::string> vars;
  for (const auto& d : ds) vars.push_back(d.variable);
  CHECK(vars == std::vector<std::string>{"x", "y", "v"});
}

TEST_CASE("a file lexicon is consulted") {
  Lexicon lex = load_lexicon_text("FRAME\tnegaristan\tARG0=looker\tARG1=thing looked at\n");
  Graph g = parse_penman_or_throw("(x / negaristan :ARG0 (d / doxtar) :ARG1 (m / mâh))");
  CHECK(rules_of(validate(g, builtin_lexicon())) == std::vector{RuleId::R1InfinitiveLemma});
  CHECK(validate(g, lex).empty());
}
