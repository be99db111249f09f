#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pamr/error.hpp"
#include "pamr/lexicon.hpp"
#include "pamr/unicode.hpp"

using namespace pamr;

TEST_CASE("builtin dâshtan frame") {
  const VerbFrame* f = builtin_lexicon().lookup_frame("dâshtan");
  REQUIRE(f != nullptr);
  CHECK(f->args.size() == 2);
  CHECK(f->args.at(1) == "mâlek (owner)");
  CHECK(f->args.at(2) == "melk (possession)");
  CHECK(f->source == FrameSource::Builtin);
}

TEST_CASE("builtin covers the guideline verbs") {
  for (const char* lemma : {"xastan", "raftan", "kardan", "shodan", "dâshtan", "rixtan", "âb_kardan", "charxidan",
                            "latme_zadan", "dast_keshidan", "keshidan", "didan", "oftâdan", "bâz_kardan",
                            "talâsh_kardan", "da'vat_kardan", "birun_kardan", "xâbidan", "xaste_kardan", "bâridan",
                            "bâyestan", "tavânestan"}) {
    CAPTURE(lemma);
    CHECK(builtin_lexicon().lookup_frame(lemma) != nullptr);
  }
}

TEST_CASE("lookup is exact on NFC lemmas") {
  const Lexicon& lex = builtin_lexicon();
  CHECK(lex.lookup_frame("raft") == nullptr);
  const VerbFrame* lz = lex.lookup_frame("latme_zadan");
  REQUIRE(lz != nullptr);
  CHECK(lz->defines(0));
  CHECK(lz->defines(1));
  CHECK(!lz->defines(2));
  // Decomposed input normalizes before lookup.
  CHECK(lex.lookup_frame("da\xCC\x82shtan") == lex.lookup_frame("dâshtan"));
}

TEST_CASE("solid and ZWNJ spellings of an LVC resolve to the underscore form") {
  const Lexicon& lex = builtin_lexicon();
  CHECK(lex.lookup_frame("talâshkardan") == lex.lookup_frame("talâsh_kardan"));
  CHECK(lex.lookup_frame("bâz\xE2\x80\x8C" "kardan") == lex.lookup_frame("bâz_kardan"));
  REQUIRE(lex.lvc_for("bâzkardan") != nullptr);
  CHECK(lex.lvc_for("bâzkardan")->canonical == "bâz_kardan");
}

TEST_CASE("normalize_verb") {
  const Lexicon& lex = builtin_lexicon();
  CHECK(lex.normalize_verb("fot_nemudan") == VerbNormalization{"fot_kardan", true, true});
  CHECK(lex.normalize_verb("da'vat_nemudan") == VerbNormalization{"da'vat_kardan", true, true});
  CHECK(lex.normalize_verb("birun_andâxtan") == VerbNormalization{"birun_kardan", false, true});
  CHECK(lex.normalize_verb("fot_shodan") == VerbNormalization{"fot_kardan", false, true});
  CHECK(lex.normalize_verb("raghsidan") == VerbNormalization{"raghs_kardan", false, true});
  CHECK(lex.normalize_verb("charxândan") == VerbNormalization{"charxidan", false, true});
  CHECK(lex.normalize_verb("xastan") == VerbNormalization{"xastan", false, false});
  CHECK(lex.variant_kind("raghsidan") == VariantKind::SimpleEquivalent);
  CHECK(lex.variant_kind("fot_nemudan") == VariantKind::Formal);
  CHECK(lex.variant_kind("âb_shodan") == VariantKind::LightVerb);
  CHECK(lex.variant_kind("charxândan") == VariantKind::Morphological);
  CHECK(lex.variant_kind("xastan") == VariantKind::None);
}

TEST_CASE("normalization invariants over the whole builtin lexicon") {
  const Lexicon& lex = builtin_lexicon();
  std::vector<std::string> lemmas;
  for (const auto& [lemma, f] : lex.frames()) lemmas.push_back(lemma);
  for (const auto& [canonical, e] : lex.lvcs()) {
    CHECK(e.canonical == e.nv + "_" + e.lv);
    for (const auto* list : {&e.variant_lvs, &e.formal_variants, &e.simple_equivalents}) {
      lemmas.insert(lemmas.end(), list->begin(), list->end());
    }
  }
  for (const auto& lemma : lemmas) {
    CAPTURE(lemma);
    auto once = lex.normalize_verb(lemma);
    auto twice = lex.normalize_verb(once.lemma);
    CHECK(!twice.changed);
    CHECK(twice.lemma == once.lemma);
    if (once.changed) CHECK(lex.lookup_frame(once.lemma) != nullptr);
  }
}

TEST_CASE("inventories") {
  const Lexicon& lex = builtin_lexicon();
  for (const char* a : {"city", "name", "date-entity", "correlate-91", "person", "and", "but"}) {
    CHECK(lex.inventories().abstract_concepts.contains(a));
  }
  for (const char* p : {"man", "to", "'u", "ân", "mâ", "shomâ", "ânhâ"}) CHECK(lex.is_pronoun(p));
  for (const auto& s : lex.inventories().pronouns) CHECK(unicode::is_nfc(s));
  CHECK(lex.concept_kind("city") == ConceptKind::Abstract);
  CHECK(lex.concept_kind("doxtar") == ConceptKind::Lexical);
}

TEST_CASE("file records merge over builtins") {
  Lexicon lex = load_lexicon_text("# test\nFRAME\txastan\tARG0=wanter\tARG1=wanted\n"
                                  "FRAME\tnegaristan\tARG0=looker\tARG1=thing looked at\n"
                                  "LVC\tnegâh_kardan\tnegâh\tkardan\tsimple=negaristan\n"
                                  "FRAME\tnegâh_kardan\tARG0=looker\tARG1=thing looked at\n",
                                  "test.lex");
  const VerbFrame* x = lex.lookup_frame("xastan");
  REQUIRE(x != nullptr);
  CHECK(x->source == FrameSource::File);
  CHECK(x->args.at(0) == "wanter");
  CHECK(lex.lookup_frame("dâshtan") != nullptr);
  CHECK(lex.normalize_verb("negaristan").lemma == "negâh_kardan");
}

TEST_CASE("lexicon format errors carry line numbers") {
  auto error_line = [](std::string_view text) -> std::size_t {
    try {
      load_lexicon_text(text, "t.lex");
    } catch (const FormatError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(error_line("FRAME\tx_y\tARG0=a\n\nFRAME\tx_y\tARG1=b\n") == 3);
  CHECK(error_line("VERB\tx\n") == 1);
  CHECK(error_line("FRAME\tx\tARG6=a\n") == 1);
  CHECK(error_line("FRAME\tx\n") == 1);
  CHECK(error_line("FRAME\tx\tARG0=a\tARG0=b\n") == 1);
  CHECK(error_line("FRAME\ta_b\tARG0=x\nLVC\ta_c\ta\tb\n") == 2);
  CHECK(error_line("LVC\tq_kardan\tq\tkardan\n") == 1);
  CHECK(error_line("FRAME\tq_kardan\tARG0=x\nLVC\tq_kardan\tq\tkardan\tcolour=red\n") == 2);
  CHECK(error_line("FRAME\tq_kardan\tARG0=x\nLVC\tq_kardan\tq\tkardan\tpredicative=yes\n") == 2);
  // A lemma in two normalization lists.
  CHECK(error_line("FRAME\tq_kardan\tARG0=x\nLVC\tq_kardan\tq\tkardan\tsimple=fot_shodan\n") == 2);
  CHECK(error_line("FRAME\tq_kardan\tARG0=x\nLVC\tq_kardan\tq\tkardan\tvariants=pahn_kardan\n") == 2);
  CHECK(error_line("VARIANT\tfoo\tnowhere\n") == 1);

  try {
    load_lexicon_text("FRAME\tx\tARG0=a\nFRAME\tx\tARG1=b\n", "dup.lex");
    FAIL("expected a duplicate error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    CHECK(std::string(e.what()).find("dup.lex") != std::string::npos);
  }
}

TEST_CASE("load_lexicon from disk") {
  CHECK_THROWS_AS(load_lexicon("/nonexistent/pamr.lex"), IoError);
  auto path = std::filesystem::temp_directory_path() / "pamr_test_lexicon.lex";
  {
    std::ofstream out(path);
    out << "FRAME\tlatme_zadan\tARG0=damager\tARG1=damaged thing\tARG2=instrument\n";
  }
  Lexicon lex = load_lexicon(path);
  CHECK(lex.lookup_frame("latme_zadan")->defines(2));
  CHECK(lex.lookup_frame("latme_zadan")->source == FrameSource::File);
  std::filesystem::remove(path);
}
