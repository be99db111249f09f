#include "pamr/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "pamr/error.hpp"
#include "pamr/graph.hpp"
#include "pamr/unicode.hpp"

namespace pamr {

extern const char* const kBuiltinLexiconText;

namespace {

constexpr std::string_view kZwnj = "\xE2\x80\x8C";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string nfc_or_empty(std::string_view s) {
  if (unicode::find_invalid_utf8(s)) return {};
  return unicode::to_nfc(s);
}

struct Located {
  std::size_t line = 0;
};

struct FrameRecord : Located {
  VerbFrame frame;
};
struct LvcRecord : Located {
  LvcEntry entry;
};
struct VariantRecord : Located {
  std::string lemma;
  std::string canonical;
  bool polite = false;
  FrameSource source = FrameSource::Builtin;
};

struct RecordSet {
  std::map<std::string, FrameRecord> frames;
  std::map<std::string, LvcRecord> lvcs;
  std::map<std::string, VariantRecord> variants;
  Inventories inventories;
};

}  // namespace

// Parses record text and assembles a Lexicon, enforcing the cross-record
// invariants once everything is merged.
class LexiconLoader {
 public:
  LexiconLoader(std::string source_name) : source_name_(std::move(source_name)) {}

  void read(std::string_view text, FrameSource source) {
    RecordSet local;
    std::size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      if (trim(raw).empty() || trim(raw).front() == '#') continue;
      if (unicode::find_invalid_utf8(raw)) fail("invalid UTF-8", line_no);
      std::string normalized = unicode::to_nfc(raw);
      auto fields = split(normalized, '\t');
      std::string_view kind = fields[0];
      if (kind == "FRAME") {
        read_frame(fields, line_no, source, local);
      } else if (kind == "LVC") {
        read_lvc(fields, line_no, source, local);
      } else if (kind == "VARIANT") {
        read_variant(fields, line_no, source, local);
      } else if (kind == "ABSTRACT" || kind == "PRONOUN") {
        if (fields.size() != 2) fail(std::string(kind) + " record takes exactly one label", line_no);
        std::string label = checked_token(fields[1], "label", line_no);
        auto& set = kind == "ABSTRACT" ? local.inventories.abstract_concepts
                                       : local.inventories.pronouns;
        set.insert(std::move(label));
      } else {
        fail("unknown record type '" + std::string(kind) + "'", line_no);
      }
    }
    merge(std::move(local));
  }

  Lexicon finish() {
    Lexicon lex;
    for (auto& [lemma, rec] : records_.frames) lex.frames_.emplace(lemma, rec.frame);
    for (auto& [lemma, rec] : records_.lvcs) lex.lvcs_.emplace(lemma, rec.entry);
    lex.inventories_ = records_.inventories;
    if (lex.inventories_.abstract_concepts.empty()) fail("abstract-concept inventory is empty", 0);
    if (lex.inventories_.pronouns.empty()) fail("pronoun inventory is empty", 0);

    std::map<std::string, std::size_t> list_owner_line;
    auto add_redirect = [&](const std::string& lemma, const std::string& canonical,
                            VariantKind kind, std::size_t line) {
      if (lex.lvcs_.contains(lemma)) {
        fail("canonical lemma '" + lemma + "' also appears in a normalization list", line);
      }
      if (lemma == canonical) fail("lemma '" + lemma + "' normalizes to itself", line);
      auto [it, inserted] = lex.redirects_.emplace(lemma, Lexicon::Redirect{canonical, kind});
      if (!inserted) {
        fail("lemma '" + lemma + "' appears in more than one normalization list (first at line " +
                 std::to_string(list_owner_line[lemma]) + ")",
             line);
      }
      list_owner_line[lemma] = line;
    };

    for (auto& [canonical, rec] : records_.lvcs) {
      const LvcEntry& e = rec.entry;
      if (e.canonical != e.nv + "_" + e.lv) {
        fail("LVC canonical '" + e.canonical + "' is not nv_lv ('" + e.nv + "_" + e.lv + "')", rec.line);
      }
      if (!lex.frames_.contains(canonical)) fail("LVC '" + canonical + "' has no FRAME record", rec.line);
      for (auto& v : e.variant_lvs) add_redirect(v, canonical, VariantKind::LightVerb, rec.line);
      for (auto& v : e.simple_equivalents) add_redirect(v, canonical, VariantKind::SimpleEquivalent, rec.line);
      for (auto& v : e.formal_variants) add_redirect(v, canonical, VariantKind::Formal, rec.line);
    }
    for (auto& [lemma, rec] : records_.variants) {
      if (!lex.frames_.contains(rec.canonical)) {
        fail("VARIANT target '" + rec.canonical + "' has no FRAME record", rec.line);
      }
      add_redirect(lemma, rec.canonical, rec.polite ? VariantKind::Formal : VariantKind::Morphological,
                   rec.line);
    }
    for (auto& [from, redirect] : lex.redirects_) {
      if (lex.redirects_.contains(redirect.canonical)) {
        fail("normalization target '" + redirect.canonical + "' is itself a variant", list_owner_line[from]);
      }
    }

    for (auto& [canonical, e] : lex.lvcs_) {
      std::string nv_solid;
      for (char c : e.nv) {
        if (c != '_') nv_solid.push_back(c);
      }
      for (std::string spelling : {nv_solid + e.lv, e.nv + std::string(kZwnj) + e.lv}) {
        if (lex.frames_.contains(spelling) || lex.redirects_.contains(spelling)) continue;
        lex.spellings_.emplace(std::move(spelling), canonical);
      }
    }
    return lex;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t line) const {
    throw FormatError(message, line, source_name_);
  }

  std::string checked_token(std::string_view raw, std::string_view what, std::size_t line) const {
    std::string_view t = trim(raw);
    if (t.empty()) fail("empty " + std::string(what), line);
    for (char c : t) {
      if (c == ' ' || c == '\t') fail(std::string(what) + " '" + std::string(t) + "' contains whitespace", line);
    }
    return std::string(t);
  }

  std::vector<std::string> list_value(std::string_view value, std::size_t line) const {
    std::vector<std::string> out;
    for (auto part : split(value, ',')) {
      if (trim(part).empty()) continue;
      out.push_back(checked_token(part, "lemma", line));
    }
    return out;
  }

  bool flag_value(std::string_view key, std::string_view value, std::size_t line) const {
    value = trim(value);
    if (value.empty() || value == "0") return false;
    if (value == "1") return true;
    fail("field '" + std::string(key) + "' must be 0 or 1, got '" + std::string(value) + "'", line);
  }

  void read_frame(const std::vector<std::string_view>& fields, std::size_t line, FrameSource source,
                  RecordSet& local) {
    if (fields.size() < 3) fail("FRAME record needs a lemma and at least one ARGn=gloss field", line);
    FrameRecord rec;
    rec.line = line;
    rec.frame.lemma = checked_token(fields[1], "lemma", line);
    rec.frame.source = source;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      std::string_view field = trim(fields[i]);
      if (field.empty()) continue;
      auto eq = field.find('=');
      std::string_view key = field.substr(0, eq);
      int index = key.size() == 4 ? core_arg_index(key) : -1;
      if (eq == std::string_view::npos || index < 0 || index > 5) {
        fail("expected ARGn=gloss with n in 0..5, got '" + std::string(field) + "'", line);
      }
      if (rec.frame.args.contains(index)) fail("ARG" + std::to_string(index) + " defined twice", line);
      rec.frame.args.emplace(index, std::string(trim(field.substr(eq + 1))));
    }
    if (rec.frame.args.empty()) fail("FRAME '" + rec.frame.lemma + "' defines no arguments", line);
    std::string key = rec.frame.lemma;
    insert_local(local.frames, std::move(key), std::move(rec), "FRAME");
  }

  void read_lvc(const std::vector<std::string_view>& fields, std::size_t line, FrameSource source,
                RecordSet& local) {
    if (fields.size() < 4) fail("LVC record needs canonical, nv and lv fields", line);
    LvcRecord rec;
    rec.line = line;
    LvcEntry& e = rec.entry;
    e.canonical = checked_token(fields[1], "canonical lemma", line);
    e.nv = checked_token(fields[2], "nv", line);
    e.lv = checked_token(fields[3], "lv", line);
    e.source = source;
    std::set<std::string> seen;
    for (std::size_t i = 4; i < fields.size(); ++i) {
      std::string_view field = trim(fields[i]);
      if (field.empty()) continue;
      auto eq = field.find('=');
      if (eq == std::string_view::npos) fail("expected key=value, got '" + std::string(field) + "'", line);
      std::string key(trim(field.substr(0, eq)));
      std::string_view value = field.substr(eq + 1);
      if (!seen.insert(key).second) fail("field '" + key + "' given twice", line);
      if (key == "variants") {
        e.variant_lvs = list_value(value, line);
      } else if (key == "formal") {
        e.formal_variants = list_value(value, line);
      } else if (key == "simple") {
        e.simple_equivalents = list_value(value, line);
      } else if (key == "predicative") {
        e.nv_predicative = flag_value(key, value, line);
      } else if (key == "separable") {
        e.separable = flag_value(key, value, line);
      } else if (key == "heavy") {
        e.heavy_homograph = flag_value(key, value, line);
      } else {
        fail("unknown LVC field '" + key + "'", line);
      }
    }
    std::string key = e.canonical;
    insert_local(local.lvcs, std::move(key), std::move(rec), "LVC");
  }

  void read_variant(const std::vector<std::string_view>& fields, std::size_t line, FrameSource source,
                    RecordSet& local) {
    if (fields.size() < 3 || fields.size() > 4) fail("VARIANT record takes lemma, canonical[, polite=0|1]", line);
    VariantRecord rec;
    rec.line = line;
    rec.lemma = checked_token(fields[1], "lemma", line);
    rec.canonical = checked_token(fields[2], "canonical lemma", line);
    rec.source = source;
    if (fields.size() == 4) {
      std::string_view field = trim(fields[3]);
      if (!field.starts_with("polite=")) fail("expected polite=0|1, got '" + std::string(field) + "'", line);
      rec.polite = flag_value("polite", field.substr(7), line);
    }
    std::string key = rec.lemma;
    insert_local(local.variants, std::move(key), std::move(rec), "VARIANT");
  }

  template <typename Rec>
  void insert_local(std::map<std::string, Rec>& map, std::string key, Rec rec, std::string_view kind) {
    auto it = map.find(key);
    if (it != map.end()) {
      fail("duplicate " + std::string(kind) + " lemma '" + key + "' (first defined at line " +
               std::to_string(it->second.line) + ")",
           rec.line);
    }
    map.emplace(std::move(key), std::move(rec));
  }

  // Records from a later read replace same-keyed records from earlier reads.
  void merge(RecordSet local) {
    for (auto& [k, v] : local.frames) records_.frames.insert_or_assign(k, std::move(v));
    for (auto& [k, v] : local.lvcs) records_.lvcs.insert_or_assign(k, std::move(v));
    for (auto& [k, v] : local.variants) records_.variants.insert_or_assign(k, std::move(v));
    records_.inventories.abstract_concepts.merge(local.inventories.abstract_concepts);
    records_.inventories.pronouns.merge(local.inventories.pronouns);
  }

  std::string source_name_;
  RecordSet records_;
};

const VerbFrame* Lexicon::lookup_frame(std::string_view lemma) const {
  std::string key = nfc_or_empty(lemma);
  if (auto it = frames_.find(key); it != frames_.end()) return &it->second;
  if (auto sp = spellings_.find(key); sp != spellings_.end()) {
    if (auto it = frames_.find(sp->second); it != frames_.end()) return &it->second;
  }
  return nullptr;
}

VerbNormalization Lexicon::normalize_verb(std::string_view lemma) const {
  std::string key = nfc_or_empty(lemma);
  auto it = redirects_.find(key);
  if (it == redirects_.end()) return {std::string(lemma), false, false};
  return {it->second.canonical, it->second.kind == VariantKind::Formal, true};
}

VariantKind Lexicon::variant_kind(std::string_view lemma) const {
  auto it = redirects_.find(nfc_or_empty(lemma));
  return it == redirects_.end() ? VariantKind::None : it->second.kind;
}

const LvcEntry* Lexicon::lvc_for(std::string_view lemma) const {
  std::string key = nfc_or_empty(lemma);
  if (auto r = redirects_.find(key); r != redirects_.end()) key = r->second.canonical;
  if (auto sp = spellings_.find(key); sp != spellings_.end()) key = sp->second;
  auto it = lvcs_.find(key);
  return it == lvcs_.end() ? nullptr : &it->second;
}

std::vector<const LvcEntry*> Lexicon::lvcs_with_nv(std::string_view nv) const {
  std::string key = nfc_or_empty(nv);
  std::vector<const LvcEntry*> out;
  for (auto& [canonical, e] : lvcs_) {
    if (e.nv == key) out.push_back(&e);
  }
  return out;
}

ConceptKind Lexicon::concept_kind(std::string_view label) const {
  return inventories_.abstract_concepts.contains(nfc_or_empty(label)) ? ConceptKind::Abstract
                                                                       : ConceptKind::Lexical;
}

bool Lexicon::is_pronoun(std::string_view label) const {
  return inventories_.pronouns.contains(nfc_or_empty(label));
}

const Lexicon& builtin_lexicon() {
  static const Lexicon lex = [] {
    LexiconLoader loader("<builtin>");
    loader.read(kBuiltinLexiconText, FrameSource::Builtin);
    return loader.finish();
  }();
  return lex;
}

Lexicon load_lexicon_text(std::string_view text, std::string_view source_name, bool include_builtins) {
  LexiconLoader loader{std::string(source_name)};
  if (include_builtins) loader.read(kBuiltinLexiconText, FrameSource::Builtin);
  loader.read(text, FrameSource::File);
  return loader.finish();
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading lexicon file: " + path.string());
  return load_lexicon_text(buf.str(), path.string(), true);
}

}  // namespace pamr
