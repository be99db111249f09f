#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pamr {

enum class FrameSource { Builtin, File };

// Valency frame keyed by infinitive lemma. LVC lemmas are underscore-joined
// (`latme_zadan`).
struct VerbFrame {
  std::string lemma;
  std::map<int, std::string> args;  // core-role index 0..5 -> gloss
  FrameSource source = FrameSource::Builtin;

  bool defines(int index) const { return args.contains(index); }
};

struct LvcEntry {
  std::string canonical;  // nv + "_" + lv
  std::string nv;
  std::string lv;
  std::vector<std::string> variant_lvs;        // other light verbs, same event
  std::vector<std::string> formal_variants;    // normalize here and add :polite +
  std::vector<std::string> simple_equivalents; // simple verbs replaced by this LVC
  bool nv_predicative = false;
  bool separable = false;
  // The bare light verb with this NV as an argument is also a legitimate
  // heavy reading (dast keshidan "rub one's hand" vs. "give up").
  bool heavy_homograph = false;
  FrameSource source = FrameSource::Builtin;
};

struct Inventories {
  std::set<std::string> abstract_concepts;
  std::set<std::string> pronouns;
};

enum class ConceptKind { Lexical, Abstract };

struct VerbNormalization {
  std::string lemma;
  bool polite = false;
  bool changed = false;

  friend bool operator==(const VerbNormalization&, const VerbNormalization&) = default;
};

// How a lemma reached its canonical form; see Lexicon::variant_kind.
enum class VariantKind { None, LightVerb, SimpleEquivalent, Formal, Morphological };

// Read-only after construction; safe to share across threads.
class Lexicon {
 public:
  /// Exact lookup on the NFC form. Solid or ZWNJ-joined spellings of a
  /// registered LVC (`talâshkardan`) resolve to the underscore form.
  const VerbFrame* lookup_frame(std::string_view lemma) const;

  VerbNormalization normalize_verb(std::string_view lemma) const;
  VariantKind variant_kind(std::string_view lemma) const;

  /// LVC entry whose canonical lemma, or any normalization list, contains `lemma`.
  const LvcEntry* lvc_for(std::string_view lemma) const;
  /// Entries whose NV is `nv`.
  std::vector<const LvcEntry*> lvcs_with_nv(std::string_view nv) const;

  ConceptKind concept_kind(std::string_view label) const;
  bool is_pronoun(std::string_view label) const;
  const Inventories& inventories() const { return inventories_; }

  const std::map<std::string, VerbFrame>& frames() const { return frames_; }
  const std::map<std::string, LvcEntry>& lvcs() const { return lvcs_; }

 private:
  friend class LexiconLoader;

  struct Redirect {
    std::string canonical;
    VariantKind kind;
  };

  std::map<std::string, VerbFrame> frames_;
  std::map<std::string, LvcEntry> lvcs_;
  std::unordered_map<std::string, Redirect> redirects_;      // variant lemma -> canonical
  std::unordered_map<std::string, std::string> spellings_;   // solid spelling -> canonical
  Inventories inventories_;
};

/// The builtin lexicon: every verb appearing in the PAMR guideline examples.
const Lexicon& builtin_lexicon();

/// Builtins merged with the file's records. A file record replaces a builtin
/// record for the same lemma; repeating a lemma within the file is an error.
/// Throws IoError or FormatError (with line number).
Lexicon load_lexicon(const std::filesystem::path& path);

/// As load_lexicon, reading records from memory. `source_name` prefixes errors.
Lexicon load_lexicon_text(std::string_view text, std::string_view source_name = "<memory>",
                          bool include_builtins = true);

}  // namespace pamr
