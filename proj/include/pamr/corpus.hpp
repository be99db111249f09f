#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pamr/graph.hpp"
#include "pamr/smatch.hpp"

namespace pamr {

struct AnnotatedSentence {
  std::string id;
  std::string snt;
  std::optional<std::string> annotator;
  // Every other `# ::key value` pair, in file order.
  std::vector<std::pair<std::string, std::string>> extra;
  Graph graph;
  std::size_t line = 0;  // 1-based line where the record starts

  /// Value of an `extra` key, or nullopt.
  std::optional<std::string> meta(std::string_view key) const;
  /// Variables listed in `# ::clitic`, whitespace-separated.
  std::vector<std::string> clitic_variables() const;
};

struct LoadOptions {
  bool require_id = true;
  // When false, graphs failing check_wellformed are kept so callers can
  // report the structural diagnostics themselves.
  bool require_wellformed = true;
};

/// Parses corpus text. Records are separated by blank lines; `# ::key value`
/// lines carry metadata (several `::key` fields may share a line, except that
/// `::snt` and `::tok` run to the end of the line); other `#` lines are
/// comments. Throws FormatError naming the record ordinal and line.
std::vector<AnnotatedSentence> parse_corpus_text(std::string_view text, const LoadOptions& opts = {});

/// Reads and parses a corpus file. Throws IoError or FormatError.
std::vector<AnnotatedSentence> load_corpus(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Corpus text that parse_corpus_text reads back to the same ids, metadata
/// and triples. Records end with a newline and are separated by a blank line.
std::string write_corpus(const std::vector<AnnotatedSentence>& corpus);

struct CorpusStats {
  std::size_t sentence_count = 0;
  std::map<std::string, std::size_t> concepts;
  std::map<std::string, std::size_t> roles;  // forward-normalized, edges and attributes
  // Variable re-uses: written edges into variables that were already introduced,
  // i.e. edge count minus (variable count - 1) per graph.
  std::size_t reentrancy_count = 0;
  std::size_t triple_count = 0;  // without TOP
  double mean_triples = 0.0;
  double median_triples = 0.0;
  std::size_t lvc_concept_count = 0;  // concept tokens containing '_'
};

/// Throws ContractError for an empty corpus.
CorpusStats stats(const std::vector<AnnotatedSentence>& corpus);

struct AnnotatorPair {
  std::string first;   // scored as candidate
  std::string second;  // scored as reference
  ScoreReport score;   // micro over shared ids; mapping empty
};

struct IaaReport {
  std::vector<std::string> annotators;  // sorted
  std::vector<std::string> shared_ids;  // in the first annotator's file order
  std::vector<AnnotatorPair> pairwise;  // all unordered pairs, lexicographic
  double average_f1 = 0.0;
  MatchMode mode = MatchMode::Labeled;
};

/// Pairwise micro Smatch over the ids every annotator shares, averaged over
/// annotator pairs. Throws ContractError for fewer than two annotators or an
/// empty shared-id set.
IaaReport iaa(const std::map<std::string, std::vector<AnnotatedSentence>>& corpora,
              const SmatchConfig& cfg = {});

}  // namespace pamr
