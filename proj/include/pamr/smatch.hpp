#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pamr/graph.hpp"

namespace pamr {

enum class MatchMode { Labeled, Unlabeled };

std::string_view match_mode_name(MatchMode mode);

struct SmatchConfig {
  int restarts = 8;
  std::uint64_t seed = 0;
  bool include_top = true;
  MatchMode mode = MatchMode::Labeled;
  // Exhaustive search is used when both graphs have at most this many variables.
  std::size_t exact_threshold = 6;
};

// Partial injective map from variables of A (candidate) to variables of B
// (reference), listed in A's preorder.
using Mapping = std::vector<std::pair<std::string, std::string>>;

struct ScoreReport {
  std::size_t matched = 0;
  std::size_t total_a = 0;
  std::size_t total_b = 0;
  double precision = 0.0;  // matched / total_a
  double recall = 0.0;     // matched / total_b
  double f1 = 0.0;
  Mapping mapping;
  MatchMode mode = MatchMode::Labeled;
  bool exact = false;  // true when produced by exhaustive search
};

ScoreReport make_score_report(std::size_t matched, std::size_t total_a, std::size_t total_b,
                              MatchMode mode);

/// Hard cap on variable count for score_exact.
inline constexpr std::size_t kExactSearchCap = 8;

/// Smatch between candidate `a` and reference `b`.
///
/// Restart 0 is seeded greedily from per-variable match counts (concepts,
/// attributes, TOP); later restarts start from seeded uniformly random
/// injections. Each restart hill-climbs with reassign and swap moves, taking
/// the largest gain (ties to the lowest A index) until no move improves.
/// Small graphs (<= cfg.exact_threshold variables) go through score_exact.
ScoreReport score_pair(const Graph& a, const Graph& b, const SmatchConfig& cfg = {});

/// Exhaustive maximum over all injective mappings. Throws ContractError when
/// either graph has more than kExactSearchCap variables.
ScoreReport score_exact(const Graph& a, const Graph& b, const SmatchConfig& cfg = {});

struct CorpusScore {
  ScoreReport micro;  // sums of matched/total before P/R/F1; mapping is empty
  std::vector<ScoreReport> pairs;
};

/// Micro-averaged Smatch over (candidate, reference) pairs. Pairs are scored
/// concurrently; results do not depend on scheduling.
CorpusScore score_corpus(const std::vector<std::pair<Graph, Graph>>& pairs,
                         const SmatchConfig& cfg = {});

}  // namespace pamr
