#include "pamr/smatch.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <random>
#include <thread>
#include <unordered_map>

#include "pamr/error.hpp"
#include "pamr/unicode.hpp"

namespace pamr {

std::string_view match_mode_name(MatchMode mode) {
  return mode == MatchMode::Labeled ? "labeled" : "unlabeled";
}

ScoreReport make_score_report(std::size_t matched, std::size_t total_a, std::size_t total_b,
                              MatchMode mode) {
  ScoreReport report;
  report.matched = matched;
  report.total_a = total_a;
  report.total_b = total_b;
  report.mode = mode;
  report.precision = total_a == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total_a);
  report.recall = total_b == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total_b);
  // 2PR/(P+R) reduces to 2m/(|A|+|B|), which avoids an extra rounding step.
  report.f1 = (matched == 0 || total_a + total_b == 0)
                  ? 0.0
                  : 2.0 * static_cast<double>(matched) / static_cast<double>(total_a + total_b);
  return report;
}

namespace {

constexpr int kUnmapped = -1;
constexpr char kSep = '\x1f';

using KeyCounts = std::map<std::string, int>;

int overlap(const KeyCounts& a, const KeyCounts& b) {
  int total = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      total += std::min(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return total;
}

int sum_counts(const KeyCounts& counts) {
  int total = 0;
  for (const auto& [key, n] : counts) total += n;
  return total;
}

// Triples of one graph grouped by the variables they mention: single-variable
// triples (TOP, instance, attribute) per variable, relation triples per
// ordered variable pair.
struct GroupedTriples {
  std::vector<std::string> vars;  // preorder
  std::vector<KeyCounts> unary;
  std::map<std::pair<int, int>, KeyCounts> binary;
  std::size_t total = 0;
};

GroupedTriples group_triples(const Graph& g, const SmatchConfig& cfg) {
  GroupedTriples out;
  out.vars = preorder(g);
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < out.vars.size(); ++i) index[out.vars[i]] = static_cast<int>(i);
  out.unary.resize(out.vars.size());

  const bool labeled = cfg.mode == MatchMode::Labeled;
  for (const auto& t : triples(g, cfg.include_top)) {
    const int s = index.at(t.source);
    switch (t.kind) {
      case TripleKind::Top:
        ++out.unary[s][std::string("T") + kSep + unicode::ascii_lower(t.target)];
        break;
      case TripleKind::Instance:
        ++out.unary[s][std::string("I") + kSep + unicode::ascii_lower(t.target)];
        break;
      case TripleKind::Attribute: {
        const std::string role = labeled ? unicode::ascii_lower(t.role) : std::string();
        ++out.unary[s][std::string("A") + kSep + role + kSep + unicode::ascii_lower(t.target)];
        break;
      }
      case TripleKind::Relation: {
        const int target = index.at(t.target);
        ++out.binary[{s, target}][labeled ? unicode::ascii_lower(t.role) : std::string()];
        break;
      }
    }
    ++out.total;
  }
  return out;
}

class MatchProblem {
 public:
  MatchProblem(const Graph& a, const Graph& b, const SmatchConfig& cfg)
      : a_(group_triples(a, cfg)), b_(group_triples(b, cfg)) {
    n_ = a_.vars.size();
    m_ = b_.vars.size();
    unary_.assign(n_, std::vector<int>(m_, 0));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) unary_[i][j] = overlap(a_.unary[i], b_.unary[j]);
    }
    const bool labeled = cfg.mode == MatchMode::Labeled;
    incident_.resize(n_);
    for (const auto& [vars_a, roles_a] : a_.binary) {
      PairTerm term{vars_a.first, vars_a.second, {}};
      const bool loop_a = vars_a.first == vars_a.second;
      for (const auto& [vars_b, roles_b] : b_.binary) {
        if (loop_a != (vars_b.first == vars_b.second)) continue;
        const int w = labeled ? overlap(roles_a, roles_b)
                              : std::min(sum_counts(roles_a), sum_counts(roles_b));
        if (w > 0) term.weights[key(vars_b.first, vars_b.second)] = w;
      }
      const auto index = pairs_.size();
      incident_[static_cast<std::size_t>(term.first)].push_back(index);
      if (term.second != term.first) incident_[static_cast<std::size_t>(term.second)].push_back(index);
      pairs_.push_back(std::move(term));
    }
    stamp_.assign(pairs_.size(), 0);
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t total_a() const { return a_.total; }
  std::size_t total_b() const { return b_.total; }
  std::size_t best_possible() const { return std::min(a_.total, b_.total); }

  int score(const std::vector<int>& map) const {
    int total = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (map[i] != kUnmapped) total += unary_[i][static_cast<std::size_t>(map[i])];
    }
    for (const auto& term : pairs_) total += pair_weight(term, map);
    return total;
  }

  // Score change from setting map[i] = j (j currently unused).
  int reassign_gain(std::vector<int>& map, std::size_t i, int j) {
    const int old = map[i];
    const int before = local_score(map, i, i);
    map[i] = j;
    const int after = local_score(map, i, i);
    map[i] = old;
    return after - before;
  }

  int swap_gain(std::vector<int>& map, std::size_t i1, std::size_t i2) {
    const int before = local_score(map, i1, i2);
    std::swap(map[i1], map[i2]);
    const int after = local_score(map, i1, i2);
    std::swap(map[i1], map[i2]);
    return after - before;
  }

  // Greedy seed: each A variable, in order, takes the unused B variable with
  // the most single-variable matches (concept, attributes, TOP).
  std::vector<int> greedy_seed() const {
    std::vector<int> map(n_, kUnmapped);
    std::vector<bool> used(m_, false);
    for (std::size_t i = 0; i < n_; ++i) {
      int best = 0;
      int best_j = kUnmapped;
      for (std::size_t j = 0; j < m_; ++j) {
        if (!used[j] && unary_[i][j] > best) {
          best = unary_[i][j];
          best_j = static_cast<int>(j);
        }
      }
      if (best_j != kUnmapped) {
        map[i] = best_j;
        used[static_cast<std::size_t>(best_j)] = true;
      }
    }
    return map;
  }

  Mapping to_mapping(const std::vector<int>& map) const {
    Mapping out;
    for (std::size_t i = 0; i < n_; ++i) {
      if (map[i] != kUnmapped) out.emplace_back(a_.vars[i], b_.vars[static_cast<std::size_t>(map[i])]);
    }
    return out;
  }

 private:
  struct PairTerm {
    int first;
    int second;
    std::unordered_map<std::uint64_t, int> weights;  // keyed by B pair
  };

  std::uint64_t key(int j, int l) const {
    return static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(m_) +
           static_cast<std::uint64_t>(l);
  }

  int pair_weight(const PairTerm& term, const std::vector<int>& map) const {
    const int j = map[static_cast<std::size_t>(term.first)];
    const int l = map[static_cast<std::size_t>(term.second)];
    if (j == kUnmapped || l == kUnmapped) return 0;
    auto it = term.weights.find(key(j, l));
    return it == term.weights.end() ? 0 : it->second;
  }

  // Contribution of all triples touching variable i1 or i2.
  int local_score(const std::vector<int>& map, std::size_t i1, std::size_t i2) {
    int total = 0;
    if (map[i1] != kUnmapped) total += unary_[i1][static_cast<std::size_t>(map[i1])];
    if (i2 != i1 && map[i2] != kUnmapped) total += unary_[i2][static_cast<std::size_t>(map[i2])];
    ++current_stamp_;
    for (std::size_t v : {i1, i2}) {
      for (auto p : incident_[v]) {
        if (stamp_[p] == current_stamp_) continue;
        stamp_[p] = current_stamp_;
        total += pair_weight(pairs_[p], map);
      }
    }
    return total;
  }

  GroupedTriples a_;
  GroupedTriples b_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<int>> unary_;
  std::vector<PairTerm> pairs_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t current_stamp_ = 0;
};

void require_wellformed(const Graph& g, const char* which) {
  const auto problems = check_wellformed(g);
  if (!problems.empty()) {
    throw ContractError(std::string("smatch: graph ") + which +
                        " is not wellformed: " + problems.front().message);
  }
}

// Unbiased draw in [0, bound) from the raw 64-bit engine output, so results
// do not depend on the standard library's distribution implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

std::vector<int> random_injection(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::vector<int> pool;
  pool.reserve(std::max(n, m));
  for (std::size_t j = 0; j < m; ++j) pool.push_back(static_cast<int>(j));
  while (pool.size() < n) pool.push_back(kUnmapped);
  for (std::size_t i = pool.size(); i > 1; --i) {
    const auto r = static_cast<std::size_t>(draw_below(rng, i));
    std::swap(pool[i - 1], pool[r]);
  }
  pool.resize(n);
  return pool;
}

int hill_climb(MatchProblem& problem, std::vector<int>& map) {
  const std::size_t n = problem.n();
  const std::size_t m = problem.m();
  std::vector<bool> used(m, false);
  for (int j : map) {
    if (j != kUnmapped) used[static_cast<std::size_t>(j)] = true;
  }
  int current = problem.score(map);
  for (;;) {
    int best_gain = 0;
    enum class Move { None, Reassign, Swap } best_move = Move::None;
    std::size_t best_i = 0;
    std::size_t best_other = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (used[j]) continue;
        const int gain = problem.reassign_gain(map, i, static_cast<int>(j));
        if (gain > best_gain) {
          best_gain = gain;
          best_move = Move::Reassign;
          best_i = i;
          best_other = j;
        }
      }
      for (std::size_t i2 = i + 1; i2 < n; ++i2) {
        if (map[i] == map[i2]) continue;  // both unmapped
        const int gain = problem.swap_gain(map, i, i2);
        if (gain > best_gain) {
          best_gain = gain;
          best_move = Move::Swap;
          best_i = i;
          best_other = i2;
        }
      }
    }
    if (best_move == Move::None) return current;
    if (best_move == Move::Reassign) {
      if (map[best_i] != kUnmapped) used[static_cast<std::size_t>(map[best_i])] = false;
      map[best_i] = static_cast<int>(best_other);
      used[best_other] = true;
    } else {
      std::swap(map[best_i], map[best_other]);
    }
    current += best_gain;
  }
}

ScoreReport exhaustive(MatchProblem& problem, MatchMode mode) {
  const std::size_t n = problem.n();
  const std::size_t m = problem.m();
  std::vector<int> map(n, kUnmapped);
  std::vector<int> best_map = map;
  int best = -1;
  std::vector<bool> used(m, false);
  // Only maximal injections are enumerated: weights are nonnegative, so any
  // partial mapping is dominated by one of its extensions.
  const std::size_t skips_allowed = n > m ? n - m : 0;

  auto recurse = [&](auto&& self, std::size_t i, std::size_t skips) -> void {
    if (i == n) {
      const int s = problem.score(map);
      if (s > best) {
        best = s;
        best_map = map;
      }
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      map[i] = static_cast<int>(j);
      self(self, i + 1, skips);
      used[j] = false;
    }
    if (skips < skips_allowed) {
      map[i] = kUnmapped;
      self(self, i + 1, skips + 1);
    }
  };
  recurse(recurse, 0, 0);

  ScoreReport report = make_score_report(static_cast<std::size_t>(std::max(best, 0)),
                                         problem.total_a(), problem.total_b(), mode);
  report.mapping = problem.to_mapping(best_map);
  report.exact = true;
  return report;
}

}  // namespace

ScoreReport score_exact(const Graph& a, const Graph& b, const SmatchConfig& cfg) {
  require_wellformed(a, "A");
  require_wellformed(b, "B");
  const std::size_t largest = std::max(a.variable_count(), b.variable_count());
  if (largest > kExactSearchCap) {
    throw ContractError("score_exact: " + std::to_string(largest) +
                        " variables exceeds the exhaustive-search cap of " +
                        std::to_string(kExactSearchCap));
  }
  MatchProblem problem(a, b, cfg);
  return exhaustive(problem, cfg.mode);
}

ScoreReport score_pair(const Graph& a, const Graph& b, const SmatchConfig& cfg) {
  if (cfg.restarts < 1) throw ContractError("smatch: restarts must be >= 1");
  require_wellformed(a, "A");
  require_wellformed(b, "B");
  const std::size_t largest = std::max(a.variable_count(), b.variable_count());
  if (largest <= std::min(cfg.exact_threshold, kExactSearchCap)) {
    MatchProblem problem(a, b, cfg);
    return exhaustive(problem, cfg.mode);
  }

  MatchProblem problem(a, b, cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<int> best_map;
  int best = -1;
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<int> map =
        restart == 0 ? problem.greedy_seed() : random_injection(problem.n(), problem.m(), rng);
    const int s = hill_climb(problem, map);
    if (s > best) {
      best = s;
      best_map = std::move(map);
    }
    if (static_cast<std::size_t>(best) == problem.best_possible()) break;
  }
  ScoreReport report = make_score_report(static_cast<std::size_t>(best), problem.total_a(),
                                         problem.total_b(), cfg.mode);
  report.mapping = problem.to_mapping(best_map);
  return report;
}

CorpusScore score_corpus(const std::vector<std::pair<Graph, Graph>>& pairs,
                         const SmatchConfig& cfg) {
  if (pairs.empty()) throw ContractError("score_corpus: no graph pairs to score");
  for (const auto& [a, b] : pairs) {
    require_wellformed(a, "A");
    require_wellformed(b, "B");
  }

  CorpusScore result;
  result.pairs.resize(pairs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pairs.size() || failed.load()) return;
      try {
        result.pairs[i] = score_pair(pairs[i].first, pairs[i].second, cfg);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(pairs.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t matched = 0, total_a = 0, total_b = 0;
  for (const auto& r : result.pairs) {
    matched += r.matched;
    total_a += r.total_a;
    total_b += r.total_b;
  }
  result.micro = make_score_report(matched, total_a, total_b, cfg.mode);
  result.micro.exact = std::all_of(result.pairs.begin(), result.pairs.end(),
                                   [](const ScoreReport& r) { return r.exact; });
  return result;
}

}  // namespace pamr
