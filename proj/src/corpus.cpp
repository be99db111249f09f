#include "pamr/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "pamr/error.hpp"
#include "pamr/penman.hpp"

namespace pamr {

namespace {

struct Line {
  std::string_view text;
  std::size_t number;
};

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view comment_body(std::string_view line) {
  line = trim(line);
  return line.starts_with('#') ? line.substr(1) : std::string_view{};
}

bool is_comment(std::string_view line) { return trim(line).starts_with('#'); }

bool is_metadata(std::string_view line) {
  std::string_view t = trim(line);
  return t.starts_with('#') && trim(t.substr(1)).starts_with("::");
}

bool runs_to_end_of_line(std::string_view key) { return key == "snt" || key == "tok"; }

// `# ::id a1 ::annotator ann1` -> {{"id","a1"},{"annotator","ann1"}}.
std::vector<std::pair<std::string, std::string>> split_metadata(std::string_view line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string_view rest = trim(comment_body(line));
  while (rest.starts_with("::")) {
    rest.remove_prefix(2);
    auto key_end = rest.find_first_of(" \t");
    std::string key(rest.substr(0, key_end));
    rest = key_end == std::string_view::npos ? std::string_view{} : rest.substr(key_end);
    std::size_t value_end = std::string_view::npos;
    if (!runs_to_end_of_line(key)) {
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if ((rest[i] == ' ' || rest[i] == '\t') && rest.substr(i + 1).starts_with("::")) {
          value_end = i;
          break;
        }
      }
    }
    out.emplace_back(std::move(key), std::string(trim(rest.substr(0, value_end))));
    rest = value_end == std::string_view::npos ? std::string_view{} : trim(rest.substr(value_end));
  }
  return out;
}

std::string record_label(std::size_t ordinal, const std::string& id) {
  std::string label = "record " + std::to_string(ordinal);
  if (!id.empty()) label += " (id " + id + ")";
  return label;
}

AnnotatedSentence parse_record(const std::vector<Line>& block, std::size_t ordinal, const LoadOptions& opts) {
  AnnotatedSentence rec;
  rec.line = block.front().number;

  std::size_t last_meta = block.size();
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (is_metadata(block[i].text)) last_meta = i;
  }
  std::size_t body_start = last_meta == block.size() ? 0 : last_meta + 1;

  bool have_id = false;
  for (std::size_t i = 0; i < body_start; ++i) {
    const Line& line = block[i];
    if (!is_comment(line.text)) {
      throw FormatError(record_label(ordinal, rec.id) + ": graph text before metadata", line.number);
    }
    if (!is_metadata(line.text)) continue;
    for (auto& [key, value] : split_metadata(line.text)) {
      if (key.empty()) throw FormatError(record_label(ordinal, rec.id) + ": empty metadata key", line.number);
      if (key == "id") {
        if (have_id) throw FormatError(record_label(ordinal, rec.id) + ": ::id given twice", line.number);
        if (value.empty()) throw FormatError(record_label(ordinal, rec.id) + ": empty ::id", line.number);
        rec.id = std::move(value);
        have_id = true;
      } else if (key == "snt") {
        rec.snt = std::move(value);
      } else if (key == "annotator") {
        rec.annotator = std::move(value);
      } else {
        rec.extra.emplace_back(std::move(key), std::move(value));
      }
    }
  }
  if (!have_id && opts.require_id) {
    throw FormatError(record_label(ordinal, rec.id) + ": missing ::id", rec.line);
  }

  std::string body;
  for (std::size_t i = body_start; i < block.size(); ++i) {
    body.append(block[i].text);
    body.push_back('\n');
  }
  const std::size_t body_line = block[body_start].number;
  auto parsed = parse_penman(body);
  if (auto* diag = std::get_if<ParseDiagnostic>(&parsed)) {
    throw FormatError(record_label(ordinal, rec.id) + ": " + std::string(parse_error_kind_name(diag->kind)) +
                          ": " + diag->message,
                      body_line + diag->span.line - 1);
  }
  rec.graph = std::get<Graph>(std::move(parsed));
  if (opts.require_wellformed) {
    auto problems = check_wellformed(rec.graph);
    if (!problems.empty()) {
      const auto& d = problems.front();
      throw FormatError(record_label(ordinal, rec.id) + ": " + std::string(rule_code(d.rule)) + " at " +
                            d.variable + ": " + d.message,
                        body_line);
    }
  }
  return rec;
}

double median(std::vector<std::size_t> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return static_cast<double>(values[n / 2]);
  return (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

}  // namespace

std::optional<std::string> AnnotatedSentence::meta(std::string_view key) const {
  for (const auto& [k, v] : extra) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::vector<std::string> AnnotatedSentence::clitic_variables() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : extra) {
    if (k != "clitic") continue;
    std::istringstream in(v);
    for (std::string var; in >> var;) out.push_back(var);
  }
  return out;
}

std::vector<AnnotatedSentence> parse_corpus_text(std::string_view text, const LoadOptions& opts) {
  std::vector<std::vector<Line>> blocks;
  std::vector<Line> current;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    if (is_blank(line)) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back({line, number});
    }
    pos = end + 1;
  }
  if (!current.empty()) blocks.push_back(std::move(current));

  std::vector<AnnotatedSentence> corpus;
  std::unordered_map<std::string, std::size_t> seen_ids;
  std::size_t ordinal = 0;
  for (const auto& block : blocks) {
    bool has_graph = std::any_of(block.begin(), block.end(),
                                 [](const Line& l) { return !is_comment(l.text); });
    bool has_meta = std::any_of(block.begin(), block.end(), [](const Line& l) { return is_metadata(l.text); });
    if (!has_graph) {
      if (has_meta) {
        throw FormatError(record_label(ordinal + 1, "") + ": metadata without a graph", block.front().number);
      }
      continue;  // comment-only block
    }
    ++ordinal;
    AnnotatedSentence rec = parse_record(block, ordinal, opts);
    if (!rec.id.empty()) {
      auto [it, inserted] = seen_ids.emplace(rec.id, ordinal);
      if (!inserted) {
        throw FormatError(record_label(ordinal, rec.id) + ": duplicate id (first used by record " +
                              std::to_string(it->second) + ")",
                          rec.line);
      }
    }
    corpus.push_back(std::move(rec));
  }
  return corpus;
}

std::vector<AnnotatedSentence> load_corpus(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading corpus file: " + path.string());
  try {
    return parse_corpus_text(buf.str(), opts);
  } catch (const FormatError& e) {
    throw FormatError(e.detail(), e.line(), path.string());
  }
}

std::string write_corpus(const std::vector<AnnotatedSentence>& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& rec = corpus[i];
    if (i > 0) out += "\n";
    if (!rec.id.empty()) out += "# ::id " + rec.id + "\n";
    if (!rec.snt.empty()) out += "# ::snt " + rec.snt + "\n";
    if (rec.annotator) out += "# ::annotator " + *rec.annotator + "\n";
    for (const auto& [k, v] : rec.extra) out += "# ::" + k + (v.empty() ? "" : " " + v) + "\n";
    out += serialize_penman(rec.graph);
    out += "\n";
  }
  return out;
}

CorpusStats stats(const std::vector<AnnotatedSentence>& corpus) {
  if (corpus.empty()) throw ContractError("stats: empty corpus");
  CorpusStats s;
  s.sentence_count = corpus.size();
  std::vector<std::size_t> per_graph;
  per_graph.reserve(corpus.size());
  for (const auto& rec : corpus) {
    const Graph& g = rec.graph;
    for (const auto& inst : g.instances()) {
      ++s.concepts[inst.label];
      if (inst.label.find('_') != std::string::npos) ++s.lvc_concept_count;
    }
    for (const auto& e : g.normalized_edges()) ++s.roles[e.role];
    for (const auto& a : g.attributes()) ++s.roles[a.role];
    const std::size_t edges = g.edge_count();
    const std::size_t tree_edges = g.variable_count() == 0 ? 0 : g.variable_count() - 1;
    if (edges > tree_edges) s.reentrancy_count += edges - tree_edges;
    const std::size_t n = g.variable_count() + edges + g.attribute_count();
    per_graph.push_back(n);
    s.triple_count += n;
  }
  s.mean_triples = static_cast<double>(s.triple_count) / static_cast<double>(corpus.size());
  s.median_triples = median(std::move(per_graph));
  return s;
}

IaaReport iaa(const std::map<std::string, std::vector<AnnotatedSentence>>& corpora, const SmatchConfig& cfg) {
  if (corpora.size() < 2) throw ContractError("iaa: need at least two annotators");
  IaaReport report;
  report.mode = cfg.mode;

  std::vector<std::unordered_map<std::string, const Graph*>> by_id;
  for (const auto& [name, corpus] : corpora) {
    report.annotators.push_back(name);
    auto& index = by_id.emplace_back();
    for (const auto& rec : corpus) index.emplace(rec.id, &rec.graph);
  }
  std::unordered_set<std::string> taken;
  for (const auto& rec : corpora.begin()->second) {
    if (rec.id.empty() || !taken.insert(rec.id).second) continue;
    bool everywhere = std::all_of(by_id.begin() + 1, by_id.end(),
                                  [&](const auto& index) { return index.contains(rec.id); });
    if (everywhere) report.shared_ids.push_back(rec.id);
  }
  if (report.shared_ids.empty()) throw ContractError("iaa: annotators share no sentence ids");

  double sum = 0.0;
  for (std::size_t i = 0; i < by_id.size(); ++i) {
    for (std::size_t j = i + 1; j < by_id.size(); ++j) {
      std::vector<std::pair<Graph, Graph>> pairs;
      pairs.reserve(report.shared_ids.size());
      for (const auto& id : report.shared_ids) pairs.emplace_back(*by_id[i].at(id), *by_id[j].at(id));
      CorpusScore scored = score_corpus(pairs, cfg);
      sum += scored.micro.f1;
      report.pairwise.push_back({report.annotators[i], report.annotators[j], std::move(scored.micro)});
    }
  }
  report.average_f1 = sum / static_cast<double>(report.pairwise.size());
  return report;
}

}  // namespace pamr
