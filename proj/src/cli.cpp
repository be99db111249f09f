#include "pamr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "pamr/corpus.hpp"
#include "pamr/error.hpp"
#include "pamr/lexicon.hpp"
#include "pamr/penman.hpp"
#include "pamr/smatch.hpp"
#include "pamr/validator.hpp"

namespace pamr::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path);
  buf << file.rdbuf();
  if (file.bad()) throw IoError("error reading " + path);
  return buf.str();
}

std::vector<AnnotatedSentence> read_corpus(const std::string& path, std::istream& in, const LoadOptions& opts) {
  std::string text = read_input(path, in);
  try {
    return parse_corpus_text(text, opts);
  } catch (const FormatError& e) {
    throw FormatError(e.detail(), e.line(), path == "-" ? "<stdin>" : path);
  }
}

std::string display_id(const AnnotatedSentence& rec, std::size_t ordinal) {
  return rec.id.empty() ? "#" + std::to_string(ordinal) : rec.id;
}

std::string_view triple_kind_name(TripleKind kind) {
  switch (kind) {
    case TripleKind::Top:
      return "top";
    case TripleKind::Instance:
      return "instance";
    case TripleKind::Relation:
      return "relation";
    case TripleKind::Attribute:
      return "attribute";
  }
  return "relation";
}

Json score_json(const ScoreReport& r) {
  Json j;
  j["matched"] = r.matched;
  j["total_a"] = r.total_a;
  j["total_b"] = r.total_b;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["mode"] = match_mode_name(r.mode);
  j["exact"] = r.exact;
  Json mapping = Json::array();
  for (const auto& [a, b] : r.mapping) mapping.push_back(Json::array({a, b}));
  j["mapping"] = std::move(mapping);
  return j;
}

std::string score_line(std::string_view label, const ScoreReport& r) {
  return std::string(label) + "\t" + std::to_string(r.matched) + "\t" + std::to_string(r.total_a) + "\t" +
         std::to_string(r.total_b) + "\t" + fixed6(r.precision) + "\t" + fixed6(r.recall) + "\t" +
         fixed6(r.f1);
}

void add_format_option(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

struct SmatchFlags {
  bool unlabeled = false;
  int restarts = SmatchConfig{}.restarts;
  std::uint64_t seed = 0;
  bool no_top = false;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--unlabeled", unlabeled, "Ignore relation and attribute labels");
    cmd->add_option("--restarts", restarts, "Hill-climbing restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Seed for random restarts");
    cmd->add_flag("--no-top", no_top, "Leave out the TOP triple");
  }

  SmatchConfig config(MatchMode mode) const {
    SmatchConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.include_top = !no_top;
    cfg.mode = mode;
    return cfg;
  }
};

// ---- parse ---------------------------------------------------------------

int cmd_parse(const std::string& file, bool canonical, const std::string& format, Io io) {
  LoadOptions opts;
  opts.require_id = false;
  auto corpus = read_corpus(file, io.in, opts);
  if (corpus.empty()) throw FormatError("no graphs found in " + file);
  if (canonical) {
    for (auto& rec : corpus) rec.graph = canonicalize(rec.graph);
  }
  if (format == "json") {
    Json records = Json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& rec = corpus[i];
      Json r;
      r["id"] = display_id(rec, i + 1);
      r["snt"] = rec.snt;
      r["root"] = rec.graph.root();
      Json list = Json::array();
      for (const auto& t : triples(rec.graph, true)) {
        Json tj;
        tj["kind"] = triple_kind_name(t.kind);
        tj["source"] = t.source;
        tj["role"] = t.role;
        tj["target"] = t.target;
        if (t.kind == TripleKind::Attribute) tj["quoted"] = t.quoted;
        list.push_back(std::move(tj));
      }
      r["triple_count"] = list.size();
      r["triples"] = std::move(list);
      records.push_back(std::move(r));
    }
    Json doc;
    doc["records"] = std::move(records);
    io.out << doc.dump(2) << "\n";
  } else {
    io.out << write_corpus(corpus);
  }
  return kOk;
}

// ---- check ---------------------------------------------------------------

int cmd_check(const std::string& file, const std::string& lexicon_path, const std::optional<std::string>& rules,
              bool strict, const std::string& format, Io io) {
  std::optional<Lexicon> loaded;
  if (!lexicon_path.empty()) loaded = load_lexicon(lexicon_path);
  const Lexicon& lex = loaded ? *loaded : builtin_lexicon();

  RuleConfig cfg;
  if (rules) {
    try {
      cfg = parse_rule_list(*rules);
    } catch (const ContractError& e) {
      throw FormatError(e.what());
    }
  }

  LoadOptions opts;
  opts.require_id = false;
  opts.require_wellformed = false;
  auto corpus = read_corpus(file, io.in, opts);

  std::size_t errors = 0;
  std::size_t warnings = 0;
  std::size_t infos = 0;
  Json findings = Json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& rec = corpus[i];
    ValidationContext ctx;
    for (auto& v : rec.clitic_variables()) ctx.clitic_variables.insert(v);
    const std::string id = display_id(rec, i + 1);
    for (const auto& d : validate(rec.graph, lex, cfg, ctx)) {
      switch (d.severity) {
        case Severity::Error:
          ++errors;
          break;
        case Severity::Warning:
          ++warnings;
          break;
        case Severity::Info:
          ++infos;
          break;
      }
      if (format == "json") {
        findings.push_back(Json{{"id", id},
                                {"rule", rule_code(d.rule)},
                                {"severity", severity_name(d.severity)},
                                {"variable", d.variable},
                                {"message", d.message}});
      } else {
        io.out << id << '\t' << rule_code(d.rule) << '\t' << severity_name(d.severity) << '\t' << d.variable
               << '\t' << d.message << '\n';
      }
    }
  }
  if (format == "json") {
    Json doc;
    doc["records"] = corpus.size();
    doc["diagnostics"] = std::move(findings);
    doc["errors"] = errors;
    doc["warnings"] = warnings;
    doc["infos"] = infos;
    io.out << doc.dump(2) << "\n";
  } else {
    io.out << errors << " errors, " << warnings << " warnings\n";
  }
  if (errors > 0 || (strict && warnings > 0)) return kFindings;
  return kOk;
}

// ---- score ---------------------------------------------------------------

int cmd_score(const std::string& file_a, const std::string& file_b, const SmatchFlags& flags,
              const std::string& format, Io io) {
  auto a = read_corpus(file_a, io.in, {});
  auto b = read_corpus(file_b, io.in, {});
  if (a.empty()) throw FormatError("no graphs found in " + file_a);

  std::map<std::string, const AnnotatedSentence*> b_by_id;
  for (const auto& rec : b) b_by_id.emplace(rec.id, &rec);
  std::vector<std::string> only_a;
  std::vector<std::string> only_b;
  std::vector<std::pair<Graph, Graph>> pairs;
  std::vector<std::string> ids;
  std::set<std::string> a_ids;
  for (const auto& rec : a) {
    a_ids.insert(rec.id);
    auto it = b_by_id.find(rec.id);
    if (it == b_by_id.end()) {
      only_a.push_back(rec.id);
      continue;
    }
    ids.push_back(rec.id);
    pairs.emplace_back(rec.graph, it->second->graph);
  }
  for (const auto& rec : b) {
    if (!a_ids.contains(rec.id)) only_b.push_back(rec.id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    io.err << "pamr score: ids do not align\n";
    for (const auto& id : only_a) io.err << "  only in " << file_a << ": " << id << "\n";
    for (const auto& id : only_b) io.err << "  only in " << file_b << ": " << id << "\n";
    return kUsage;
  }

  const SmatchConfig cfg = flags.config(flags.unlabeled ? MatchMode::Unlabeled : MatchMode::Labeled);
  CorpusScore scored = score_corpus(pairs, cfg);
  if (format == "json") {
    Json per = Json::array();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      Json j = Json{{"id", ids[i]}};
      j.update(score_json(scored.pairs[i]));
      per.push_back(std::move(j));
    }
    Json doc;
    doc["mode"] = match_mode_name(cfg.mode);
    doc["include_top"] = cfg.include_top;
    doc["restarts"] = cfg.restarts;
    doc["seed"] = cfg.seed;
    doc["pairs"] = std::move(per);
    Json micro = score_json(scored.micro);
    micro.erase("mapping");
    micro.erase("exact");
    doc["micro"] = std::move(micro);
    io.out << doc.dump(2) << "\n";
  } else {
    io.out << "id\tmatched\ttotal_a\ttotal_b\tprecision\trecall\tf1\n";
    for (std::size_t i = 0; i < ids.size(); ++i) io.out << score_line(ids[i], scored.pairs[i]) << "\n";
    io.out << score_line("micro", scored.micro) << "\n";
  }
  return kOk;
}

// ---- stats ---------------------------------------------------------------

std::vector<std::pair<std::string, std::size_t>> by_frequency(const std::map<std::string, std::size_t>& table) {
  std::vector<std::pair<std::string, std::size_t>> rows(table.begin(), table.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  return rows;
}

int cmd_stats(const std::string& file, const std::string& format, Io io) {
  LoadOptions opts;
  opts.require_id = false;
  auto corpus = read_corpus(file, io.in, opts);
  if (corpus.empty()) throw FormatError("no graphs found in " + file);
  CorpusStats s = stats(corpus);
  if (format == "json") {
    Json doc;
    doc["sentence_count"] = s.sentence_count;
    doc["triple_count"] = s.triple_count;
    doc["mean_triples"] = s.mean_triples;
    doc["median_triples"] = s.median_triples;
    doc["reentrancy_count"] = s.reentrancy_count;
    doc["lvc_concept_count"] = s.lvc_concept_count;
    doc["concepts"] = Json(s.concepts);
    doc["roles"] = Json(s.roles);
    io.out << doc.dump(2) << "\n";
    return kOk;
  }
  io.out << "sentences: " << s.sentence_count << "\n"
         << "triples: " << s.triple_count << "\n"
         << "mean_triples: " << fixed6(s.mean_triples) << "\n"
         << "median_triples: " << fixed6(s.median_triples) << "\n"
         << "reentrancies: " << s.reentrancy_count << "\n"
         << "lvc_concepts: " << s.lvc_concept_count << "\n"
         << "concepts:\n";
  for (const auto& [label, n] : by_frequency(s.concepts)) io.out << "  " << label << "\t" << n << "\n";
  io.out << "roles:\n";
  for (const auto& [role, n] : by_frequency(s.roles)) io.out << "  " << role << "\t" << n << "\n";
  return kOk;
}

// ---- iaa -----------------------------------------------------------------

std::string annotator_name(const std::string& path, const std::vector<AnnotatedSentence>& corpus) {
  std::optional<std::string> name;
  bool consistent = true;
  for (const auto& rec : corpus) {
    if (!rec.annotator) continue;
    if (name && *name != *rec.annotator) consistent = false;
    name = rec.annotator;
  }
  if (name && consistent) return *name;
  if (path == "-") return "stdin";
  return std::filesystem::path(path).stem().string();
}

Json iaa_json(const IaaReport& r) {
  Json doc;
  doc["mode"] = match_mode_name(r.mode);
  doc["annotators"] = r.annotators;
  doc["shared_ids"] = r.shared_ids;
  Json pairs = Json::array();
  for (const auto& p : r.pairwise) {
    Json s = score_json(p.score);
    s.erase("mapping");
    s.erase("exact");
    pairs.push_back(Json{{"first", p.first}, {"second", p.second}, {"score", std::move(s)}});
  }
  doc["pairwise"] = std::move(pairs);
  doc["average_f1"] = r.average_f1;
  return doc;
}

void print_iaa(const IaaReport& r, std::ostream& out) {
  out << "mode: " << match_mode_name(r.mode) << "\n";
  out << "annotators:";
  for (const auto& a : r.annotators) out << " " << a;
  out << "\nshared_ids: " << r.shared_ids.size() << "\n";
  for (const auto& p : r.pairwise) {
    out << score_line(p.first + "\t" + p.second, p.score) << "\n";
  }
  out << "average_f1: " << fixed6(r.average_f1) << "\n";
}

int cmd_iaa(const std::vector<std::string>& files, const SmatchFlags& flags, bool both, const std::string& format,
            Io io) {
  std::map<std::string, std::vector<AnnotatedSentence>> corpora;
  for (const auto& file : files) {
    auto corpus = read_corpus(file, io.in, {});
    std::string name = annotator_name(file, corpus);
    if (corpora.contains(name)) throw FormatError("annotator '" + name + "' appears in more than one file");
    corpora.emplace(std::move(name), std::move(corpus));
  }
  std::vector<MatchMode> modes;
  if (both) {
    modes = {MatchMode::Labeled, MatchMode::Unlabeled};
  } else {
    modes = {flags.unlabeled ? MatchMode::Unlabeled : MatchMode::Labeled};
  }
  std::vector<IaaReport> reports;
  for (MatchMode mode : modes) {
    try {
      reports.push_back(iaa(corpora, flags.config(mode)));
    } catch (const ContractError& e) {
      throw FormatError(e.what());
    }
  }
  if (format == "json") {
    Json doc = Json::array();
    for (const auto& r : reports) doc.push_back(iaa_json(r));
    io.out << (reports.size() == 1 ? doc[0] : doc).dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i > 0) io.out << "\n";
      print_iaa(reports[i], io.out);
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Io io{in, out, err};
  CLI::App app{"PAMR toolkit: PENMAN parsing, guideline checks, Smatch scoring, corpus statistics"};
  app.name("pamr");
  app.require_subcommand(1);

  std::string format = "text";

  auto* parse = app.add_subcommand("parse", "Parse a corpus and print it back as PENMAN or JSON triples");
  std::string parse_file;
  bool canonical = false;
  parse->add_option("file", parse_file, "Corpus file, or - for stdin")->required();
  parse->add_flag("--canonical", canonical, "Rename variables to x, x2, ... in preorder");
  add_format_option(parse, format);

  auto* check = app.add_subcommand("check", "Validate graphs against the PAMR rule catalog");
  std::string check_file;
  std::string lexicon_path;
  std::string rules_text;
  bool strict = false;
  check->add_option("file", check_file, "Corpus file, or - for stdin")->required();
  check->add_option("--lexicon", lexicon_path, "Lexicon file merged over the builtin lexicon")
      ->envname("PAMR_LEXICON");
  auto* rules_opt = check->add_option("--rules", rules_text, "Comma-separated rule ids to enable");
  check->add_flag("--strict", strict, "Exit 1 on warnings too");
  add_format_option(check, format);

  auto* score = app.add_subcommand("score", "Smatch between two id-aligned corpora");
  std::string score_a;
  std::string score_b;
  SmatchFlags score_flags;
  score->add_option("candidate", score_a, "Candidate corpus (A)")->required();
  score->add_option("reference", score_b, "Reference corpus (B)")->required();
  score_flags.attach(score);
  add_format_option(score, format);

  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  std::string stats_file;
  stats_cmd->add_option("file", stats_file, "Corpus file, or - for stdin")->required();
  add_format_option(stats_cmd, format);

  auto* iaa_cmd = app.add_subcommand("iaa", "Inter-annotator agreement over shared ids");
  std::vector<std::string> iaa_files;
  SmatchFlags iaa_flags;
  bool both = false;
  iaa_cmd->add_option("files", iaa_files, "One corpus file per annotator")->required()->expected(2, -1);
  iaa_flags.attach(iaa_cmd);
  iaa_cmd->add_flag("--both", both, "Report labeled and unlabeled agreement");
  add_format_option(iaa_cmd, format);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "parse") return cmd_parse(parse_file, canonical, format, io);
    if (cmd == "check") {
      std::optional<std::string> rules;
      if (rules_opt->count() > 0) rules = rules_text;
      return cmd_check(check_file, lexicon_path, rules, strict, format, io);
    }
    if (cmd == "score") return cmd_score(score_a, score_b, score_flags, format, io);
    if (cmd == "stats") return cmd_stats(stats_file, format, io);
    if (cmd == "iaa") return cmd_iaa(iaa_files, iaa_flags, both, format, io);
  } catch (const IoError& e) {
    err << "pamr " << cmd << ": " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "pamr " << cmd << ": " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace pamr::cli
