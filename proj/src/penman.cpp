#include "pamr/penman.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "pamr/error.hpp"
#include "pamr/unicode.hpp"

namespace pamr {

std::string_view parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnbalancedParen:
      return "UnbalancedParen";
    case ParseErrorKind::DuplicateVariable:
      return "DuplicateVariable";
    case ParseErrorKind::UndefinedVariable:
      return "UndefinedVariable";
    case ParseErrorKind::BadToken:
      return "BadToken";
    case ParseErrorKind::EmptyGraph:
      return "EmptyGraph";
  }
  return "BadToken";
}

namespace {

constexpr int kMaxDepth = 512;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

struct ParseFailure {
  ParseDiagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Graph run() {
    if (auto bad = unicode::find_invalid_utf8(text_)) {
      fail(ParseErrorKind::BadToken, *bad, *bad + 1, "invalid UTF-8 byte sequence");
    }
    skip_space_and_comments();
    if (at_end()) fail(ParseErrorKind::EmptyGraph, 0, text_.size(), "no graph in input");
    if (peek() != '(') {
      const auto [start, end] = token_bounds(pos_);
      fail(ParseErrorKind::BadToken, start, end, "expected '(' to start a graph");
    }
    const std::string root = parse_node(0);
    skip_space();
    if (!at_end()) {
      if (peek() == ')') {
        fail(ParseErrorKind::UnbalancedParen, pos_, pos_ + 1, "unmatched ')'");
      }
      const auto [start, end] = token_bounds(pos_);
      fail(ParseErrorKind::BadToken, start, end, "unexpected text after the graph");
    }
    for (const auto& [var, start, end] : references_) {
      if (!defined_.contains(var)) {
        fail(ParseErrorKind::UndefinedVariable, start, end,
             "variable '" + var + "' is never defined with '/'");
      }
    }
    builder_.set_root(root);
    return std::move(builder_).build();
  }

 private:
  struct Reference {
    std::string var;
    std::size_t start;
    std::size_t end;
  };

  [[noreturn]] void fail(ParseErrorKind kind, std::size_t start, std::size_t end,
                         std::string message) const {
    start = std::min(start, text_.size());
    end = std::clamp(end, start, text_.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(
                              text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(start), '\n'));
    throw ParseFailure{{SourceSpan{start, end, line}, std::move(message), kind}};
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_space() {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  void skip_space_and_comments() {
    for (;;) {
      skip_space();
      if (at_end() || peek() != '#') return;
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  std::pair<std::size_t, std::size_t> token_bounds(std::size_t from) const {
    std::size_t end = from;
    while (end < text_.size() && !is_space(text_[end]) && text_[end] != '(' && text_[end] != ')') {
      ++end;
    }
    return {from, std::max(end, from + 1)};
  }

  // Reads until whitespace, a paren, or any character in `extra_stops`.
  std::string_view read_token(std::string_view extra_stops) {
    const std::size_t start = pos_;
    while (!at_end()) {
      const char c = peek();
      if (is_space(c) || c == '(' || c == ')' || extra_stops.find(c) != std::string_view::npos) {
        break;
      }
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  // `parent_role` set: the node is the value of `:parent_role` on `parent`,
  // and the edge is recorded before the node's own relations.
  std::string parse_node(int depth, const std::string* parent = nullptr, const std::string* parent_role = nullptr) {
    const std::size_t open = pos_;
    if (depth >= kMaxDepth) fail(ParseErrorKind::BadToken, open, open + 1, "nesting too deep");
    ++pos_;  // '('
    skip_space();

    const std::size_t var_start = pos_;
    const std::string var = unicode::to_nfc(read_token("/\""));
    if (var.empty() || var.front() == ':') {
      const auto [start, end] = token_bounds(var_start);
      fail(ParseErrorKind::BadToken, start, end, "expected a variable after '('");
    }
    const std::size_t var_end = pos_;

    skip_space();
    if (at_end()) unclosed(open);
    if (peek() != '/') {
      const auto [start, end] = token_bounds(pos_);
      fail(ParseErrorKind::BadToken, start, end, "expected '/' after variable '" + var + "'");
    }
    ++pos_;
    skip_space();
    if (at_end()) unclosed(open);

    const std::size_t concept_start = pos_;
    std::string label = unicode::to_nfc(read_token(""));
    if (label.empty() || label.front() == ':' || label.front() == '"' || label.front() == '/') {
      const auto [start, end] = token_bounds(concept_start);
      fail(ParseErrorKind::BadToken, start, end, "expected a concept after '/'");
    }
    // Multiword concepts: keep absorbing tokens until a role or paren.
    for (;;) {
      const std::size_t save = pos_;
      skip_space();
      if (at_end()) break;
      const char c = peek();
      if (c == ':' || c == '(' || c == ')' || c == '"' || c == '/' || save == pos_) {
        break;
      }
      label += '_';
      label += unicode::to_nfc(read_token(""));
    }

    if (!defined_.insert(var).second) {
      fail(ParseErrorKind::DuplicateVariable, var_start, var_end,
           "variable '" + var + "' is defined more than once");
    }
    if (parent != nullptr) builder_.add_edge(*parent, *parent_role, var);
    builder_.add_instance(var, label);

    for (;;) {
      skip_space();
      if (at_end()) unclosed(open);
      const char c = peek();
      if (c == ')') {
        ++pos_;
        return var;
      }
      if (c != ':') {
        const auto [start, end] = token_bounds(pos_);
        fail(ParseErrorKind::BadToken, start, end, "expected a role starting with ':'");
      }
      parse_relation(var, open, depth);
    }
  }

  void parse_relation(const std::string& source, std::size_t open, int depth) {
    const std::size_t role_start = pos_;
    ++pos_;  // ':'
    const std::string role = unicode::to_nfc(read_token("\""));
    if (role.empty()) fail(ParseErrorKind::BadToken, role_start, role_start + 1, "empty role");

    skip_space();
    if (at_end()) unclosed(open);
    const char c = peek();
    if (c == '(') {
      parse_node(depth + 1, &source, &role);
      return;
    }
    if (c == '"') {
      builder_.add_attribute(source, role, Constant{read_string(), true});
      return;
    }
    const std::size_t value_start = pos_;
    if (c == ')' || c == ':' || c == '/') {
      fail(ParseErrorKind::BadToken, role_start, pos_, "role ':" + role + "' has no value");
    }
    const std::string value = unicode::to_nfc(read_token("\""));
    if (value == "+" || value == "-" || is_numeric_literal(value)) {
      builder_.add_attribute(source, role, Constant{value, false});
      return;
    }
    references_.push_back({value, value_start, pos_});
    builder_.add_edge(source, role, value);
  }

  std::string read_string() {
    const std::size_t start = pos_;
    ++pos_;  // opening quote
    std::string out;
    while (!at_end()) {
      const char c = peek();
      ++pos_;
      if (c == '"') return unicode::to_nfc(out);
      if (c == '\\') {
        if (at_end()) break;
        out.push_back(peek());
        ++pos_;
        continue;
      }
      out.push_back(c);
    }
    fail(ParseErrorKind::BadToken, start, text_.size(), "unterminated string");
  }

  [[noreturn]] void unclosed(std::size_t open) const {
    fail(ParseErrorKind::UnbalancedParen, open, open + 1, "'(' is never closed");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  GraphBuilder builder_;
  std::unordered_set<std::string> defined_;
  std::vector<Reference> references_;
};

std::string escape_string(std::string_view value) {
  std::string out;
  out.reserve(value.size() + 2);
  out.push_back('"');
  for (char c : value) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string concept_initial(std::string_view label) {
  std::size_t i = 0;
  while (i < label.size()) {
    const auto c = static_cast<unsigned char>(label[i]);
    const bool ascii_alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (ascii_alpha || c >= 0x80) break;
    ++i;
  }
  if (i == label.size()) return "v";
  return unicode::ascii_lower(unicode::first_code_point(label.substr(i)));
}

std::unordered_map<std::string, std::string> canonical_names(const Graph& g, VarNaming naming) {
  std::unordered_map<std::string, std::string> names;
  const auto order = preorder(g);
  if (naming == VarNaming::Sequential) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      names[order[i]] = i == 0 ? std::string("x") : "x" + std::to_string(i + 1);
    }
    return names;
  }
  std::unordered_map<std::string, int> used;
  for (const auto& var : order) {
    const std::string initial = concept_initial(*g.concept_of(var));
    const int n = ++used[initial];
    names[var] = n == 1 ? initial : initial + std::to_string(n);
  }
  return names;
}

}  // namespace

ParseResult parse_penman(std::string_view text) {
  try {
    return Parser(text).run();
  } catch (const ParseFailure& failure) {
    return failure.diagnostic;
  } catch (const ContractError& e) {
    // GraphBuilder rejected a token the grammar let through.
    return ParseDiagnostic{SourceSpan{0, text.size(), 1}, e.what(), ParseErrorKind::BadToken};
  }
}

Graph parse_penman_or_throw(std::string_view text) {
  auto result = parse_penman(text);
  if (auto* diag = std::get_if<ParseDiagnostic>(&result)) {
    throw FormatError(std::string(parse_error_kind_name(diag->kind)) + ": " + diag->message,
                      diag->span.line);
  }
  return std::get<Graph>(std::move(result));
}

std::string serialize_penman(const Graph& g, const SerializeStyle& style) {
  const auto problems = check_wellformed(g);
  if (!problems.empty()) {
    throw ContractError("cannot serialize a non-wellformed graph: " + problems.front().message);
  }

  std::unordered_map<std::string, std::string> names;
  if (style.canonical_vars) names = canonical_names(g, style.naming);
  auto name = [&](const std::string& var) -> const std::string& {
    auto it = names.find(var);
    return it == names.end() ? var : it->second;
  };

  std::unordered_map<std::string, std::vector<const Relation*>> outgoing;
  for (const auto& rel : g.relations()) outgoing[rel.source].push_back(&rel);
  static const std::vector<const Relation*> kNone;
  auto relations_of = [&](const std::string& var) -> const std::vector<const Relation*>& {
    auto it = outgoing.find(var);
    return it == outgoing.end() ? kNone : it->second;
  };

  struct Frame {
    const std::string* var;
    std::size_t depth;
    std::size_t next;
  };

  std::string out;
  std::unordered_set<std::string> emitted{g.root()};
  auto open_node = [&](const std::string& var) {
    out += '(';
    out += name(var);
    out += " / ";
    out += *g.concept_of(var);
  };

  std::vector<Frame> stack;
  open_node(g.root());
  stack.push_back({&g.root(), 0, 0});
  while (!stack.empty()) {
    Frame& frame = stack.back();
    const auto& rels = relations_of(*frame.var);
    if (frame.next >= rels.size()) {
      out += ')';
      stack.pop_back();
      continue;
    }
    const Relation& rel = *rels[frame.next++];
    const std::size_t depth = frame.depth;
    out += '\n';
    out.append((depth + 1) * static_cast<std::size_t>(std::max(style.indent, 0)), ' ');
    out += ':';
    out += rel.role;
    out += ' ';
    if (rel.is_attribute()) {
      const Constant& value = rel.constant();
      out += value.quoted ? escape_string(value.value) : value.value;
      continue;
    }
    const std::string& target = rel.target_var();
    if (emitted.insert(target).second) {
      open_node(target);
      stack.push_back({&target, depth + 1, 0});
    } else {
      out += name(target);
    }
  }
  return out;
}

}  // namespace pamr
