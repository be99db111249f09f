#include "pamr/graph.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>
#include <unordered_set>

#include "pamr/error.hpp"

namespace pamr {

namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string join_whitespace(std::string_view label) {
  std::string out;
  bool pending_gap = false;
  for (char c : label) {
    if (is_ascii_space(c)) {
      pending_gap = !out.empty();
      continue;
    }
    if (pending_gap) out.push_back('_');
    pending_gap = false;
    out.push_back(c);
  }
  return out;
}

void require_token(std::string_view what, std::string_view token) {
  if (token.empty()) throw ContractError(std::string(what) + " must be nonempty");
  for (char c : token) {
    if (is_ascii_space(c)) {
      throw ContractError(std::string(what) + " '" + std::string(token) +
                          "' contains whitespace");
    }
  }
}

void require_variable(std::string_view var) {
  require_token("variable", var);
  if (var.front() == ':' || var.front() == '"') {
    throw ContractError("variable '" + std::string(var) + "' starts with ':' or '\"'");
  }
}

// Written-structure adjacency: variable -> variable targets in recorded order.
std::unordered_map<std::string, std::vector<std::string>> written_children(const Graph& g) {
  std::unordered_map<std::string, std::vector<std::string>> children;
  for (const auto& rel : g.relations()) {
    if (!rel.is_attribute()) children[rel.source].push_back(rel.target_var());
  }
  return children;
}

}  // namespace

bool is_numeric_literal(std::string_view token) {
  std::size_t i = 0;
  if (i < token.size() && (token[i] == '+' || token[i] == '-')) ++i;
  const std::size_t int_start = i;
  while (i < token.size() && token[i] >= '0' && token[i] <= '9') ++i;
  if (i == int_start) return false;
  if (i < token.size() && token[i] == '.') {
    const std::size_t frac_start = ++i;
    while (i < token.size() && token[i] >= '0' && token[i] <= '9') ++i;
    if (i == frac_start) return false;
  }
  if (i < token.size() && (token[i] == 'e' || token[i] == 'E')) {
    ++i;
    if (i < token.size() && (token[i] == '+' || token[i] == '-')) ++i;
    const std::size_t exp_start = i;
    while (i < token.size() && token[i] >= '0' && token[i] <= '9') ++i;
    if (i == exp_start) return false;
  }
  return i == token.size();
}

Constant make_constant(std::string_view value) {
  const bool bare = value == "+" || value == "-" || is_numeric_literal(value);
  return Constant{std::string(value), !bare};
}

bool is_inverse_role(std::string_view role) {
  static constexpr std::array<std::string_view, 3> kNotInverse = {
      "consist-of", "prep-out-of", "prep-on-behalf-of"};
  if (role.size() <= 3 || !role.ends_with("-of")) return false;
  return std::find(kNotInverse.begin(), kNotInverse.end(), role) == kNotInverse.end();
}

std::string_view forward_role(std::string_view role) {
  return is_inverse_role(role) ? role.substr(0, role.size() - 3) : role;
}

int core_arg_index(std::string_view role) {
  if (role.size() < 4) return -1;
  auto upper = [](char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c; };
  if (upper(role[0]) != 'A' || upper(role[1]) != 'R' || upper(role[2]) != 'G') return -1;
  int index = 0;
  for (std::size_t i = 3; i < role.size(); ++i) {
    if (role[i] < '0' || role[i] > '9') return -1;
    index = index * 10 + (role[i] - '0');
    if (index > 99) return -1;
  }
  return index;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (const auto& rel : relations_) {
    if (!rel.is_attribute()) out.push_back({rel.source, rel.role, rel.target_var()});
  }
  return out;
}

std::vector<Edge> Graph::normalized_edges() const {
  std::vector<Edge> out;
  for (const auto& rel : relations_) {
    if (rel.is_attribute()) continue;
    if (is_inverse_role(rel.role)) {
      out.push_back({rel.target_var(), std::string(forward_role(rel.role)), rel.source});
    } else {
      out.push_back({rel.source, rel.role, rel.target_var()});
    }
  }
  return out;
}

std::vector<Attribute> Graph::attributes() const {
  std::vector<Attribute> out;
  for (const auto& rel : relations_) {
    if (rel.is_attribute()) out.push_back({rel.source, rel.role, rel.constant()});
  }
  return out;
}

const std::string* Graph::concept_of(std::string_view var) const {
  for (const auto& inst : instances_) {
    if (inst.var == var) return &inst.label;
  }
  return nullptr;
}

std::size_t Graph::edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(relations_.begin(), relations_.end(),
                    [](const Relation& r) { return !r.is_attribute(); }));
}

std::size_t Graph::attribute_count() const { return relations_.size() - edge_count(); }

GraphBuilder& GraphBuilder::set_root(std::string var) {
  require_variable(var);
  graph_.root_ = std::move(var);
  return *this;
}

GraphBuilder& GraphBuilder::add_instance(std::string var, std::string_view label) {
  require_variable(var);
  std::string joined = join_whitespace(label);
  require_token("concept", joined);
  if (graph_.root_.empty() && graph_.instances_.empty()) graph_.root_ = var;
  graph_.instances_.push_back({std::move(var), std::move(joined)});
  return *this;
}

GraphBuilder& GraphBuilder::add_edge(std::string source, std::string role, std::string target) {
  require_variable(source);
  require_token("role", role);
  require_variable(target);
  graph_.relations_.push_back({std::move(source), std::move(role), VarRef{std::move(target)}});
  return *this;
}

GraphBuilder& GraphBuilder::add_attribute(std::string source, std::string role, Constant value) {
  require_variable(source);
  require_token("role", role);
  // Unquoted storage is reserved for +, - and numerals.
  Constant normalized = make_constant(value.value);
  if (value.quoted) normalized.quoted = true;
  graph_.relations_.push_back({std::move(source), std::move(role), std::move(normalized)});
  return *this;
}

Graph GraphBuilder::build() const& { return graph_; }

Graph GraphBuilder::build() && { return std::move(graph_); }

std::vector<Triple> triples(const Graph& g, bool include_top) {
  std::vector<Triple> out;
  out.reserve(g.instances().size() + g.relations().size() + 1);
  if (include_top) {
    const std::string* root_concept = g.concept_of(g.root());
    out.push_back({TripleKind::Top, g.root(), "TOP", root_concept ? *root_concept : "", false});
  }
  for (const auto& inst : g.instances()) {
    out.push_back({TripleKind::Instance, inst.var, "instance", inst.label, false});
  }
  for (const auto& edge : g.normalized_edges()) {
    out.push_back({TripleKind::Relation, edge.source, edge.role, edge.target, false});
  }
  for (const auto& attr : g.attributes()) {
    out.push_back(
        {TripleKind::Attribute, attr.source, attr.role, attr.value.value, attr.value.quoted});
  }
  return out;
}

std::vector<std::string> preorder(const Graph& g) {
  const auto children = written_children(g);
  std::unordered_set<std::string> defined;
  for (const auto& inst : g.instances()) defined.insert(inst.var);

  std::vector<std::string> order;
  std::unordered_set<std::string> seen;
  if (defined.contains(g.root())) {
    // Explicit stack of (variable, next child index) mirrors recursive preorder.
    std::vector<std::pair<std::string, std::size_t>> stack;
    stack.emplace_back(g.root(), 0);
    seen.insert(g.root());
    order.push_back(g.root());
    while (!stack.empty()) {
      auto& [var, next] = stack.back();
      auto it = children.find(var);
      if (it == children.end() || next >= it->second.size()) {
        stack.pop_back();
        continue;
      }
      const std::string& child = it->second[next++];
      if (!defined.contains(child) || seen.contains(child)) continue;
      seen.insert(child);
      order.push_back(child);
      stack.emplace_back(child, 0);
    }
  }
  for (const auto& inst : g.instances()) {
    if (seen.insert(inst.var).second) order.push_back(inst.var);
  }
  return order;
}

namespace {

// Tarjan's SCC, iterative. Returns components that contain a cycle
// (size > 1 or a self-loop), each listed in `order` order.
std::vector<std::vector<std::string>> cyclic_components(
    const std::vector<std::string>& order,
    const std::unordered_map<std::string, std::vector<std::string>>& succ) {
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  const std::size_t n = order.size();
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<bool> self_loop(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = succ.find(order[i]);
    if (it == succ.end()) continue;
    for (const auto& t : it->second) {
      auto p = position.find(t);
      if (p == position.end()) continue;
      adj[i].push_back(p->second);
      if (p->second == i) self_loop[i] = true;
    }
  }

  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> scc_stack;
  std::size_t counter = 0;
  std::vector<std::vector<std::size_t>> found;

  for (std::size_t start = 0; start < n; ++start) {
    if (index[start] != kUnvisited) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{start, 0}};
    index[start] = low[start] = counter++;
    scc_stack.push_back(start);
    on_stack[start] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < adj[v].size()) {
        const std::size_t w = adj[v][next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          scc_stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> component;
        std::size_t w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        if (component.size() > 1 || self_loop[v]) found.push_back(std::move(component));
      }
      const std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) {
        auto& parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  std::vector<std::vector<std::string>> out;
  for (auto& component : found) {
    std::sort(component.begin(), component.end());
    std::vector<std::string> names;
    for (auto i : component) names.push_back(order[i]);
    out.push_back(std::move(names));
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return position[a.front()] < position[b.front()];
  });
  return out;
}

}  // namespace

std::vector<Diagnostic> check_wellformed(const Graph& g) {
  std::vector<Diagnostic> out;
  auto report = [&](RuleId rule, const std::string& var, std::string message) {
    out.push_back({rule, Severity::Error, var, std::move(message)});
  };

  std::unordered_map<std::string, int> instance_count;
  for (const auto& inst : g.instances()) ++instance_count[inst.var];
  std::unordered_set<std::string> reported;
  for (const auto& inst : g.instances()) {
    const int count = instance_count[inst.var];
    if (count > 1 && reported.insert(inst.var).second) {
      report(RuleId::GInstance, inst.var,
             "variable '" + inst.var + "' has " + std::to_string(count) + " instance triples");
    }
  }
  if (g.instances().empty()) {
    report(RuleId::GInstance, g.root(), "graph has no instance triples");
  }

  auto defined = [&](const std::string& v) { return instance_count.contains(v); };
  if (!g.instances().empty() && !defined(g.root())) {
    report(RuleId::GDangle, g.root(), "root '" + g.root() + "' has no instance");
  }
  for (const auto& rel : g.relations()) {
    if (!defined(rel.source)) {
      report(RuleId::GDangle, rel.source,
             "':" + rel.role + "' starts at undefined variable '" + rel.source + "'");
    }
    if (!rel.is_attribute() && !defined(rel.target_var())) {
      report(RuleId::GDangle, rel.target_var(),
             "':" + rel.role + "' points to undefined variable '" + rel.target_var() + "'");
    }
  }

  const auto order = preorder(g);
  if (defined(g.root())) {
    // preorder() lists reachable variables first; the rest are unreachable.
    const auto children = written_children(g);
    std::unordered_set<std::string> reachable{g.root()};
    std::vector<std::string> frontier{g.root()};
    while (!frontier.empty()) {
      const std::string v = std::move(frontier.back());
      frontier.pop_back();
      auto it = children.find(v);
      if (it == children.end()) continue;
      for (const auto& c : it->second) {
        if (defined(c) && reachable.insert(c).second) frontier.push_back(c);
      }
    }
    for (const auto& v : order) {
      if (!reachable.contains(v)) {
        report(RuleId::GUnreachable, v,
               "variable '" + v + "' is not reachable from root '" + g.root() + "'");
      }
    }
  }

  std::unordered_map<std::string, std::vector<std::string>> succ;
  for (const auto& e : g.normalized_edges()) succ[e.source].push_back(e.target);
  for (const auto& component : cyclic_components(order, succ)) {
    std::string members;
    for (const auto& v : component) {
      if (!members.empty()) members += ", ";
      members += v;
    }
    report(RuleId::GCycle, component.front(), "directed cycle through {" + members + "}");
  }
  return out;
}

Graph rename_variables(const Graph& g,
                       const std::vector<std::pair<std::string, std::string>>& mapping) {
  std::unordered_map<std::string, std::string> table(mapping.begin(), mapping.end());
  auto rename = [&](const std::string& v) {
    auto it = table.find(v);
    return it == table.end() ? v : it->second;
  };
  GraphBuilder builder;
  if (!g.root().empty()) builder.set_root(rename(g.root()));
  for (const auto& inst : g.instances()) builder.add_instance(rename(inst.var), inst.label);
  for (const auto& rel : g.relations()) {
    if (rel.is_attribute()) {
      builder.add_attribute(rename(rel.source), rel.role, rel.constant());
    } else {
      builder.add_edge(rename(rel.source), rel.role, rename(rel.target_var()));
    }
  }
  return std::move(builder).build();
}

Graph canonicalize(const Graph& g) {
  if (!check_wellformed(g).empty()) {
    throw ContractError("canonicalize requires a wellformed graph");
  }
  const auto order = preorder(g);
  std::unordered_map<std::string, std::string> names;
  for (std::size_t i = 0; i < order.size(); ++i) {
    names[order[i]] = i == 0 ? std::string("x") : "x" + std::to_string(i + 1);
  }
  GraphBuilder builder;
  builder.set_root(names.at(g.root()));
  for (const auto& v : order) builder.add_instance(names.at(v), *g.concept_of(v));
  for (const auto& rel : g.relations()) {
    if (rel.is_attribute()) {
      builder.add_attribute(names.at(rel.source), rel.role, rel.constant());
    } else {
      builder.add_edge(names.at(rel.source), rel.role, names.at(rel.target_var()));
    }
  }
  return std::move(builder).build();
}

}  // namespace pamr
