#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pamr/diagnostic.hpp"

namespace pamr {

// An attribute value: `+`, `-`, a number, or a quoted string. Unquoted
// storage is only used for `+`, `-` and numerals; anything else is quoted.
struct Constant {
  std::string value;
  bool quoted = true;

  friend bool operator==(const Constant&, const Constant&) = default;
};

bool is_numeric_literal(std::string_view token);
/// Builds a constant from raw text, choosing the quoting the serializer uses.
Constant make_constant(std::string_view value);

struct VarRef {
  std::string id;

  friend bool operator==(const VarRef&, const VarRef&) = default;
};

struct Instance {
  std::string var;
  std::string label;  // concept label

  friend bool operator==(const Instance&, const Instance&) = default;
};

// One `:role value` as written in PENMAN, in recorded order. Inverse roles
// (`ARG0-of`) are stored as written; see `normalized_edges`.
struct Relation {
  std::string source;
  std::string role;
  std::variant<VarRef, Constant> target;

  bool is_attribute() const { return std::holds_alternative<Constant>(target); }
  const std::string& target_var() const { return std::get<VarRef>(target).id; }
  const Constant& constant() const { return std::get<Constant>(target); }

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct Edge {
  std::string source;
  std::string role;
  std::string target;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Attribute {
  std::string source;
  std::string role;
  Constant value;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// True for `X-of` roles other than the few AMR roles whose names merely end
/// in "-of" (`consist-of`, ...).
bool is_inverse_role(std::string_view role);
/// `ARG0-of` -> `ARG0`; identity for non-inverse roles.
std::string_view forward_role(std::string_view role);
/// Index n for `ARGn` (case-insensitive), or -1 for any other role.
int core_arg_index(std::string_view role);

// Immutable AMR graph. Construct through GraphBuilder or parse_penman.
class Graph {
 public:
  Graph() = default;

  const std::string& root() const { return root_; }
  std::span<const Instance> instances() const { return instances_; }
  std::span<const Relation> relations() const { return relations_; }

  /// Variable-to-variable relations, as written.
  std::vector<Edge> edges() const;
  /// Variable-to-variable relations with inverse roles flipped to the forward
  /// direction (`(a :ARG0-of b)` becomes `(b :ARG0 a)`).
  std::vector<Edge> normalized_edges() const;
  std::vector<Attribute> attributes() const;

  /// Concept of the first instance of `var`, or nullptr.
  const std::string* concept_of(std::string_view var) const;
  std::size_t variable_count() const { return instances_.size(); }
  std::size_t edge_count() const;
  std::size_t attribute_count() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend class GraphBuilder;

  std::string root_;
  std::vector<Instance> instances_;
  std::vector<Relation> relations_;
};

// Accumulates graph parts in recorded order. No wellformedness checking is
// done here beyond token validity; see check_wellformed.
class GraphBuilder {
 public:
  GraphBuilder& set_root(std::string var);
  /// Internal whitespace runs in `label` become a single underscore.
  GraphBuilder& add_instance(std::string var, std::string_view label);
  GraphBuilder& add_edge(std::string source, std::string role, std::string target);
  GraphBuilder& add_attribute(std::string source, std::string role, Constant value);

  Graph build() const&;
  Graph build() &&;

 private:
  Graph graph_;
};

enum class TripleKind { Top, Instance, Relation, Attribute };

struct Triple {
  TripleKind kind;
  std::string source;
  std::string role;    // "TOP", "instance", or the (forward) relation role
  std::string target;  // concept, variable, or constant text
  bool quoted = false;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// TOP (when requested), then instances, relations and attributes. Relation
/// triples use forward roles. The TOP triple's target is the root concept.
std::vector<Triple> triples(const Graph& g, bool include_top);

/// Empty iff the graph is wellformed: one instance per variable, no dangling
/// endpoints, every variable reachable from the root through the written
/// structure, and no directed cycle among forward-normalized edges.
std::vector<Diagnostic> check_wellformed(const Graph& g);

/// Variables in depth-first preorder from the root over written edges,
/// siblings in recorded order. Unreachable variables follow in instance order.
std::vector<std::string> preorder(const Graph& g);

/// Renames variables to x, x2, x3, ... in preorder and reorders instances to
/// match. Throws ContractError on non-wellformed input.
Graph canonicalize(const Graph& g);

/// Applies a variable renaming; names missing from `mapping` are kept.
Graph rename_variables(const Graph& g,
                       const std::vector<std::pair<std::string, std::string>>& mapping);

}  // namespace pamr
