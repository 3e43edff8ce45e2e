// Copyright 2026 The polyfed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Typed knowledge-graph store: nodes with kinds and properties, labeled links
// whose object is a node or a literal, and contexts grouping both. Schema,
// mapping and provenance data all live in one CatalogGraph.
//
// CatalogGraph is a plain value. It performs no internal locking: callers
// serialize mutations and may run const operations (including pattern
// matching) concurrently on a snapshot that is not being mutated.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "polyfed/error.h"
#include "polyfed/scalar.h"

namespace polyfed {

struct NodeId {
  std::string value;

  NodeId() = default;
  explicit NodeId(std::string v) : value(std::move(v)) {}

  auto operator<=>(const NodeId&) const = default;
};

enum class NodeKind {
  kConcept,
  kDatasetSchema,
  kAttribute,
  kDataStore,
  kDatabase,
  kDatabaseSchema,
  kMachine,
  kWorkflow,
  kDataTransformation,
  kWorkflowExecution,
  kDataTransformationExecution,
  kAttributeValue,
  kContext,
};
inline constexpr std::size_t kNodeKindCount = 13;

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

using Properties = std::map<std::string, Scalar, std::less<>>;

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::kConcept;
  Properties properties;

  bool operator==(const Node&) const = default;
};

const Scalar* find_property(const Node& node, std::string_view key);
const Scalar& property(const Node& node, std::string_view key);  // throws kInvalidArgument
// Empty when absent or not a string.
std::string string_property(const Node& node, std::string_view key);

// Link object (or a pattern binding): a node reference or a typed literal.
class Term {
 public:
  Term() = default;
  static Term node(NodeId id) { return Term(std::move(id)); }
  static Term literal(Scalar value) { return Term(std::move(value)); }

  bool is_node() const { return std::holds_alternative<NodeId>(value_); }
  const NodeId& node_id() const { return std::get<NodeId>(value_); }
  const Scalar& literal() const { return std::get<Scalar>(value_); }

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b) { return a.value_ == b.value_; }
  friend bool operator<(const Term& a, const Term& b) { return a.value_ < b.value_; }

 private:
  explicit Term(NodeId id) : value_(std::move(id)) {}
  explicit Term(Scalar value) : value_(std::move(value)) {}

  std::variant<NodeId, Scalar> value_;
};

using LinkId = std::size_t;

struct Link {
  NodeId subject;
  std::string predicate;
  Term object;

  bool operator==(const Link&) const = default;
};

struct ContextMembers {
  std::set<NodeId> nodes;
  std::set<LinkId> links;
};

// ---------------------------------------------------------------------------
// Conjunctive triple patterns.

struct Variable {
  std::string name;
};

using PatternTerm = std::variant<Variable, NodeId, Scalar>;
using PredicateTerm = std::variant<Variable, std::string>;

enum class Direction { kForward, kInverse };

// Second branch of a two-way path alternation such as `p | ^q`.
struct PathAlternative {
  std::string predicate;
  Direction direction = Direction::kForward;
};

// Forward matches (subject predicate object). Inverse matches a stored link
// (object predicate subject). With an alternative the template matches if
// either branch does; alternation requires constant predicates.
struct TripleTemplate {
  PatternTerm subject;
  PredicateTerm predicate;
  PatternTerm object;
  Direction direction = Direction::kForward;
  std::optional<PathAlternative> alternative;
};

using Pattern = std::vector<TripleTemplate>;
using Binding = std::map<std::string, Term, std::less<>>;

struct MatchOptions {
  bool distinct = true;
  // Sort keys; remaining variables break ties in name order. With no keys the
  // result is sorted by all bound values in variable-name order.
  std::vector<std::string> order_by;
  // When set, only links that belong to the context (directly, or through a
  // member subject node) are considered.
  std::optional<NodeId> context;
};

inline Variable var(std::string name) { return Variable{std::move(name)}; }
inline NodeId node_ref(std::string id) { return NodeId(std::move(id)); }

// Load failure carrying the 1-based line number of the offending record.
class CatalogParseError : public Error {
 public:
  CatalogParseError(std::size_t line, const std::string& detail)
      : Error(ErrorCode::kParseFailure, "line " + std::to_string(line) + ": " + detail),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class CatalogGraph {
 public:
  // Throws kDuplicateId, kUnknownContext, kInvalidArgument.
  NodeId add_node(Node node, const std::optional<NodeId>& context = std::nullopt);

  // Throws kUnknownNode, kDuplicateTriple, kUnknownContext, kInvalidArgument.
  LinkId add_link(const NodeId& subject, std::string predicate, Term object,
                  const std::optional<NodeId>& context = std::nullopt);

  void add_to_context(const NodeId& context, const NodeId& member);
  void add_link_to_context(const NodeId& context, LinkId link);

  // Properties are mutable; the kind is not.
  void set_property(const NodeId& id, std::string key, Scalar value);

  bool contains(const NodeId& id) const { return node_index_.count(id.value) != 0; }
  const Node* find_node(const NodeId& id) const;
  const Node& node(const NodeId& id) const;  // throws kUnknownNode
  const Link& link(LinkId id) const { return links_.at(id); }
  bool has_link(const NodeId& subject, std::string_view predicate, const Term& object) const;

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Link> links() const { return links_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  std::size_t count_of(NodeKind kind) const { return kind_counts_[static_cast<std::size_t>(kind)]; }

  const std::map<NodeId, ContextMembers>& contexts() const { return contexts_; }
  const ContextMembers* context_members(const NodeId& context) const;

  // Index-backed one-hop traversal.
  std::span<const LinkId> outgoing(const NodeId& subject, std::string_view predicate) const;
  std::span<const LinkId> incoming(const NodeId& object, std::string_view predicate) const;
  std::vector<NodeId> objects_of(const NodeId& subject, std::string_view predicate) const;
  std::vector<NodeId> subjects_of(std::string_view predicate, const NodeId& object) const;
  std::optional<Scalar> literal_of(const NodeId& subject, std::string_view predicate) const;
  std::span<const LinkId> with_literal(std::string_view predicate, const Scalar& value) const;

  // Throws kInvalidArgument for an empty or malformed pattern.
  std::vector<Binding> match_pattern(const Pattern& pattern, const MatchOptions& options = {}) const;

  void write(std::ostream& out) const;
  static CatalogGraph read(std::istream& in);
  void save(const std::filesystem::path& path) const;          // throws kIoFailure
  static CatalogGraph load(const std::filesystem::path& path);  // kIoFailure, CatalogParseError

  // Structural identity: same nodes, same link multiset, same context
  // membership (links compared by triple, not by id).
  friend bool operator==(const CatalogGraph& a, const CatalogGraph& b);

 private:
  using PredicateIndex = std::map<std::string, std::vector<LinkId>, std::less<>>;

  bool link_in_context(const Link& link, LinkId id, const ContextMembers& members) const;
  bool context_reaches(const NodeId& from, const NodeId& target) const;
  void require_context(const NodeId& context) const;

  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::vector<Link> links_;
  std::unordered_map<std::string, PredicateIndex> by_subject_;
  std::unordered_map<std::string, PredicateIndex> by_object_;
  PredicateIndex by_predicate_;
  std::map<std::string, std::map<Scalar, std::vector<LinkId>>, std::less<>> by_literal_;
  std::map<NodeId, ContextMembers> contexts_;
  std::size_t kind_counts_[kNodeKindCount] = {};
};

}  // namespace polyfed
