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

#include "polyfed/catalog.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace polyfed {
namespace {

constexpr std::string_view kFileHeader = "# polyfed-catalog 1";

constexpr std::string_view kKindNames[kNodeKindCount] = {
    "Concept",
    "DatasetSchema",
    "Attribute",
    "DataStore",
    "Database",
    "DatabaseSchema",
    "Machine",
    "Workflow",
    "DataTransformation",
    "WorkflowExecution",
    "DataTransformationExecution",
    "AttributeValue",
    "Context",
};

void check_node_id(const NodeId& id) {
  if (id.value.empty()) throw Error(ErrorCode::kInvalidArgument, "empty node id");
  for (unsigned char c : id.value) {
    if (c < 0x20 || c == 0x7f || c == '<' || c == '>') {
      throw Error(ErrorCode::kInvalidArgument, "node id contains a reserved character: " + id.value);
    }
  }
}

void check_predicate(std::string_view predicate) {
  if (predicate.empty()) throw Error(ErrorCode::kInvalidArgument, "empty predicate");
  if (predicate.front() == '<' || predicate.front() == '#' || predicate.front() == '"') {
    throw Error(ErrorCode::kInvalidArgument, "predicate may not start with <, # or \": " + std::string(predicate));
  }
  for (unsigned char c : predicate) {
    if (c <= 0x20 || c == 0x7f) {
      throw Error(ErrorCode::kInvalidArgument, "predicate contains whitespace: " + std::string(predicate));
    }
  }
}

void check_scalar(const Scalar& value) {
  if (const double* d = std::get_if<double>(&value); d && !std::isfinite(*d)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite float literal");
  }
}

nlohmann::json scalar_to_json(const Scalar& value) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, value);
}

std::optional<Scalar> scalar_from_json(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::string: return Scalar(j.get<std::string>());
    case nlohmann::json::value_t::boolean: return Scalar(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return Scalar(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: {
      auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
      return Scalar(static_cast<std::int64_t>(u));
    }
    case nlohmann::json::value_t::number_float: return Scalar(j.get<double>());
    default: return std::nullopt;
  }
}

std::span<const LinkId> find_links(const std::map<std::string, std::vector<LinkId>, std::less<>>& index,
                                   std::string_view predicate) {
  auto it = index.find(predicate);
  if (it == index.end()) return {};
  return it->second;
}

}  // namespace

std::string_view to_string(NodeKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  for (std::size_t i = 0; i < kNodeKindCount; ++i) {
    if (kKindNames[i] == text) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

const Scalar* find_property(const Node& node, std::string_view key) {
  auto it = node.properties.find(key);
  return it == node.properties.end() ? nullptr : &it->second;
}

const Scalar& property(const Node& node, std::string_view key) {
  const Scalar* value = find_property(node, key);
  if (value == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "node " + node.id.value + " has no property " + std::string(key));
  }
  return *value;
}

std::string string_property(const Node& node, std::string_view key) {
  const Scalar* value = find_property(node, key);
  if (value == nullptr) return {};
  if (const auto* s = std::get_if<std::string>(value)) return *s;
  return {};
}

std::string Term::to_string() const {
  if (is_node()) return "<" + node_id().value + ">";
  return scalar_to_json(literal()).dump();
}

// ---------------------------------------------------------------------------
// Mutation

void CatalogGraph::require_context(const NodeId& context) const {
  const Node* n = find_node(context);
  if (n == nullptr || n->kind != NodeKind::kContext) {
    throw Error(ErrorCode::kUnknownContext, context.value);
  }
}

NodeId CatalogGraph::add_node(Node node, const std::optional<NodeId>& context) {
  check_node_id(node.id);
  for (const auto& [key, value] : node.properties) check_scalar(value);
  if (contains(node.id)) throw Error(ErrorCode::kDuplicateId, node.id.value);
  if (context) require_context(*context);

  NodeId id = node.id;
  node_index_.emplace(id.value, nodes_.size());
  ++kind_counts_[static_cast<std::size_t>(node.kind)];
  if (node.kind == NodeKind::kContext) contexts_.try_emplace(id);
  nodes_.push_back(std::move(node));
  if (context) add_to_context(*context, id);
  return id;
}

LinkId CatalogGraph::add_link(const NodeId& subject, std::string predicate, Term object,
                              const std::optional<NodeId>& context) {
  check_predicate(predicate);
  if (!contains(subject)) throw Error(ErrorCode::kUnknownNode, subject.value);
  if (object.is_node()) {
    if (!contains(object.node_id())) throw Error(ErrorCode::kUnknownNode, object.node_id().value);
  } else {
    check_scalar(object.literal());
  }
  if (context) require_context(*context);
  if (has_link(subject, predicate, object)) {
    throw Error(ErrorCode::kDuplicateTriple,
                "<" + subject.value + "> " + predicate + " " + object.to_string());
  }

  const LinkId id = links_.size();
  by_subject_[subject.value][predicate].push_back(id);
  if (object.is_node()) {
    by_object_[object.node_id().value][predicate].push_back(id);
  } else {
    by_literal_[predicate][object.literal()].push_back(id);
  }
  by_predicate_[predicate].push_back(id);
  links_.push_back(Link{subject, std::move(predicate), std::move(object)});
  if (context) add_link_to_context(*context, id);
  return id;
}

bool CatalogGraph::context_reaches(const NodeId& from, const NodeId& target) const {
  if (from == target) return true;
  auto it = contexts_.find(from);
  if (it == contexts_.end()) return false;
  for (const NodeId& member : it->second.nodes) {
    if (contexts_.count(member) != 0 && context_reaches(member, target)) return true;
  }
  return false;
}

void CatalogGraph::add_to_context(const NodeId& context, const NodeId& member) {
  require_context(context);
  const Node* n = find_node(member);
  if (n == nullptr) throw Error(ErrorCode::kUnknownNode, member.value);
  if (n->kind == NodeKind::kContext && context_reaches(member, context)) {
    throw Error(ErrorCode::kContextCycle, member.value + " already contains " + context.value);
  }
  contexts_[context].nodes.insert(member);
}

void CatalogGraph::add_link_to_context(const NodeId& context, LinkId link) {
  require_context(context);
  if (link >= links_.size()) throw Error(ErrorCode::kInvalidArgument, "unknown link #" + std::to_string(link));
  contexts_[context].links.insert(link);
}

void CatalogGraph::set_property(const NodeId& id, std::string key, Scalar value) {
  auto it = node_index_.find(id.value);
  if (it == node_index_.end()) throw Error(ErrorCode::kUnknownNode, id.value);
  check_scalar(value);
  nodes_[it->second].properties.insert_or_assign(std::move(key), std::move(value));
}

// ---------------------------------------------------------------------------
// Lookup

const Node* CatalogGraph::find_node(const NodeId& id) const {
  auto it = node_index_.find(id.value);
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

const Node& CatalogGraph::node(const NodeId& id) const {
  const Node* n = find_node(id);
  if (n == nullptr) throw Error(ErrorCode::kUnknownNode, id.value);
  return *n;
}

bool CatalogGraph::has_link(const NodeId& subject, std::string_view predicate, const Term& object) const {
  for (LinkId id : outgoing(subject, predicate)) {
    if (links_[id].object == object) return true;
  }
  return false;
}

const ContextMembers* CatalogGraph::context_members(const NodeId& context) const {
  auto it = contexts_.find(context);
  return it == contexts_.end() ? nullptr : &it->second;
}

std::span<const LinkId> CatalogGraph::outgoing(const NodeId& subject, std::string_view predicate) const {
  auto it = by_subject_.find(subject.value);
  if (it == by_subject_.end()) return {};
  return find_links(it->second, predicate);
}

std::span<const LinkId> CatalogGraph::incoming(const NodeId& object, std::string_view predicate) const {
  auto it = by_object_.find(object.value);
  if (it == by_object_.end()) return {};
  return find_links(it->second, predicate);
}

std::vector<NodeId> CatalogGraph::objects_of(const NodeId& subject, std::string_view predicate) const {
  std::vector<NodeId> out;
  for (LinkId id : outgoing(subject, predicate)) {
    if (links_[id].object.is_node()) out.push_back(links_[id].object.node_id());
  }
  return out;
}

std::vector<NodeId> CatalogGraph::subjects_of(std::string_view predicate, const NodeId& object) const {
  std::vector<NodeId> out;
  for (LinkId id : incoming(object, predicate)) out.push_back(links_[id].subject);
  return out;
}

std::optional<Scalar> CatalogGraph::literal_of(const NodeId& subject, std::string_view predicate) const {
  for (LinkId id : outgoing(subject, predicate)) {
    if (!links_[id].object.is_node()) return links_[id].object.literal();
  }
  return std::nullopt;
}

std::span<const LinkId> CatalogGraph::with_literal(std::string_view predicate, const Scalar& value) const {
  auto it = by_literal_.find(predicate);
  if (it == by_literal_.end()) return {};
  auto jt = it->second.find(value);
  if (jt == it->second.end()) return {};
  return jt->second;
}

bool CatalogGraph::link_in_context(const Link& link, LinkId id, const ContextMembers& members) const {
  return members.links.count(id) != 0 || members.nodes.count(link.subject) != 0;
}

// ---------------------------------------------------------------------------
// Pattern matching: backtracking over the templates, picking at each step the
// remaining template with the most bound positions and enumerating candidate
// links through the narrowest available index.

std::vector<Binding> CatalogGraph::match_pattern(const Pattern& pattern, const MatchOptions& options) const {
  if (pattern.empty()) throw Error(ErrorCode::kInvalidArgument, "empty pattern");
  if (pattern.size() > 64) throw Error(ErrorCode::kInvalidArgument, "pattern has more than 64 templates");

  std::vector<std::string> names;
  auto slot_of = [&names](const std::string& name) -> int {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<int>(it - names.begin());
    names.push_back(name);
    return static_cast<int>(names.size() - 1);
  };

  struct CTerm {
    int slot = -1;
    Term constant;
  };
  struct Branch {
    std::string predicate;  // empty when the predicate is a variable
    Direction direction;
  };
  struct CTemplate {
    CTerm subject;
    CTerm object;
    int predicate_slot = -1;
    std::vector<Branch> branches;
  };

  auto compile_term = [&](const PatternTerm& t) {
    CTerm c;
    if (const auto* v = std::get_if<Variable>(&t)) {
      if (v->name.empty()) throw Error(ErrorCode::kInvalidArgument, "unnamed variable");
      c.slot = slot_of(v->name);
    } else if (const auto* n = std::get_if<NodeId>(&t)) {
      c.constant = Term::node(*n);
    } else {
      c.constant = Term::literal(std::get<Scalar>(t));
    }
    return c;
  };

  std::vector<CTemplate> compiled;
  for (const TripleTemplate& t : pattern) {
    CTemplate c;
    c.subject = compile_term(t.subject);
    c.object = compile_term(t.object);
    if (const auto* v = std::get_if<Variable>(&t.predicate)) {
      if (t.alternative) {
        throw Error(ErrorCode::kInvalidArgument, "path alternation requires constant predicates");
      }
      c.predicate_slot = slot_of(v->name);
      c.branches.push_back({"", t.direction});
    } else {
      c.branches.push_back({std::get<std::string>(t.predicate), t.direction});
      if (t.alternative) c.branches.push_back({t.alternative->predicate, t.alternative->direction});
    }
    compiled.push_back(std::move(c));
  }
  for (const std::string& key : options.order_by) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      throw Error(ErrorCode::kInvalidArgument, "order_by variable not in pattern: " + key);
    }
  }

  const ContextMembers* scope = nullptr;
  if (options.context) {
    scope = context_members(*options.context);
    if (scope == nullptr) throw Error(ErrorCode::kUnknownContext, options.context->value);
  }

  std::vector<std::optional<Term>> slots(names.size());
  std::vector<std::vector<std::optional<Term>>> solutions;

  auto value_of = [&slots](const CTerm& t) -> const Term* {
    if (t.slot < 0) return &t.constant;
    return slots[t.slot] ? &*slots[t.slot] : nullptr;
  };

  // Binds `t` to `value` if free, otherwise checks equality. Returns false on
  // mismatch; records newly bound slots in `bound`.
  auto unify = [&slots](const CTerm& t, const Term& value, std::vector<int>& bound) {
    if (t.slot < 0) return t.constant == value;
    if (slots[t.slot]) return *slots[t.slot] == value;
    slots[t.slot] = value;
    bound.push_back(t.slot);
    return true;
  };

  auto candidates = [&](const CTemplate& t, const Branch& b, std::vector<LinkId>& out) {
    const CTerm& link_subject = b.direction == Direction::kForward ? t.subject : t.object;
    const CTerm& link_object = b.direction == Direction::kForward ? t.object : t.subject;
    const std::string* predicate = nullptr;
    std::optional<std::string> bound_predicate;
    if (!b.predicate.empty()) {
      predicate = &b.predicate;
    } else if (slots[t.predicate_slot]) {
      const Term& p = *slots[t.predicate_slot];
      if (p.is_node() || !std::holds_alternative<std::string>(p.literal())) return;
      bound_predicate = std::get<std::string>(p.literal());
      predicate = &*bound_predicate;
    }

    auto take_index = [&](const PredicateIndex& index) {
      if (predicate != nullptr) {
        auto ids = find_links(index, *predicate);
        out.insert(out.end(), ids.begin(), ids.end());
      } else {
        for (const auto& [p, ids] : index) out.insert(out.end(), ids.begin(), ids.end());
      }
    };

    if (const Term* s = value_of(link_subject)) {
      if (!s->is_node()) return;
      auto it = by_subject_.find(s->node_id().value);
      if (it != by_subject_.end()) take_index(it->second);
    } else if (const Term* o = value_of(link_object)) {
      if (o->is_node()) {
        auto it = by_object_.find(o->node_id().value);
        if (it != by_object_.end()) take_index(it->second);
      } else if (predicate != nullptr) {
        auto ids = with_literal(*predicate, o->literal());
        out.insert(out.end(), ids.begin(), ids.end());
      } else {
        for (const auto& [p, values] : by_literal_) {
          auto jt = values.find(o->literal());
          if (jt != values.end()) out.insert(out.end(), jt->second.begin(), jt->second.end());
        }
      }
    } else if (predicate != nullptr) {
      auto ids = find_links(by_predicate_, *predicate);
      out.insert(out.end(), ids.begin(), ids.end());
    } else {
      for (LinkId id = 0; id < links_.size(); ++id) out.push_back(id);
    }
  };

  auto score = [&](const CTemplate& t) {
    int s = 0;
    if (value_of(t.subject) != nullptr) s += 2;
    if (value_of(t.object) != nullptr) s += 2;
    if (t.predicate_slot < 0 || slots[t.predicate_slot]) s += 1;
    return s;
  };

  std::function<void(std::uint64_t)> search = [&](std::uint64_t remaining) {
    if (remaining == 0) {
      solutions.push_back(slots);
      return;
    }
    std::size_t best = compiled.size();
    int best_score = -1;
    for (std::size_t i = 0; i < compiled.size(); ++i) {
      if ((remaining & (std::uint64_t{1} << i)) == 0) continue;
      int s = score(compiled[i]);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    const CTemplate& t = compiled[best];
    const std::uint64_t rest = remaining & ~(std::uint64_t{1} << best);

    std::vector<LinkId> ids;
    std::vector<int> bound;
    for (const Branch& b : t.branches) {
      ids.clear();
      candidates(t, b, ids);
      const CTerm& link_subject = b.direction == Direction::kForward ? t.subject : t.object;
      const CTerm& link_object = b.direction == Direction::kForward ? t.object : t.subject;
      for (LinkId id : ids) {
        const Link& link = links_[id];
        if (!b.predicate.empty() && link.predicate != b.predicate) continue;
        if (scope != nullptr && !link_in_context(link, id, *scope)) continue;
        bound.clear();
        bool ok = true;
        if (t.predicate_slot >= 0) {
          ok = unify(CTerm{t.predicate_slot, {}}, Term::literal(link.predicate), bound);
        }
        ok = ok && unify(link_subject, Term::node(link.subject), bound);
        ok = ok && unify(link_object, link.object, bound);
        if (ok) search(rest);
        for (int slot : bound) slots[slot].reset();
      }
    }
  };
  search(compiled.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << compiled.size()) - 1);

  std::vector<Binding> results;
  results.reserve(solutions.size());
  for (auto& solution : solutions) {
    Binding b;
    for (std::size_t i = 0; i < names.size(); ++i) b.emplace(names[i], std::move(*solution[i]));
    results.push_back(std::move(b));
  }

  std::sort(results.begin(), results.end(), [&options](const Binding& a, const Binding& b) {
    for (const std::string& key : options.order_by) {
      const Term& x = a.find(key)->second;
      const Term& y = b.find(key)->second;
      if (x < y) return true;
      if (y < x) return false;
    }
    return a < b;
  });
  if (options.distinct) results.erase(std::unique(results.begin(), results.end()), results.end());
  return results;
}

// ---------------------------------------------------------------------------
// Persistence

void CatalogGraph::write(std::ostream& out) const {
  out << kFileHeader << '\n';
  for (const Node& n : nodes_) {
    nlohmann::json props = nlohmann::json::object();
    for (const auto& [key, value] : n.properties) props[key] = scalar_to_json(value);
    out << "N <" << n.id.value << "> " << to_string(n.kind) << ' ' << props.dump() << '\n';
  }
  for (const Link& l : links_) {
    out << "L <" << l.subject.value << "> " << l.predicate << ' ' << l.object.to_string() << '\n';
  }
  for (const auto& [context, members] : contexts_) {
    for (const NodeId& member : members.nodes) out << "C <" << context.value << "> <" << member.value << ">\n";
    for (LinkId link : members.links) out << "C <" << context.value << "> #" << link << '\n';
  }
}

namespace {

class LineReader {
 public:
  LineReader(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw CatalogParseError(line_, what); }

  void expect_space() {
    if (pos_ >= text_.size() || text_[pos_] != ' ') fail("expected a space at column " + std::to_string(pos_ + 1));
    ++pos_;
  }

  NodeId node_id() {
    if (pos_ >= text_.size() || text_[pos_] != '<') fail("expected <node-id> at column " + std::to_string(pos_ + 1));
    auto close = text_.find('>', pos_ + 1);
    if (close == std::string_view::npos) fail("unterminated <node-id>");
    NodeId id(std::string(text_.substr(pos_ + 1, close - pos_ - 1)));
    pos_ = close + 1;
    return id;
  }

  std::string_view word() {
    auto end = text_.find(' ', pos_);
    if (end == std::string_view::npos) end = text_.size();
    auto w = text_.substr(pos_, end - pos_);
    if (w.empty()) fail("expected a token at column " + std::to_string(pos_ + 1));
    pos_ = end;
    return w;
  }

  std::string_view rest() {
    auto r = text_.substr(pos_);
    pos_ = text_.size();
    return r;
  }

  bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  bool done() const { return pos_ >= text_.size(); }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

nlohmann::json parse_json(const LineReader& reader, std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    reader.fail(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

CatalogGraph CatalogGraph::read(std::istream& in) {
  CatalogGraph graph;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.size() < 2 || line[1] != ' ') throw CatalogParseError(number, "unknown record: " + line);
    LineReader r(std::string_view(line).substr(2), number);
    try {
      switch (line[0]) {
        case 'N': {
          NodeId id = r.node_id();
          r.expect_space();
          auto kind_text = r.word();
          auto kind = parse_node_kind(kind_text);
          if (!kind) r.fail("unknown node kind " + std::string(kind_text));
          r.expect_space();
          nlohmann::json props = parse_json(r, r.rest());
          if (!props.is_object()) r.fail("property map must be a JSON object");
          Node node{std::move(id), *kind, {}};
          for (const auto& [key, value] : props.items()) {
            auto scalar = scalar_from_json(value);
            if (!scalar) r.fail("property " + key + " is not a scalar");
            node.properties.emplace(key, std::move(*scalar));
          }
          graph.add_node(std::move(node));
          break;
        }
        case 'L': {
          NodeId subject = r.node_id();
          r.expect_space();
          std::string predicate(r.word());
          r.expect_space();
          Term object;
          if (r.at('<')) {
            object = Term::node(r.node_id());
            if (!r.done()) r.fail("trailing characters after object");
          } else {
            auto scalar = scalar_from_json(parse_json(r, r.rest()));
            if (!scalar) r.fail("link object is not a scalar literal");
            object = Term::literal(std::move(*scalar));
          }
          graph.add_link(subject, std::move(predicate), std::move(object));
          break;
        }
        case 'C': {
          NodeId context = r.node_id();
          r.expect_space();
          if (r.at('#')) {
            auto text = r.rest().substr(1);
            LinkId id = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
            if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
              r.fail("malformed link reference");
            }
            graph.add_link_to_context(context, id);
          } else {
            NodeId member = r.node_id();
            if (!r.done()) r.fail("trailing characters after member");
            graph.add_to_context(context, member);
          }
          break;
        }
        default:
          r.fail("unknown record type '" + std::string(1, line[0]) + "'");
      }
    } catch (const CatalogParseError&) {
      throw;
    } catch (const Error& e) {
      throw CatalogParseError(number, e.what());
    }
  }
  return graph;
}

void CatalogGraph::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  write(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

CatalogGraph CatalogGraph::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return read(in);
}

bool operator==(const CatalogGraph& a, const CatalogGraph& b) {
  if (a.nodes_.size() != b.nodes_.size() || a.links_.size() != b.links_.size()) return false;
  for (const Node& n : a.nodes_) {
    const Node* other = b.find_node(n.id);
    if (other == nullptr || !(*other == n)) return false;
  }

  auto less = [](const Link& x, const Link& y) {
    return std::tie(x.subject, x.predicate, x.object) < std::tie(y.subject, y.predicate, y.object);
  };
  auto sorted = [&less](std::vector<Link> v) {
    std::sort(v.begin(), v.end(), less);
    return v;
  };
  if (sorted(a.links_) != sorted(b.links_)) return false;

  if (a.contexts_.size() != b.contexts_.size()) return false;
  for (const auto& [id, members] : a.contexts_) {
    const ContextMembers* other = b.context_members(id);
    if (other == nullptr || other->nodes != members.nodes) return false;
    std::vector<Link> la, lb;
    for (LinkId l : members.links) la.push_back(a.links_[l]);
    for (LinkId l : other->links) lb.push_back(b.links_[l]);
    if (sorted(std::move(la)) != sorted(std::move(lb))) return false;
  }
  return true;
}

}  // namespace polyfed
