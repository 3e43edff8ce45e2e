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

#include "polyfed/provenance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "polyfed/schema_registry.h"
#include "polyfed/vocabulary.h"

namespace polyfed {
namespace {

constexpr std::string_view kStatusOpen = "open";
constexpr std::string_view kStatusClosed = "closed";

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void check_name(std::string_view what, std::string_view name) {
  if (name.empty()) throw Error(ErrorCode::kInvalidSchema, "empty " + std::string(what) + " name");
  for (unsigned char c : name) {
    if (c < 0x20 || c == 0x7f || c == '/' || c == '<' || c == '>') {
      throw Error(ErrorCode::kInvalidSchema,
                  std::string(what) + " name contains a reserved character: " + std::string(name));
    }
  }
}

// Sequential ids with a fixed-width counter so lexicographic order is
// creation order.
NodeId next_id(const CatalogGraph& catalog, NodeKind kind, std::string_view prefix) {
  for (std::size_t n = catalog.count_of(kind) + 1;; ++n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*s-%08zu", static_cast<int>(prefix.size()), prefix.data(), n);
    NodeId id = vocab::id(buf);
    if (!catalog.contains(id)) return id;
  }
}

std::string short_id(const NodeId& id) { return id.value.substr(vocab::id("").value.size()); }

NodeId ensure_provenance_context(CatalogGraph& catalog) {
  NodeId ctx = vocab::provenance_context();
  if (!catalog.contains(ctx)) {
    catalog.add_node(Node{ctx, NodeKind::kContext, {{std::string(vocab::kPropName), std::string("provenance")}}});
  }
  return ctx;
}

NodeId ensure_workflow(CatalogGraph& catalog, std::string_view name) {
  check_name("workflow", name);
  NodeId id = vocab::workflow(name);
  if (!catalog.contains(id)) {
    NodeId ctx = ensure_provenance_context(catalog);
    catalog.add_node(Node{id, NodeKind::kWorkflow, {{std::string(vocab::kPropName), std::string(name)}}}, ctx);
    catalog.add_link(id, std::string(vocab::kName), Term::literal(std::string(name)));
  }
  return id;
}

NodeId ensure_transformation(CatalogGraph& catalog, std::string_view workflow, std::string_view name) {
  NodeId wf = ensure_workflow(catalog, workflow);
  NodeId id = vocab::transformation(workflow, name);
  if (!catalog.contains(id)) {
    catalog.add_node(Node{id, NodeKind::kDataTransformation, {{std::string(vocab::kPropName), std::string(name)}}},
                     vocab::provenance_context());
    catalog.add_link(id, std::string(vocab::kName), Term::literal(std::string(name)));
    catalog.add_link(id, std::string(vocab::kIsTransformationOf), Term::node(wf));
  }
  return id;
}

NodeId resolve_lcs(const CatalogGraph& catalog, const LcsAttributeName& name) {
  auto fail = [&name](const std::string& why) -> Error {
    std::string qualified = (name.store.empty() ? "" : name.store + "/") + name.dataset + "." + name.attribute;
    return Error(ErrorCode::kUnresolvableAttribute, qualified + ": " + why);
  };
  if (!name.store.empty()) {
    if (auto id = find_lcs_attribute(catalog, name.store, name.dataset, name.attribute)) return *id;
    throw fail("no such LCS attribute");
  }
  std::optional<NodeId> found;
  for (const std::string& store : store_names(catalog)) {
    if (auto id = find_lcs_attribute(catalog, store, name.dataset, name.attribute)) {
      if (found) throw fail("dataset name is ambiguous across stores");
      found = id;
    }
  }
  if (!found) throw fail("no such LCS attribute");
  return *found;
}

void link_once(CatalogGraph& catalog, const NodeId& s, std::string_view p, const NodeId& o) {
  if (!catalog.has_link(s, p, Term::node(o))) catalog.add_link(s, std::string(p), Term::node(o));
}

const Node& open_execution(const CatalogGraph& catalog, std::string_view execution) {
  const Node* n = catalog.find_node(execution_node(execution));
  if (n == nullptr || n->kind != NodeKind::kWorkflowExecution) {
    throw Error(ErrorCode::kUnknownExecution, std::string(execution));
  }
  auto status = n->properties.find(vocab::kPropStatus);
  if (status != n->properties.end() && status->second == Scalar(std::string(kStatusClosed))) {
    throw Error(ErrorCode::kClosedExecution, std::string(execution));
  }
  return *n;
}

std::string text_of(const Term& t) {
  if (!t.is_node() && std::holds_alternative<std::string>(t.literal())) return std::get<std::string>(t.literal());
  return {};
}

}  // namespace

std::string_view to_string(ValueDirection direction) {
  return direction == ValueDirection::kUsed ? "used" : "generated";
}

std::optional<ValueDirection> parse_value_direction(std::string_view text) {
  if (text == "used") return ValueDirection::kUsed;
  if (text == "generated") return ValueDirection::kGenerated;
  return std::nullopt;
}

NodeId execution_node(std::string_view execution) { return vocab::id(execution); }

void register_workflow(CatalogGraph& catalog, const WorkflowDef& workflow) {
  check_name("workflow", workflow.name);
  std::set<std::string, std::less<>> names;
  for (const TransformationDef& t : workflow.transformations) {
    check_name("transformation", t.name);
    if (!names.insert(t.name).second) {
      throw Error(ErrorCode::kInvalidSchema, workflow.name + ": duplicate transformation " + t.name);
    }
    for (const auto& a : t.used) resolve_lcs(catalog, a);
    for (const auto& a : t.generated) resolve_lcs(catalog, a);
  }
  for (const TransformationDef& t : workflow.transformations) {
    NodeId dt = ensure_transformation(catalog, workflow.name, t.name);
    for (const auto& a : t.used) link_once(catalog, dt, vocab::kUsesAttribute, resolve_lcs(catalog, a));
    for (const auto& a : t.generated) link_once(catalog, dt, vocab::kGeneratesAttribute, resolve_lcs(catalog, a));
  }
  ensure_workflow(catalog, workflow.name);
}

std::string begin_workflow_execution(CatalogGraph& catalog, std::string_view workflow,
                                     std::optional<std::int64_t> started_at) {
  NodeId wf = ensure_workflow(catalog, workflow);
  NodeId id = next_id(catalog, NodeKind::kWorkflowExecution, "wfe");
  catalog.add_node(Node{id,
                        NodeKind::kWorkflowExecution,
                        {{std::string(vocab::kPropWorkflow), std::string(workflow)},
                         {std::string(vocab::kPropStatus), std::string(kStatusOpen)},
                         {std::string(vocab::kPropStartedAt), started_at.value_or(now_ms())}}},
                   vocab::provenance_context());
  catalog.add_link(id, std::string(vocab::kWasDerivedFromWorkflow), Term::node(wf));
  return short_id(id);
}

void record_transformation_execution(CatalogGraph& catalog, std::string_view execution,
                                     std::string_view transformation,
                                     std::span<const AttributeValueRecord> values) {
  const Node& wfe = open_execution(catalog, execution);
  check_name("transformation", transformation);
  std::vector<NodeId> attributes;
  for (const AttributeValueRecord& v : values) {
    attributes.push_back(resolve_lcs(catalog, v.attribute));
    if (const double* d = std::get_if<double>(&v.value); d && !std::isfinite(*d)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite attribute value");
    }
  }

  const NodeId wfe_id = wfe.id;
  const std::string workflow = std::get<std::string>(property(wfe, vocab::kPropWorkflow));
  NodeId dt = ensure_transformation(catalog, workflow, transformation);
  NodeId dte = next_id(catalog, NodeKind::kDataTransformationExecution, "dte");
  catalog.add_node(Node{dte,
                        NodeKind::kDataTransformationExecution,
                        {{std::string(vocab::kPropName), std::string(transformation)}}},
                   vocab::provenance_context());
  catalog.add_link(dte, std::string(vocab::kWasMemberOfWorkflowExecution), Term::node(wfe_id));
  catalog.add_link(dte, std::string(vocab::kWasDerivedFromDataTransformation), Term::node(dt));

  for (std::size_t i = 0; i < values.size(); ++i) {
    const AttributeValueRecord& v = values[i];
    NodeId atv = next_id(catalog, NodeKind::kAttributeValue, "atv");
    catalog.add_node(Node{atv,
                          NodeKind::kAttributeValue,
                          {{std::string(vocab::kPropDirection), std::string(to_string(v.direction))}}},
                     vocab::provenance_context());
    catalog.add_link(atv, std::string(vocab::kWasDerivedFromAttribute), Term::node(attributes[i]));
    catalog.add_link(atv, std::string(vocab::kValue), Term::literal(v.value));
    if (v.direction == ValueDirection::kGenerated) {
      catalog.add_link(atv, std::string(vocab::kWasGeneratedBy), Term::node(dte));
      link_once(catalog, dt, vocab::kGeneratesAttribute, attributes[i]);
    } else {
      catalog.add_link(dte, std::string(vocab::kUsed), Term::node(atv));
      link_once(catalog, dt, vocab::kUsesAttribute, attributes[i]);
    }
  }
}

void end_workflow_execution(CatalogGraph& catalog, std::string_view execution,
                            std::optional<std::int64_t> ended_at) {
  const Node& wfe = open_execution(catalog, execution);
  std::int64_t started = std::get<std::int64_t>(property(wfe, vocab::kPropStartedAt));
  if (ended_at && *ended_at < started) {
    throw Error(ErrorCode::kInvalidArgument, "execution " + std::string(execution) + " cannot end before it started");
  }
  NodeId id = wfe.id;
  catalog.set_property(id, std::string(vocab::kPropEndedAt), ended_at.value_or(std::max(started, now_ms())));
  catalog.set_property(id, std::string(vocab::kPropStatus), std::string(kStatusClosed));
}

ExecutionInfo execution_info(const CatalogGraph& catalog, std::string_view execution) {
  const Node* n = catalog.find_node(execution_node(execution));
  if (n == nullptr || n->kind != NodeKind::kWorkflowExecution) {
    throw Error(ErrorCode::kUnknownExecution, std::string(execution));
  }
  ExecutionInfo info;
  info.id = std::string(execution);
  info.workflow = std::get<std::string>(property(*n, vocab::kPropWorkflow));
  info.started_at = std::get<std::int64_t>(property(*n, vocab::kPropStartedAt));
  if (auto it = n->properties.find(vocab::kPropEndedAt); it != n->properties.end()) {
    info.ended_at = std::get<std::int64_t>(it->second);
  }
  info.open = property(*n, vocab::kPropStatus) == Scalar(std::string(kStatusOpen));
  return info;
}

std::vector<std::string> open_executions(const CatalogGraph& catalog) {
  std::vector<std::string> ids;
  for (const Node& n : catalog.nodes()) {
    if (n.kind != NodeKind::kWorkflowExecution) continue;
    if (property(n, vocab::kPropStatus) == Scalar(std::string(kStatusOpen))) ids.push_back(short_id(n.id));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> executions_of(const CatalogGraph& catalog, std::string_view workflow) {
  std::vector<std::string> ids;
  for (const NodeId& wfe : catalog.subjects_of(vocab::kWasDerivedFromWorkflow, vocab::workflow(workflow))) {
    ids.push_back(short_id(wfe));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool has_workflow(const CatalogGraph& catalog, std::string_view workflow) {
  const Node* n = catalog.find_node(vocab::workflow(workflow));
  return n != nullptr && n->kind == NodeKind::kWorkflow;
}

Pattern data_reference_pattern(std::string_view workflow) {
  auto p = [](std::string_view s) { return std::string(s); };
  Pattern pattern;
  pattern.push_back({var("atv"), p(vocab::kWasDerivedFromAttribute), var("att")});
  pattern.push_back({var("att"), p(vocab::kName), var("attName")});
  pattern.push_back({var("atv"), p(vocab::kWasGeneratedBy), var("dte"), Direction::kForward,
                     PathAlternative{p(vocab::kUsed), Direction::kInverse}});
  pattern.push_back({var("atv"), p(vocab::kValue), var("atvValue")});
  pattern.push_back({var("dte"), p(vocab::kWasMemberOfWorkflowExecution), var("wfe")});
  pattern.push_back({var("wfe"), p(vocab::kWasDerivedFromWorkflow), vocab::workflow(workflow)});
  pattern.push_back({var("att"), p(vocab::kIsAttributeOf), var("datasetSchema")});
  pattern.push_back({var("datasetSchema"), p(vocab::kName), var("datasetSchemaName")});
  pattern.push_back({var("att"), p(vocab::kIsStoredInStore), var("dataStore")});
  pattern.push_back({var("dataStore"), p(vocab::kName), var("dataStoreName")});
  return pattern;
}

namespace {

struct Candidate {
  std::string store;
  DataReference reference;
  ValueDirection direction;
};

// Identifier-valued solutions of the data-reference traversal, grouped by
// execution short id. Walks the indexes directly from the workflow node
// instead of going through the general matcher: this runs on every query
// and its cost grows with the number of captured executions.
std::map<std::string, std::vector<Candidate>> identifier_values(const CatalogGraph& catalog,
                                                                std::string_view workflow) {
  struct Location {
    std::string attribute;
    std::string dataset;
    std::string store;
  };
  // Per attribute: every (name, identified dataset, store) combination.
  std::map<std::string, std::vector<Location>, std::less<>> attribute_cache;
  auto names_of = [&](const NodeId& id) {
    std::vector<std::string> out;
    for (LinkId l : catalog.outgoing(id, vocab::kName)) out.push_back(text_of(catalog.link(l).object));
    return out;
  };
  auto locations = [&](const NodeId& att) -> const std::vector<Location>& {
    auto it = attribute_cache.find(att.value);
    if (it != attribute_cache.end()) return it->second;
    std::vector<Location> out;
    const std::vector<NodeId> identified = catalog.objects_of(att, vocab::kIsIdentifierOf);
    for (const NodeId& ds : catalog.objects_of(att, vocab::kIsAttributeOf)) {
      if (std::find(identified.begin(), identified.end(), ds) == identified.end()) continue;
      for (const std::string& att_name : names_of(att)) {
        for (const std::string& ds_name : names_of(ds)) {
          for (const NodeId& store : catalog.objects_of(att, vocab::kIsStoredInStore)) {
            for (const std::string& store_name : names_of(store)) out.push_back({att_name, ds_name, store_name});
          }
        }
      }
    }
    return attribute_cache.emplace(att.value, std::move(out)).first->second;
  };

  std::map<std::string, std::vector<Candidate>> grouped;
  auto visit_value = [&](std::vector<Candidate>& into, const NodeId& atv) {
    const Node* node = catalog.find_node(atv);
    if (node == nullptr) return;
    const auto direction = parse_value_direction(string_property(*node, vocab::kPropDirection));
    for (LinkId att_link : catalog.outgoing(atv, vocab::kWasDerivedFromAttribute)) {
      const Term& att = catalog.link(att_link).object;
      if (!att.is_node()) continue;
      const std::vector<Location>& where = locations(att.node_id());
      if (where.empty()) continue;
      for (LinkId v : catalog.outgoing(atv, vocab::kValue)) {
        const Term& value = catalog.link(v).object;
        if (value.is_node()) continue;
        for (const Location& loc : where) {
          into.push_back({loc.store, DataReference{loc.dataset, loc.attribute, value.literal()},
                          direction.value_or(ValueDirection::kGenerated)});
        }
      }
    }
  };

  for (LinkId wl : catalog.incoming(vocab::workflow(workflow), vocab::kWasDerivedFromWorkflow)) {
    const NodeId& wfe = catalog.link(wl).subject;
    std::vector<Candidate>& into = grouped[short_id(wfe)];
    for (LinkId ml : catalog.incoming(wfe, vocab::kWasMemberOfWorkflowExecution)) {
      const NodeId& dte = catalog.link(ml).subject;
      for (LinkId g : catalog.incoming(dte, vocab::kWasGeneratedBy)) visit_value(into, catalog.link(g).subject);
      for (LinkId u : catalog.outgoing(dte, vocab::kUsed)) {
        const Term& atv = catalog.link(u).object;
        if (atv.is_node()) visit_value(into, atv.node_id());
      }
    }
  }
  return grouped;
}

}  // namespace

std::vector<DataReferenceRow> data_references_for(const CatalogGraph& catalog, std::string_view workflow,
                                                  std::span<const std::string> stores) {
  if (!has_workflow(catalog, workflow)) throw Error(ErrorCode::kUnknownWorkflow, std::string(workflow));
  auto grouped = identifier_values(catalog, workflow);

  std::vector<DataReferenceRow> rows;
  for (const std::string& execution : executions_of(catalog, workflow)) {
    DataReferenceRow row{execution, {}};
    const auto& candidates = grouped[execution];
    for (const std::string& store : stores) {
      // Generated values win over used ones; within the winning direction
      // every candidate must name the same record.
      const Candidate* chosen = nullptr;
      for (const ValueDirection direction : {ValueDirection::kGenerated, ValueDirection::kUsed}) {
        for (const Candidate& c : candidates) {
          if (c.store != store || c.direction != direction) continue;
          if (chosen == nullptr) {
            chosen = &c;
          } else if (c.reference.dataset != chosen->reference.dataset ||
                     !(c.reference.value == chosen->reference.value)) {
            throw Error(ErrorCode::kConflictingReference,
                        "execution " + execution + " captured more than one " + store + " reference");
          }
        }
        if (chosen != nullptr) break;
      }
      if (chosen == nullptr) {
        throw Error(ErrorCode::kMissingReference, "store " + store + " has no reference in execution " + execution);
      }
      row.references.emplace(store, chosen->reference);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> referenced_stores(const CatalogGraph& catalog, std::string_view workflow) {
  std::set<std::string> stores;
  if (!has_workflow(catalog, workflow)) return {};
  for (const auto& [execution, candidates] : identifier_values(catalog, workflow)) {
    for (const Candidate& c : candidates) stores.insert(c.store);
  }
  return {stores.begin(), stores.end()};
}

}  // namespace polyfed
