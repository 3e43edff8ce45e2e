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

#include "support/oracles.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

#include "polyfed/schema_registry.h"
#include "polyfed/stores.h"
#include "polyfed/vocabulary.h"

namespace polyfed::testing {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

template <class T>
const T& one_of(Rng& rng, const std::vector<T>& items) {
  return items[pick(rng, 0, items.size() - 1)];
}

CompareOp random_op(Rng& rng) {
  static const std::vector<CompareOp> ops{CompareOp::kEq, CompareOp::kNe, CompareOp::kLt,
                                          CompareOp::kLe, CompareOp::kGt, CompareOp::kGe};
  return one_of(rng, ops);
}

bool link_less(const Link& x, const Link& y) {
  return std::tie(x.subject, x.predicate, x.object) < std::tie(y.subject, y.predicate, y.object);
}

}  // namespace

bool oracle_compare(const Scalar& lhs, CompareOp op, const Scalar& rhs) {
  if (lhs.index() != rhs.index()) return false;
  int c = 0;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(rhs);
        c = x < y ? -1 : (y < x ? 1 : 0);
      },
      lhs);
  switch (op) {
    case CompareOp::kEq: return c == 0;
    case CompareOp::kNe: return c != 0;
    case CompareOp::kLt: return c < 0;
    case CompareOp::kLe: return c <= 0;
    case CompareOp::kGt: return c > 0;
    case CompareOp::kGe: return c >= 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Triple patterns

namespace {

bool bind_term(Binding& b, const PatternTerm& t, const Term& value) {
  if (const auto* v = std::get_if<Variable>(&t)) {
    auto it = b.find(v->name);
    if (it == b.end()) {
      b.emplace(v->name, value);
      return true;
    }
    return it->second == value;
  }
  if (const auto* n = std::get_if<NodeId>(&t)) return value == Term::node(*n);
  return value == Term::literal(std::get<Scalar>(t));
}

}  // namespace

std::vector<Binding> brute_force_match(const CatalogGraph& catalog, const Pattern& pattern,
                                       const MatchOptions& options) {
  const ContextMembers* scope = options.context ? catalog.context_members(*options.context) : nullptr;
  const auto links = catalog.links();
  std::vector<Binding> out;
  Binding current;

  std::function<void(std::size_t)> step = [&](std::size_t i) {
    if (i == pattern.size()) {
      out.push_back(current);
      return;
    }
    const TripleTemplate& t = pattern[i];
    std::vector<std::pair<const std::string*, Direction>> branches;
    branches.emplace_back(std::get_if<std::string>(&t.predicate), t.direction);
    if (t.alternative) branches.emplace_back(&t.alternative->predicate, t.alternative->direction);

    for (const auto& [predicate, direction] : branches) {
      for (LinkId id = 0; id < links.size(); ++id) {
        const Link& l = links[id];
        if (scope != nullptr && scope->links.count(id) == 0 && scope->nodes.count(l.subject) == 0) continue;
        Binding saved = current;
        bool ok = predicate != nullptr
                      ? l.predicate == *predicate
                      : bind_term(current, PatternTerm(std::get<Variable>(t.predicate)), Term::literal(l.predicate));
        const PatternTerm& s = direction == Direction::kForward ? t.subject : t.object;
        const PatternTerm& o = direction == Direction::kForward ? t.object : t.subject;
        ok = ok && bind_term(current, s, Term::node(l.subject)) && bind_term(current, o, l.object);
        if (ok) step(i + 1);
        current = std::move(saved);
      }
    }
  };
  step(0);

  std::sort(out.begin(), out.end(), [&](const Binding& a, const Binding& b) {
    for (const std::string& key : options.order_by) {
      const Term& x = a.at(key);
      const Term& y = b.at(key);
      if (x < y) return true;
      if (y < x) return false;
    }
    return a < b;
  });
  if (options.distinct) out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

const std::vector<std::string> kPredicates{"p", "q", "r", "name", "alias", "x:y/z#w"};

std::vector<Scalar> literal_pool() {
  return {Scalar(std::string("a")), Scalar(std::string("b")), Scalar(std::string("say \"hi\"\n\\")),
          Scalar(std::string("\xc3\xbcml")), Scalar(std::int64_t{1}), Scalar(std::int64_t{-7}),
          Scalar(1.0), Scalar(0.1), Scalar(true), Scalar(std::string("1"))};
}

Scalar random_property(Rng& rng) {
  switch (pick(rng, 0, 6)) {
    case 0: return std::string("plain");
    case 1: return std::string("tab\there \"quoted\" back\\slash \xe2\x82\xac");
    case 2: return std::int64_t(pick(rng, 0, 1000)) - 500;
    case 3: return std::numeric_limits<std::int64_t>::min();
    case 4: return std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
    case 5: return 5e-324;
    default: return chance(rng, 0.5);
  }
}

}  // namespace

CatalogGraph random_catalog(Rng& rng, std::size_t max_links) {
  CatalogGraph g;
  static const std::vector<std::string> stems{"hk://t/n", "hk://t/with space ", "hk://t/\xc3\xbc", "urn:x:\"q\"",
                                              "hk://t/#"};
  std::vector<NodeId> nodes, contexts;
  const std::size_t node_count = pick(rng, 0, 15);
  for (std::size_t i = 0; i < node_count; ++i) {
    Node n;
    n.id = NodeId(one_of(rng, stems) + std::to_string(i));
    n.kind = static_cast<NodeKind>(pick(rng, 0, kNodeKindCount - 1));
    for (std::size_t k = pick(rng, 0, 3); k > 0; --k) n.properties["k" + std::to_string(pick(rng, 0, 5))] = random_property(rng);
    std::optional<NodeId> ctx;
    if (!contexts.empty() && chance(rng, 0.3)) ctx = one_of(rng, contexts);
    if (n.kind == NodeKind::kContext) contexts.push_back(n.id);
    g.add_node(n, ctx);
    nodes.push_back(n.id);
  }
  // Nested contexts in both directions; cycles are refused and skipped.
  for (std::size_t i = 0; i + 1 < contexts.size(); ++i) {
    try {
      g.add_to_context(contexts[i + 1], contexts[i]);
      if (chance(rng, 0.3)) g.add_to_context(contexts[i], contexts[i + 1]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kContextCycle) throw;
    }
  }
  if (nodes.empty()) return g;

  const std::vector<Scalar> literals = literal_pool();
  const std::size_t link_count = pick(rng, 0, max_links);
  for (std::size_t i = 0; i < link_count; ++i) {
    const NodeId& s = one_of(rng, nodes);
    const std::string& p = one_of(rng, kPredicates);
    Term o = chance(rng, 0.6) ? Term::node(one_of(rng, nodes)) : Term::literal(one_of(rng, literals));
    std::optional<NodeId> ctx;
    if (!contexts.empty() && chance(rng, 0.2)) ctx = one_of(rng, contexts);
    if (g.has_link(s, p, o)) continue;
    g.add_link(s, p, std::move(o), ctx);
  }
  return g;
}

Pattern random_pattern(Rng& rng, const CatalogGraph& catalog, std::size_t max_templates) {
  static const std::vector<std::string> vars{"a", "b", "c"};
  const std::vector<Scalar> literals = literal_pool();
  std::vector<NodeId> nodes;
  for (const Node& n : catalog.nodes()) nodes.push_back(n.id);
  nodes.push_back(NodeId("hk://t/absent"));

  auto term = [&](bool object) -> PatternTerm {
    const std::size_t roll = pick(rng, 0, 9);
    if (roll < 6) return var(one_of(rng, vars));
    if (object && roll >= 8) return one_of(rng, literals);
    return one_of(rng, nodes);
  };

  Pattern pattern;
  const std::size_t n = pick(rng, 1, max_templates);
  for (std::size_t i = 0; i < n; ++i) {
    TripleTemplate t;
    t.subject = term(false);
    t.object = term(true);
    t.direction = chance(rng, 0.25) ? Direction::kInverse : Direction::kForward;
    if (chance(rng, 0.15)) {
      t.predicate = var(chance(rng, 0.8) ? "p" : one_of(rng, vars));
    } else {
      t.predicate = one_of(rng, kPredicates);
      if (chance(rng, 0.2)) {
        t.alternative = PathAlternative{one_of(rng, kPredicates),
                                        chance(rng, 0.5) ? Direction::kInverse : Direction::kForward};
      }
    }
    pattern.push_back(std::move(t));
  }
  return pattern;
}

CatalogStructure structure_of(const CatalogGraph& catalog) {
  CatalogStructure s;
  s.nodes.assign(catalog.nodes().begin(), catalog.nodes().end());
  std::sort(s.nodes.begin(), s.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  s.links.assign(catalog.links().begin(), catalog.links().end());
  std::sort(s.links.begin(), s.links.end(), link_less);
  for (const auto& [ctx, members] : catalog.contexts()) {
    for (const NodeId& n : members.nodes) s.node_members.emplace_back(ctx, n);
    for (LinkId l : members.links) s.link_members.emplace_back(ctx, catalog.link(l));
  }
  std::sort(s.node_members.begin(), s.node_members.end());
  std::sort(s.link_members.begin(), s.link_members.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return link_less(a.second, b.second);
  });
  return s;
}

// ---------------------------------------------------------------------------
// Provenance traversal

namespace {

// The provenance half of the data-reference traversal, written out here
// rather than taken from the library, with the capture direction fixed.
Pattern reference_pattern(std::string_view workflow, ValueDirection direction) {
  auto p = [](std::string_view s) { return std::string(s); };
  Pattern pattern;
  pattern.push_back({var("atv"), p(vocab::kWasDerivedFromAttribute), var("att")});
  pattern.push_back({var("att"), p(vocab::kName), var("attName")});
  if (direction == ValueDirection::kGenerated) {
    pattern.push_back({var("atv"), p(vocab::kWasGeneratedBy), var("dte")});
  } else {
    pattern.push_back({var("dte"), p(vocab::kUsed), var("atv")});
  }
  pattern.push_back({var("atv"), p(vocab::kValue), var("atvValue")});
  pattern.push_back({var("dte"), p(vocab::kWasMemberOfWorkflowExecution), var("wfe")});
  pattern.push_back({var("wfe"), p(vocab::kWasDerivedFromWorkflow), vocab::workflow(workflow)});
  pattern.push_back({var("att"), p(vocab::kIsAttributeOf), var("datasetSchema")});
  pattern.push_back({var("datasetSchema"), p(vocab::kName), var("datasetSchemaName")});
  pattern.push_back({var("att"), p(vocab::kIsStoredInStore), var("dataStore")});
  pattern.push_back({var("dataStore"), p(vocab::kName), var("dataStoreName")});
  // Identifier attributes only.
  pattern.push_back({var("att"), p(vocab::kIsIdentifierOf), var("datasetSchema")});
  return pattern;
}

std::string short_of(const Term& wfe) { return wfe.node_id().value.substr(vocab::id("").value.size()); }

std::string text(const Term& t) { return std::get<std::string>(t.literal()); }

}  // namespace

ReferenceOracle brute_force_references(const CatalogGraph& catalog, std::string_view workflow) {
  ReferenceOracle out;
  const Pattern executions{{var("wfe"), std::string(vocab::kWasDerivedFromWorkflow), vocab::workflow(workflow)}};
  for (const Binding& b : brute_force_match(catalog, executions)) out.executions.push_back(short_of(b.at("wfe")));
  std::sort(out.executions.begin(), out.executions.end());

  using Key = std::pair<std::string, std::string>;  // execution, store
  std::map<Key, std::set<std::pair<std::string, std::string>>> seen_attr;
  std::map<Key, std::vector<DataReference>> by_direction[2];
  const ValueDirection directions[2] = {ValueDirection::kGenerated, ValueDirection::kUsed};
  for (int d = 0; d < 2; ++d) {
    for (const Binding& b : brute_force_match(catalog, reference_pattern(workflow, directions[d]))) {
      if (b.at("atvValue").is_node()) continue;
      const Key key{short_of(b.at("wfe")), text(b.at("dataStoreName"))};
      by_direction[d][key].push_back(
          DataReference{text(b.at("datasetSchemaName")), text(b.at("attName")), b.at("atvValue").literal()});
    }
  }
  std::set<Key> keys;
  for (const auto& m : by_direction) {
    for (const auto& [k, v] : m) keys.insert(k);
  }
  for (const Key& key : keys) {
    const auto& refs = by_direction[0].count(key) ? by_direction[0].at(key) : by_direction[1].at(key);
    const DataReference& first = refs.front();
    for (const DataReference& r : refs) {
      if (r.dataset != first.dataset || !(r.value == first.value)) {
        out.conflicts.push_back(key);
        break;
      }
    }
    out.chosen[key.first].emplace(key.second, first);
  }
  return out;
}

CatalogGraph random_provenance_catalog(Rng& rng, std::size_t max_executions) {
  CatalogGraph g;
  // A small two-store schema, kept inline so this generator stands alone.
  DatasetSchemaDef entity{"Item", {{"key"}, {"label"}}, "key", {}};
  register_gcs(g, std::vector<DatasetSchemaDef>{entity});
  DataStoreDescriptor rel{"Rel", StoreKind::kRelationalDB, "m1", {{"db", {{"s", {{"Rows", {{"id"}, {"label"}}, "id", {}}}}}}}, {}};
  DataStoreDescriptor doc{"Doc", StoreKind::kDocumentDB, "m2", {{"db", {{"s", {{"Docs", {{"oid"}, {"label"}}, "oid", {}}}}}}}, {}};
  DataStoreDescriptor tri{"Tri", StoreKind::kTripleStore, "m2", {{"kb", {{"r", {{"Things", {{"URI"}, {"label"}}, "URI", {}}}}}}}, {}};
  for (const auto& d : {rel, doc, tri}) register_lcs(g, d);

  struct Target {
    std::string store, dataset, identifier;
  };
  const std::vector<Target> targets{{"Rel", "Rows", "id"}, {"Doc", "Docs", "oid"}, {"Tri", "Things", "URI"}};
  const std::vector<std::string> workflows{"wf_a", "wf_b"};
  const std::size_t n = pick(rng, 0, max_executions);
  for (std::size_t e = 0; e < n; ++e) {
    const std::string exec = begin_workflow_execution(g, one_of(rng, workflows), std::int64_t(e));
    for (std::size_t t = pick(rng, 0, 3); t > 0; --t) {
      std::vector<AttributeValueRecord> values;
      for (std::size_t v = pick(rng, 1, 3); v > 0; --v) {
        const Target& target = one_of(rng, targets);
        const bool id = chance(rng, 0.75);
        Scalar value = target.store == "Tri" ? Scalar("http://x/" + std::to_string(pick(rng, 0, 3)))
                                             : Scalar(std::int64_t(pick(rng, 0, 3)));
        values.push_back({{chance(rng, 0.5) ? target.store : "", target.dataset, id ? target.identifier : "label"},
                          std::move(value),
                          chance(rng, 0.6) ? ValueDirection::kGenerated : ValueDirection::kUsed});
      }
      record_transformation_execution(g, exec, "t" + std::to_string(pick(rng, 0, 2)), values);
    }
    if (chance(rng, 0.7)) end_workflow_execution(g, exec, std::int64_t(e + 10));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Federation instances

namespace {

Scalar random_value(Rng& rng, bool numeric) {
  if (numeric) return std::int64_t(pick(rng, 0, 3));
  static const std::vector<std::string> words{"x", "y", "z", "it's"};
  return one_of(rng, words);
}

// Every row a record yields over `columns`: the cartesian product of the
// attribute values, none when an attribute is missing.
std::vector<std::map<std::string, Scalar>> expand(const Record& record, const std::vector<std::string>& columns) {
  std::vector<std::map<std::string, Scalar>> rows{{}};
  for (const std::string& c : columns) {
    auto it = record.find(c);
    if (it == record.end() || it->second.empty()) return {};
    std::vector<std::map<std::string, Scalar>> next;
    for (const auto& partial : rows) {
      for (const Scalar& v : it->second) {
        auto row = partial;
        row[c] = v;
        next.push_back(std::move(row));
      }
    }
    rows = std::move(next);
  }
  return rows;
}

}  // namespace

Instance random_instance(Rng& rng, const InstanceSpec& spec) {
  Instance inst;
  struct KindInfo {
    StoreKind kind;
    std::string prefix, dataset, identifier;
  };
  std::vector<KindInfo> kinds{{StoreKind::kRelationalDB, "rel", "RelTable", "id"},
                              {StoreKind::kDocumentDB, "doc", "doc_coll", "identifier"},
                              {StoreKind::kTripleStore, "tri", "Class", "URI"},
                              {StoreKind::kFileSystem, "fs", "Files ", "path"}};
  std::shuffle(kinds.begin(), kinds.end(), rng);
  const std::size_t store_count = pick(rng, 2, 4);

  const std::size_t gcs_count = 6;
  for (std::size_t k = 0; k < gcs_count; ++k) inst.gcs_attributes.push_back("g" + std::to_string(k));

  // Per store attribute: whether its values are numeric.
  std::vector<std::map<std::string, bool>> numeric(store_count);
  for (std::size_t s = 0; s < store_count; ++s) {
    StoreTruth st;
    st.kind = kinds[s].kind;
    st.name = kinds[s].prefix + std::to_string(s);
    st.dataset = kinds[s].dataset + std::to_string(s);
    st.identifier = kinds[s].identifier;
    st.attributes.push_back(st.identifier);
    if (st.kind == StoreKind::kFileSystem) {
      st.attributes.push_back("size");
      numeric[s]["size"] = true;
    }
    for (std::size_t a = pick(rng, 2, 4); a > 0; --a) {
      const std::string name = "a" + std::to_string(st.attributes.size());
      st.attributes.push_back(name);
      numeric[s][name] = chance(rng, 0.5);
    }
    inst.stores.push_back(std::move(st));
  }

  // Aliases: the global identifier goes everywhere; g0 maps to exactly one
  // store so that every instance has something to project.
  std::set<std::pair<std::size_t, std::string>> used;
  for (std::size_t s = 0; s < store_count; ++s) inst.aliases["uri"].push_back({s, inst.stores[s].identifier});
  for (std::size_t k = 0; k < gcs_count; ++k) {
    std::size_t targets = k == 0 ? 1 : pick(rng, 0, 6) == 0 ? 0 : (chance(rng, 0.6) ? 1 : 2);
    std::vector<std::size_t> order(store_count);
    for (std::size_t s = 0; s < store_count; ++s) order[s] = s;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t s : order) {
      if (targets == 0) break;
      for (const std::string& a : inst.stores[s].attributes) {
        if (a == inst.stores[s].identifier || used.count({s, a})) continue;
        used.insert({s, a});
        inst.aliases[inst.gcs_attributes[k]].push_back({s, a});
        --targets;
        break;
      }
    }
  }

  // Records.
  for (std::size_t s = 0; s < store_count; ++s) {
    StoreTruth& st = inst.stores[s];
    const bool string_ids = st.kind == StoreKind::kTripleStore || st.kind == StoreKind::kFileSystem;
    std::vector<std::size_t> keys(10);
    for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = i;
    std::shuffle(keys.begin(), keys.end(), rng);
    const std::size_t rows = std::min(pick(rng, 0, spec.max_rows), string_ids ? keys.size() : spec.max_rows);
    for (std::size_t r = 0; r < rows; ++r) {
      Record rec;
      if (string_ids) {
        rec[st.identifier] = {Scalar(std::string(st.kind == StoreKind::kTripleStore ? "http://x/s" : "/f/") +
                                     std::to_string(keys[r]))};
      } else {
        rec[st.identifier] = {Scalar(std::int64_t(pick(rng, 1, 8)))};
      }
      for (const std::string& a : st.attributes) {
        if (a == st.identifier) continue;
        if (a != "size" && chance(rng, spec.missing_rate)) continue;
        std::vector<Scalar> values{random_value(rng, numeric[s][a])};
        if (st.kind == StoreKind::kTripleStore && chance(rng, 0.2)) {
          Scalar extra = random_value(rng, numeric[s][a]);
          if (!(extra == values.front())) values.push_back(std::move(extra));
        }
        rec[a] = std::move(values);
      }
      st.records.push_back(std::move(rec));
    }
  }

  // Catalog.
  DatasetSchemaDef entity{inst.entity, {{"uri"}}, "uri", {}};
  for (const auto& g : inst.gcs_attributes) entity.attributes.push_back({g});
  register_gcs(inst.catalog, std::vector<DatasetSchemaDef>{entity});
  for (const StoreTruth& st : inst.stores) {
    DatasetSchemaDef ds{st.dataset, {}, st.identifier, {}};
    for (const auto& a : st.attributes) ds.attributes.push_back({a});
    register_lcs(inst.catalog, {st.name, st.kind, "host-" + st.name, {{"db", {{"main", {ds}}}}}, {}});
  }
  for (const auto& [g, targets] : inst.aliases) {
    for (const auto& [s, a] : targets) {
      create_alias(inst.catalog, {inst.entity + "." + g, inst.stores[s].dataset + "." + a, inst.stores[s].name});
    }
  }

  // Executions: every store gets a reference, sometimes to a record that
  // does not exist. A second transformation reads the same identifiers back.
  const std::size_t executions = pick(rng, 1, spec.max_executions);
  for (std::size_t e = 0; e < executions; ++e) {
    const std::string id = begin_workflow_execution(inst.catalog, inst.workflow, std::int64_t(1000 + e));
    std::vector<Scalar> refs;
    std::vector<AttributeValueRecord> generated, consumed;
    for (const StoreTruth& st : inst.stores) {
      Scalar ref;
      if (!st.records.empty() && chance(rng, 0.8)) {
        ref = one_of(rng, st.records).at(st.identifier).front();
      } else if (st.kind == StoreKind::kTripleStore) {
        ref = std::string("http://x/absent");
      } else if (st.kind == StoreKind::kFileSystem) {
        ref = std::string("/f/absent");
      } else {
        ref = std::int64_t(99);
      }
      generated.push_back({{st.name, st.dataset, st.identifier}, ref, ValueDirection::kGenerated});
      consumed.push_back({{st.name, st.dataset, st.identifier}, ref, ValueDirection::kUsed});
      if (chance(rng, 0.3)) {
        generated.push_back(
            {{st.name, st.dataset, st.attributes.back()}, random_value(rng, true), ValueDirection::kGenerated});
      }
      refs.push_back(std::move(ref));
    }
    record_transformation_execution(inst.catalog, id, "produce", generated);
    if (chance(rng, 0.5)) record_transformation_execution(inst.catalog, id, "consume", consumed);
    end_workflow_execution(inst.catalog, id, std::int64_t(2000 + e));
    inst.executions.push_back(id);
    inst.references.push_back(std::move(refs));
  }
  return inst;
}

AdapterMap instance_adapters(const Instance& instance, bool pushdown) {
  AdapterMap out;
  for (const StoreTruth& st : instance.stores) {
    switch (st.kind) {
      case StoreKind::kRelationalDB: {
        auto store = std::make_shared<RelationalStore>(st.name, pushdown);
        std::vector<RelationalStore::Column> columns;
        for (const auto& a : st.attributes) {
          // A column's type follows the first value seen; ids are integers.
          auto type = RelationalStore::ColumnType::kInt;
          for (const Record& r : st.records) {
            auto it = r.find(a);
            if (it != r.end()) {
              if (std::holds_alternative<std::string>(it->second.front())) type = RelationalStore::ColumnType::kString;
              break;
            }
          }
          columns.push_back({a, type});
        }
        store->create_table(st.dataset, columns);
        for (const Record& r : st.records) {
          OptionalRow row;
          for (const auto& a : st.attributes) {
            auto it = r.find(a);
            row.push_back(it == r.end() ? std::nullopt : std::optional<Scalar>(it->second.front()));
          }
          store->insert(st.dataset, std::move(row));
        }
        out.emplace(st.name, store);
        break;
      }
      case StoreKind::kDocumentDB: {
        auto store = std::make_shared<DocumentStore>(st.name, pushdown);
        store->create_collection(st.dataset, st.attributes);
        for (const Record& r : st.records) {
          Document d;
          for (const auto& [k, v] : r) d.emplace(k, v.front());
          store->insert(st.dataset, std::move(d));
        }
        out.emplace(st.name, store);
        break;
      }
      case StoreKind::kTripleStore: {
        auto store = std::make_shared<TripleStore>(st.name, pushdown);
        std::vector<std::string> props;
        for (const auto& a : st.attributes) {
          if (a != st.identifier) props.push_back(a);
        }
        store->declare_class(st.dataset, props);
        for (const Record& r : st.records) {
          const std::string subject = std::get<std::string>(r.at(st.identifier).front());
          store->add(subject, std::string(TripleStore::kTypePredicate), st.dataset);
          for (const auto& [k, values] : r) {
            if (k == st.identifier) continue;
            for (const Scalar& v : values) store->add(subject, k, v);
          }
        }
        out.emplace(st.name, store);
        break;
      }
      case StoreKind::kFileSystem: {
        auto store = std::make_shared<FileMetaStore>(st.name, pushdown);
        std::vector<std::string> keys;
        for (const auto& a : st.attributes) {
          if (a != "path" && a != "size") keys.push_back(a);
        }
        store->create_dataset(st.dataset, keys);
        for (const Record& r : st.records) {
          Document meta;
          for (const auto& [k, v] : r) {
            if (k != "path" && k != "size") meta.emplace(k, v.front());
          }
          store->add_file(st.dataset, std::get<std::string>(r.at("path").front()),
                          std::get<std::int64_t>(r.at("size").front()), std::move(meta));
        }
        out.emplace(st.name, store);
        break;
      }
    }
  }
  return out;
}

GlobalQuery random_query(Rng& rng, const Instance& instance) {
  std::vector<std::string> projectable, filterable;
  for (const auto& [g, targets] : instance.aliases) {
    if (targets.size() == 1) projectable.push_back(g);
    if (!targets.empty() && (g != "uri" || chance(rng, 0.1))) filterable.push_back(g);
  }
  GlobalQuery q;
  q.subject_entity = instance.entity;
  q.workflow = instance.workflow;
  for (std::size_t n = pick(rng, 1, 4); n > 0; --n) q.projections.push_back({instance.entity, one_of(rng, projectable)});
  for (std::size_t n = pick(rng, 0, 2); n > 0; --n) {
    const std::string g = one_of(rng, filterable);
    q.filters.push_back({{instance.entity, g}, random_op(rng), random_value(rng, chance(rng, 0.5))});
  }
  return q;
}

std::vector<Row> nested_loop_oracle(const Instance& instance, const GlobalQuery& query, bool extra_stores) {
  const std::size_t n = instance.stores.size();
  // Per store: needed columns, projected columns, filters.
  std::vector<std::vector<std::string>> needed(n);
  std::vector<std::vector<std::pair<std::string, const QueryFilter*>>> filters(n);
  std::vector<bool> involved(n, false);
  auto need = [&](std::size_t s, const std::string& a) {
    if (std::find(needed[s].begin(), needed[s].end(), a) == needed[s].end()) needed[s].push_back(a);
    involved[s] = true;
  };
  std::vector<std::pair<std::size_t, std::string>> outputs;
  for (const auto& p : query.projections) {
    const auto& target = instance.aliases.at(p.attribute).front();
    need(target.first, target.second);
    outputs.push_back(target);
  }
  for (const auto& f : query.filters) {
    for (const auto& [s, a] : instance.aliases.at(f.attribute.attribute)) {
      need(s, a);
      filters[s].push_back({a, &f});
    }
  }
  // Extras join on nothing, so they must not become involved here.
  std::vector<bool> used = involved;
  for (std::size_t s = 0; s < n; ++s) {
    if (!involved[s] && !extra_stores) continue;
    auto& cols = needed[s];
    const std::string& id = instance.stores[s].identifier;
    if (std::find(cols.begin(), cols.end(), id) == cols.end()) cols.push_back(id);
    used[s] = true;
  }

  std::set<Row> out;
  for (std::size_t e = 0; e < instance.executions.size(); ++e) {
    // Candidate rows per store for this execution.
    std::vector<std::vector<std::map<std::string, Scalar>>> candidates(n);
    bool empty = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!used[s]) continue;
      const StoreTruth& st = instance.stores[s];
      for (const Record& r : st.records) {
        for (auto& row : expand(r, needed[s])) {
          if (involved[s] &&
              !oracle_compare(row.at(st.identifier), CompareOp::kEq, instance.references[e][s])) {
            continue;
          }
          bool keep = true;
          for (const auto& [a, f] : filters[s]) keep = keep && oracle_compare(row.at(a), f->op, f->value);
          if (keep) candidates[s].push_back(std::move(row));
        }
      }
      if (candidates[s].empty()) empty = true;
    }
    if (empty) continue;

    std::vector<std::size_t> choice(n, 0);
    std::function<void(std::size_t)> combine = [&](std::size_t s) {
      if (s == n) {
        Row row;
        for (const auto& [os, a] : outputs) row.push_back(candidates[os][choice[os]].at(a));
        out.insert(std::move(row));
        return;
      }
      if (candidates[s].empty()) {
        combine(s + 1);
        return;
      }
      for (choice[s] = 0; choice[s] < candidates[s].size(); ++choice[s]) combine(s + 1);
    };
    combine(0);
  }
  return {out.begin(), out.end()};
}

std::vector<Row> sorted(std::vector<Row> rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

// ---------------------------------------------------------------------------
// SQL

std::map<std::string, SqlTable> instance_tables(const Instance& instance) {
  std::map<std::string, SqlTable> out;
  for (const StoreTruth& st : instance.stores) {
    SqlTable& table = out[sql_table_name(st.dataset)];
    for (const Record& r : st.records) {
      // Present attributes only; an absent one reads as NULL.
      std::vector<std::string> present;
      for (const auto& [k, v] : r) present.push_back(k);
      for (auto& row : expand(r, present)) table.push_back(std::move(row));
    }
  }
  return out;
}

namespace {

struct Token {
  enum Kind { kWord, kQuoted, kString, kNumber, kPunct, kEnd } kind;
  std::string text;
};

std::vector<Token> sql_tokens(const std::string& sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) { throw std::runtime_error("sql: " + what + " at " + std::to_string(i)); };
  while (i < sql.size()) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < sql.size() && (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '_')) ++j;
      out.push_back({Token::kWord, sql.substr(i, j - i)});
      i = j;
    } else if (c == '"' || c == '\'') {
      std::string body;
      ++i;
      for (;;) {
        if (i >= sql.size()) fail("unterminated quote");
        if (sql[i] == c) {
          if (i + 1 < sql.size() && sql[i + 1] == c) {
            body += c;
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        body += sql[i++];
      }
      out.push_back({c == '"' ? Token::kQuoted : Token::kString, body});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && i + 1 < sql.size() && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      std::size_t j = i + 1;
      while (j < sql.size() && (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '.' ||
                                ((sql[j] == '-' || sql[j] == '+') && (sql[j - 1] == 'e' || sql[j - 1] == 'E')))) {
        ++j;
      }
      out.push_back({Token::kNumber, sql.substr(i, j - i)});
      i = j;
    } else if (c == '<' || c == '>') {
      std::string op(1, c);
      if (i + 1 < sql.size() && (sql[i + 1] == '=' || (c == '<' && sql[i + 1] == '>'))) op += sql[i + 1];
      out.push_back({Token::kPunct, op});
      i += op.size();
    } else if (c == '(' || c == ')' || c == ',' || c == '.' || c == '=') {
      out.push_back({Token::kPunct, std::string(1, c)});
      ++i;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::kEnd, ""});
  return out;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

struct ColumnRef {
  std::string alias, column;
};
using Operand = std::variant<ColumnRef, Scalar>;
struct Predicate {
  Operand lhs;
  CompareOp op;
  Operand rhs;
};

class SqlParser {
 public:
  explicit SqlParser(const std::string& sql) : t_(sql_tokens(sql)) {}

  const Token& peek() const { return t_[i_]; }
  Token next() { return t_[i_++]; }
  bool keyword(const std::string& k) {
    if (peek().kind == Token::kWord && upper(peek().text) == k) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect_keyword(const std::string& k) {
    if (!keyword(k)) throw std::runtime_error("sql: expected " + k + ", found '" + peek().text + "'");
  }
  bool punct(const std::string& p) {
    if (peek().kind == Token::kPunct && peek().text == p) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(const std::string& p) {
    if (!punct(p)) throw std::runtime_error("sql: expected '" + p + "', found '" + peek().text + "'");
  }
  std::string word() {
    if (peek().kind != Token::kWord) throw std::runtime_error("sql: expected a name, found '" + peek().text + "'");
    return next().text;
  }
  ColumnRef column() {
    ColumnRef c{word(), ""};
    expect(".");
    if (peek().kind == Token::kQuoted || peek().kind == Token::kWord) {
      c.column = next().text;
    } else {
      throw std::runtime_error("sql: expected a column after " + c.alias + ".");
    }
    return c;
  }
  Scalar literal() {
    const Token t = next();
    if (t.kind == Token::kString) return t.text;
    if (t.kind == Token::kNumber) {
      if (t.text.find_first_of(".eE") != std::string::npos || t.text.find("inf") != std::string::npos) {
        return std::stod(t.text);
      }
      return std::int64_t(std::stoll(t.text));
    }
    if (t.kind == Token::kWord && upper(t.text) == "TRUE") return true;
    if (t.kind == Token::kWord && upper(t.text) == "FALSE") return false;
    throw std::runtime_error("sql: expected a literal, found '" + t.text + "'");
  }
  Operand operand() {
    if (peek().kind == Token::kWord && t_[i_ + 1].kind == Token::kPunct && t_[i_ + 1].text == ".") return column();
    return literal();
  }
  CompareOp op() {
    static const std::map<std::string, CompareOp> ops{{"=", CompareOp::kEq},  {"<>", CompareOp::kNe},
                                                      {"<", CompareOp::kLt},  {"<=", CompareOp::kLe},
                                                      {">", CompareOp::kGt},  {">=", CompareOp::kGe}};
    const Token t = next();
    auto it = ops.find(t.text);
    if (t.kind != Token::kPunct || it == ops.end()) throw std::runtime_error("sql: expected an operator");
    return it->second;
  }
  bool at_end() const { return peek().kind == Token::kEnd; }

 private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
};

}  // namespace

std::vector<Row> evaluate_sql(const std::string& sql, const std::map<std::string, SqlTable>& tables) {
  SqlParser p(sql);
  p.expect_keyword("SELECT");
  const bool distinct = p.keyword("DISTINCT");
  std::vector<ColumnRef> select;
  do {
    select.push_back(p.column());
  } while (p.punct(","));

  p.expect_keyword("FROM");
  // alias -> rows
  std::vector<std::pair<std::string, SqlTable>> from;
  do {
    if (p.punct("(")) {
      p.expect_keyword("VALUES");
      std::vector<std::vector<Scalar>> rows;
      do {
        p.expect("(");
        std::vector<Scalar> row;
        do {
          row.push_back(p.literal());
        } while (p.punct(","));
        p.expect(")");
        rows.push_back(std::move(row));
      } while (p.punct(","));
      p.expect(")");
      p.expect_keyword("AS");
      const std::string alias = p.word();
      p.expect("(");
      std::vector<std::string> names;
      do {
        names.push_back(p.word());
      } while (p.punct(","));
      p.expect(")");
      SqlTable table;
      for (const auto& r : rows) {
        if (r.size() != names.size()) throw std::runtime_error("sql: VALUES row arity");
        std::map<std::string, Scalar> m;
        for (std::size_t i = 0; i < r.size(); ++i) m[names[i]] = r[i];
        table.push_back(std::move(m));
      }
      from.emplace_back(alias, std::move(table));
    } else {
      const std::string name = p.word();
      const std::string alias = p.word();
      auto it = tables.find(name);
      if (it == tables.end()) throw std::runtime_error("sql: unknown table " + name);
      from.emplace_back(alias, it->second);
    }
  } while (p.punct(","));

  std::vector<Predicate> where;
  if (p.keyword("WHERE")) {
    do {
      Predicate pr{p.operand(), CompareOp::kEq, Scalar()};
      pr.op = p.op();
      pr.rhs = p.operand();
      where.push_back(std::move(pr));
    } while (p.keyword("AND"));
  }
  if (!p.at_end()) throw std::runtime_error("sql: trailing input");

  std::map<std::string, std::size_t> alias_index;
  for (std::size_t i = 0; i < from.size(); ++i) alias_index[from[i].first] = i;
  std::vector<std::size_t> choice(from.size(), 0);
  auto value = [&](const Operand& o) -> const Scalar* {
    if (const auto* s = std::get_if<Scalar>(&o)) return s;
    const auto& c = std::get<ColumnRef>(o);
    auto a = alias_index.find(c.alias);
    if (a == alias_index.end()) throw std::runtime_error("sql: unknown alias " + c.alias);
    const auto& row = from[a->second].second[choice[a->second]];
    auto it = row.find(c.column);
    return it == row.end() ? nullptr : &it->second;
  };

  std::vector<Row> out;
  std::set<Row> seen;
  std::function<void(std::size_t)> loop = [&](std::size_t i) {
    if (i == from.size()) {
      for (const Predicate& pr : where) {
        const Scalar* l = value(pr.lhs);
        const Scalar* r = value(pr.rhs);
        if (l == nullptr || r == nullptr || !oracle_compare(*l, pr.op, *r)) return;
      }
      Row row;
      for (const ColumnRef& c : select) {
        const Scalar* v = value(c);
        if (v == nullptr) throw std::runtime_error("sql: NULL in select list for " + c.alias + "." + c.column);
        row.push_back(*v);
      }
      if (!distinct || seen.insert(row).second) out.push_back(std::move(row));
      return;
    }
    for (choice[i] = 0; choice[i] < from[i].second.size(); ++choice[i]) loop(i + 1);
  };
  loop(0);
  return out;
}

// ---------------------------------------------------------------------------
// Reference selection

std::string reference_mismatch(const CatalogGraph& catalog, std::string_view workflow) {
  const ReferenceOracle oracle = brute_force_references(catalog, workflow);
  std::set<std::string> stores;
  for (const auto& [e, refs] : oracle.chosen) {
    for (const auto& [s, r] : refs) stores.insert(s);
  }
  for (const auto& [e, s] : oracle.conflicts) stores.insert(s);
  const std::vector<std::string> all(stores.begin(), stores.end());
  if (referenced_stores(catalog, workflow) != all) return "referenced_stores differs";

  std::vector<std::vector<std::string>> requests;
  for (const auto& s : all) requests.push_back({s});
  if (all.size() > 1) requests.push_back(all);
  for (const auto& request : requests) {
    // Executions in order, stores in request order: the first failure wins.
    std::optional<ErrorCode> expected;
    for (const auto& e : oracle.executions) {
      for (const auto& s : request) {
        if (expected) break;
        if (std::find(oracle.conflicts.begin(), oracle.conflicts.end(), std::pair{e, s}) != oracle.conflicts.end()) {
          expected = ErrorCode::kConflictingReference;
        } else if (!oracle.chosen.count(e) || !oracle.chosen.at(e).count(s)) {
          expected = ErrorCode::kMissingReference;
        }
      }
    }
    std::string label = std::string(workflow) + " [";
    for (const auto& s : request) label += s + " ";
    label += "]";
    std::vector<DataReferenceRow> rows;
    try {
      rows = data_references_for(catalog, workflow, request);
    } catch (const Error& err) {
      if (!expected) return label + ": unexpected " + std::string(to_string(err.code()));
      if (err.code() != *expected) {
        return label + ": raised " + std::string(to_string(err.code())) + ", oracle expects " +
               std::string(to_string(*expected));
      }
      continue;
    }
    if (expected) return label + ": no error, oracle expects " + std::string(to_string(*expected));
    if (rows.size() != oracle.executions.size()) return label + ": row count differs";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].workflow_execution != oracle.executions[i]) return label + ": execution order differs";
      if (rows[i].references.size() != request.size()) return label + ": store count differs";
      for (const auto& s : request) {
        const auto it = rows[i].references.find(s);
        if (it == rows[i].references.end()) return label + ": missing store " + s;
        const DataReference& want = oracle.chosen.at(oracle.executions[i]).at(s);
        if (it->second.dataset != want.dataset || it->second.attribute != want.attribute ||
            !(it->second.value == want.value)) {
          return label + ": reference differs for " + oracle.executions[i] + "/" + s;
        }
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Query text

namespace {

std::string random_ident(Rng& rng) {
  static const std::string first = "abcxyzABCXYZ_";
  static const std::string rest = "abcxyzABCXYZ_0189";
  static const std::vector<std::string> keywords{"select", "where", "from", "and"};
  for (;;) {
    std::string s(1, first[pick(rng, 0, first.size() - 1)]);
    for (std::size_t n = pick(rng, 0, 8); n > 0; --n) s += rest[pick(rng, 0, rest.size() - 1)];
    std::string l = s;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
    if (std::find(keywords.begin(), keywords.end(), l) == keywords.end()) return s;
  }
}

Scalar random_literal(Rng& rng) {
  switch (pick(rng, 0, 4)) {
    case 0: return std::int64_t(pick(rng, 0, 2000)) - 1000;
    case 1: return chance(rng, 0.5) ? std::numeric_limits<std::int64_t>::min()
                                    : std::numeric_limits<std::int64_t>::max();
    case 2: {
      std::uniform_real_distribution<double> d(-1e6, 1e6);
      return chance(rng, 0.2) ? 1e300 : d(rng);
    }
    default: {
      static const std::string chars = "ab \"\\\n\tZ09.,'=<\xc3\xbc";
      std::string s;
      for (std::size_t n = pick(rng, 0, 6); n > 0; --n) s += chars[pick(rng, 0, chars.size() - 1)];
      return s;
    }
  }
}

}  // namespace

GlobalQuery random_ast(Rng& rng) {
  GlobalQuery q;
  q.subject_entity = random_ident(rng);
  q.workflow = random_ident(rng);
  for (std::size_t n = pick(rng, 1, 5); n > 0; --n) q.projections.push_back({q.subject_entity, random_ident(rng)});
  for (std::size_t n = pick(rng, 0, 4); n > 0; --n) {
    QueryFilter f;
    f.attribute = {q.subject_entity, random_ident(rng)};
    f.op = static_cast<CompareOp>(pick(rng, 0, 5));
    f.value = random_literal(rng);
    q.filters.push_back(std::move(f));
  }
  return q;
}

std::string mutate_text(Rng& rng, std::string text) {
  static const std::string noise = "selctwhrfomand.,\"\\=<>!- \n\t0123456789eE_xyz\x01\x7f";
  for (std::size_t edits = pick(rng, 1, 4); edits > 0; --edits) {
    const std::size_t at = text.empty() ? 0 : pick(rng, 0, text.size() - 1);
    const char c = noise[pick(rng, 0, noise.size() - 1)];
    switch (pick(rng, 0, 3)) {
      case 0:
        if (!text.empty()) text.erase(at, 1);
        break;
      case 1: text.insert(text.begin() + static_cast<std::ptrdiff_t>(at), c); break;
      case 2:
        if (!text.empty()) text[at] = c;
        break;
      default: text = text.substr(0, at);
    }
  }
  return text;
}

bool position_within(const std::string& text, SourcePosition p) {
  std::vector<std::size_t> lengths{0};
  for (char c : text) {
    if (c == '\n') lengths.push_back(0);
    else ++lengths.back();
  }
  if (p.line < 1 || p.line > lengths.size()) return false;
  return p.column >= 1 && p.column <= lengths[p.line - 1] + 1;
}

}  // namespace polyfed::testing
