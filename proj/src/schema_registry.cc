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

#include "polyfed/schema_registry.h"

#include <algorithm>
#include <functional>
#include <set>

#include "polyfed/vocabulary.h"

namespace polyfed {
namespace {

void check_name(std::string_view what, std::string_view name) {
  if (name.empty()) throw Error(ErrorCode::kInvalidSchema, "empty " + std::string(what) + " name");
  for (unsigned char c : name) {
    if (c < 0x20 || c == 0x7f || c == '/' || c == '.' || c == '<' || c == '>') {
      throw Error(ErrorCode::kInvalidSchema,
                  std::string(what) + " name contains a reserved character: " + std::string(name));
    }
  }
}

void flatten(const std::vector<AttributeDef>& attrs, std::vector<const AttributeDef*>& out) {
  for (const AttributeDef& a : attrs) {
    out.push_back(&a);
    flatten(a.members, out);
  }
}

// Checks one dataset definition in isolation: names, uniqueness (including
// alternate spellings), complex-attribute shape and identifier membership.
void check_dataset(const DatasetSchemaDef& def) {
  check_name("dataset", def.name);
  std::vector<const AttributeDef*> all;
  flatten(def.attributes, all);
  std::set<std::string, std::less<>> seen;
  for (const AttributeDef* a : all) {
    check_name("attribute", a->name);
    if (a->complex != !a->members.empty()) {
      throw Error(ErrorCode::kInvalidSchema,
                  def.name + "." + a->name + ": complex attributes need members and only they may have them");
    }
    if (!seen.insert(a->name).second) {
      throw Error(ErrorCode::kInvalidSchema, "duplicate attribute " + def.name + "." + a->name);
    }
    for (const std::string& alt : a->alt_names) {
      check_name("attribute", alt);
      if (!seen.insert(alt).second) {
        throw Error(ErrorCode::kInvalidSchema, "duplicate attribute " + def.name + "." + alt);
      }
    }
  }
  auto is_identifier = [&def](const AttributeDef& a) { return a.name == def.identifier; };
  auto it = std::find_if(def.attributes.begin(), def.attributes.end(), is_identifier);
  if (def.identifier.empty() || it == def.attributes.end()) {
    throw Error(ErrorCode::kMissingIdentifier,
                def.name + ": identifier '" + def.identifier + "' is not one of its attributes");
  }
  if (it->complex) throw Error(ErrorCode::kInvalidSchema, def.name + ": identifier may not be complex");
  for (const ReferredDef& r : def.referred) {
    if (!seen.count(r.attribute)) {
      throw Error(ErrorCode::kInvalidSchema, def.name + ": referred attribute '" + r.attribute + "' not declared");
    }
  }
}

bool declares(const DatasetSchemaDef& def, std::string_view attr) {
  std::vector<const AttributeDef*> all;
  flatten(def.attributes, all);
  return std::any_of(all.begin(), all.end(), [attr](const AttributeDef* a) { return a->name == attr; });
}

void add_named(CatalogGraph& catalog, Node node, std::string_view name, const NodeId& context) {
  NodeId id = catalog.add_node(std::move(node), context);
  catalog.add_link(id, std::string(vocab::kName), Term::literal(std::string(name)));
}

// Writes dataset + attribute nodes. `attribute_id` maps an attribute name to
// its node id within this dataset's namespace.
template <typename AttributeIdFn>
void write_dataset(CatalogGraph& catalog, const DatasetSchemaDef& def, const NodeId& dataset_id,
                   const Properties& base, const NodeId& context, AttributeIdFn attribute_id,
                   const std::optional<NodeId>& store) {
  Properties dataset_props = base;
  dataset_props.insert_or_assign(std::string(vocab::kPropName), def.name);
  add_named(catalog, Node{dataset_id, NodeKind::kDatasetSchema, dataset_props}, def.name, context);

  std::function<void(const AttributeDef&, const std::optional<NodeId>&)> write_attr =
      [&](const AttributeDef& a, const std::optional<NodeId>& parent) {
        Properties props = base;
        props.insert_or_assign(std::string(vocab::kPropName), a.name);
        props.insert_or_assign(std::string(vocab::kPropDataset), def.name);
        props.insert_or_assign(std::string(vocab::kPropComplex), a.complex);
        NodeId attr_id = attribute_id(a.name);
        add_named(catalog, Node{attr_id, NodeKind::kAttribute, props}, a.name, context);
        catalog.add_link(attr_id, std::string(vocab::kIsAttributeOf), Term::node(dataset_id));
        if (store) catalog.add_link(attr_id, std::string(vocab::kIsStoredInStore), Term::node(*store));
        for (const std::string& alt : a.alt_names) {
          catalog.add_link(attr_id, std::string(vocab::kAltName), Term::literal(alt));
        }
        if (parent) catalog.add_link(attr_id, std::string(vocab::kIsMemberOfComplexAttribute), Term::node(*parent));
        for (const AttributeDef& m : a.members) write_attr(m, attr_id);
      };
  for (const AttributeDef& a : def.attributes) write_attr(a, std::nullopt);
  catalog.add_link(attribute_id(def.identifier), std::string(vocab::kIsIdentifierOf), Term::node(dataset_id));
}

NodeId ensure_context(CatalogGraph& catalog, const NodeId& id, std::string_view name) {
  if (!catalog.contains(id)) {
    catalog.add_node(Node{id, NodeKind::kContext, {{std::string(vocab::kPropName), std::string(name)}}});
  }
  return id;
}

}  // namespace

std::string_view to_string(StoreKind kind) {
  switch (kind) {
    case StoreKind::kFileSystem: return "FileSystem";
    case StoreKind::kDocumentDB: return "DocumentDB";
    case StoreKind::kRelationalDB: return "RelationalDB";
    case StoreKind::kTripleStore: return "TripleStore";
  }
  return "?";
}

std::optional<StoreKind> parse_store_kind(std::string_view text) {
  for (StoreKind k : {StoreKind::kFileSystem, StoreKind::kDocumentDB, StoreKind::kRelationalDB,
                      StoreKind::kTripleStore}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

QualifiedName QualifiedName::parse(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) {
    throw Error(ErrorCode::kInvalidArgument, "expected a qualified name 'Dataset.attribute', got '" +
                                                 std::string(text) + "'");
  }
  return {std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

// ---------------------------------------------------------------------------

void register_gcs(CatalogGraph& catalog, std::span<const DatasetSchemaDef> entities) {
  std::set<std::string, std::less<>> batch;
  for (const DatasetSchemaDef& def : entities) {
    check_dataset(def);
    if (has_gcs_entity(catalog, def.name) || !batch.insert(def.name).second) {
      throw Error(ErrorCode::kDuplicateEntity, def.name);
    }
  }
  auto target_exists = [&](const std::string& target) {
    QualifiedName q = QualifiedName::parse(target);
    for (const DatasetSchemaDef& def : entities) {
      if (def.name == q.dataset) return declares(def, q.attribute);
    }
    return find_gcs_attribute(catalog, q.dataset, q.attribute).has_value();
  };
  for (const DatasetSchemaDef& def : entities) {
    for (const ReferredDef& r : def.referred) {
      if (!target_exists(r.target)) throw Error(ErrorCode::kUnknownReferredTarget, def.name + "." + r.attribute + " -> " + r.target);
    }
  }

  NodeId context = ensure_context(catalog, vocab::gcs_context(), "gcs");
  const Properties base{{std::string(vocab::kPropScope), std::string(vocab::kScopeGcs)}};
  for (const DatasetSchemaDef& def : entities) {
    write_dataset(
        catalog, def, vocab::gcs_entity(def.name), base, context,
        [&def](std::string_view attr) { return vocab::gcs_attribute(def.name, attr); }, std::nullopt);
  }
  for (const DatasetSchemaDef& def : entities) {
    for (const ReferredDef& r : def.referred) {
      QualifiedName q = QualifiedName::parse(r.target);
      catalog.add_link(vocab::gcs_attribute(def.name, r.attribute), std::string(vocab::kReferred),
                       Term::node(find_gcs_attribute(catalog, q.dataset, q.attribute)->id));
    }
  }
}

void register_lcs(CatalogGraph& catalog, const DataStoreDescriptor& desc) {
  check_name("store", desc.name);
  if (catalog.contains(vocab::store(desc.name))) throw Error(ErrorCode::kDuplicateStore, desc.name);
  const std::string machine = desc.machine.empty() ? "localhost" : desc.machine;
  check_name("machine", machine);

  std::vector<const DatasetSchemaDef*> datasets;
  std::set<std::string, std::less<>> database_names;
  for (const DatabaseDef& db : desc.databases) {
    check_name("database", db.name);
    if (!database_names.insert(db.name).second) {
      throw Error(ErrorCode::kInvalidSchema, desc.name + ": duplicate database " + db.name);
    }
    std::set<std::string, std::less<>> schema_names;
    for (const DatabaseSchemaDef& schema : db.schemas) {
      check_name("schema", schema.name);
      if (!schema_names.insert(schema.name).second) {
        throw Error(ErrorCode::kInvalidSchema, desc.name + "/" + db.name + ": duplicate schema " + schema.name);
      }
      for (const DatasetSchemaDef& ds : schema.datasets) {
        check_dataset(ds);
        for (const DatasetSchemaDef* seen : datasets) {
          if (seen->name == ds.name) throw Error(ErrorCode::kDuplicateDataset, desc.name + "/" + ds.name);
        }
        datasets.push_back(&ds);
      }
    }
  }
  for (const DatasetSchemaDef* ds : datasets) {
    for (const ReferredDef& r : ds->referred) {
      QualifiedName q = QualifiedName::parse(r.target);
      bool found = std::any_of(datasets.begin(), datasets.end(), [&q](const DatasetSchemaDef* other) {
        return other->name == q.dataset && declares(*other, q.attribute);
      });
      if (!found) throw Error(ErrorCode::kUnknownReferredTarget, ds->name + "." + r.attribute + " -> " + r.target);
    }
  }

  NodeId context = ensure_context(catalog, vocab::store_context(desc.name), desc.name);
  const NodeId store_id = vocab::store(desc.name);
  Properties store_props{{std::string(vocab::kPropName), desc.name},
                         {std::string(vocab::kPropStoreKind), std::string(to_string(desc.kind))}};
  if (desc.data_dir) store_props.emplace(std::string(vocab::kPropDataDir), *desc.data_dir);
  add_named(catalog, Node{store_id, NodeKind::kDataStore, store_props}, desc.name, context);

  const NodeId machine_id = vocab::machine(machine);
  if (!catalog.contains(machine_id)) {
    add_named(catalog, Node{machine_id, NodeKind::kMachine, {{std::string(vocab::kPropName), machine}}}, machine,
              context);
  } else {
    catalog.add_to_context(context, machine_id);
  }
  catalog.add_link(store_id, std::string(vocab::kWasRunOn), Term::node(machine_id));

  const Properties base{{std::string(vocab::kPropScope), std::string(vocab::kScopeLcs)},
                        {std::string(vocab::kPropStore), desc.name}};
  for (const DatabaseDef& db : desc.databases) {
    NodeId db_id = vocab::database(desc.name, db.name);
    add_named(catalog, Node{db_id, NodeKind::kDatabase, {{std::string(vocab::kPropName), db.name}}}, db.name,
              context);
    catalog.add_link(db_id, std::string(vocab::kIsInStore), Term::node(store_id));
    for (const DatabaseSchemaDef& schema : db.schemas) {
      NodeId schema_id = vocab::database_schema(desc.name, db.name, schema.name);
      add_named(catalog, Node{schema_id, NodeKind::kDatabaseSchema, {{std::string(vocab::kPropName), schema.name}}},
                schema.name, context);
      catalog.add_link(schema_id, std::string(vocab::kIsSchemaOf), Term::node(db_id));
      for (const DatasetSchemaDef& ds : schema.datasets) {
        NodeId ds_id = vocab::lcs_dataset(desc.name, ds.name);
        write_dataset(
            catalog, ds, ds_id, base, context,
            [&](std::string_view attr) { return vocab::lcs_attribute(desc.name, ds.name, attr); }, store_id);
        catalog.add_link(ds_id, std::string(vocab::kIsDataSchemaOf), Term::node(schema_id));
      }
    }
  }
  for (const DatasetSchemaDef* ds : datasets) {
    for (const ReferredDef& r : ds->referred) {
      QualifiedName q = QualifiedName::parse(r.target);
      catalog.add_link(vocab::lcs_attribute(desc.name, ds->name, r.attribute), std::string(vocab::kReferred),
                       Term::node(vocab::lcs_attribute(desc.name, q.dataset, q.attribute)));
    }
  }
}

void create_alias(CatalogGraph& catalog, const AliasMapping& mapping) {
  QualifiedName g = QualifiedName::parse(mapping.gcs_attr);
  QualifiedName l = QualifiedName::parse(mapping.lcs_attr);
  auto gcs = find_gcs_attribute(catalog, g.dataset, g.attribute);
  if (!gcs) throw Error(ErrorCode::kUnknownAttribute, "GCS attribute " + mapping.gcs_attr);

  std::optional<NodeId> lcs;
  if (!mapping.store.empty()) {
    lcs = find_lcs_attribute(catalog, mapping.store, l.dataset, l.attribute);
  } else {
    for (const std::string& store : store_names(catalog)) {
      if (auto candidate = find_lcs_attribute(catalog, store, l.dataset, l.attribute)) {
        if (lcs) {
          throw Error(ErrorCode::kUnknownAttribute,
                      "LCS attribute " + mapping.lcs_attr + " exists in several stores; name the store");
        }
        lcs = candidate;
      }
    }
  }
  if (!lcs) {
    throw Error(ErrorCode::kUnknownAttribute,
                "LCS attribute " + mapping.lcs_attr + (mapping.store.empty() ? "" : " in " + mapping.store));
  }
  catalog.add_link(*lcs, std::string(vocab::kAlias), Term::node(gcs->id));
}

std::vector<AttributeRef> resolve_attribute(const CatalogGraph& catalog, std::string_view gcs_attr) {
  QualifiedName q = QualifiedName::parse(gcs_attr);
  auto gcs = find_gcs_attribute(catalog, q.dataset, q.attribute);
  if (!gcs) throw Error(ErrorCode::kUnknownAttribute, std::string(gcs_attr));

  std::vector<AttributeRef> refs;
  for (LinkId id : catalog.incoming(gcs->id, vocab::kAlias)) {
    const Node& attr = catalog.node(catalog.link(id).subject);
    AttributeRef ref;
    ref.store = string_property(attr, vocab::kPropStore);
    ref.dataset = string_property(attr, vocab::kPropDataset);
    ref.attribute = string_property(attr, vocab::kPropName);
    ref.is_identifier = catalog.has_link(attr.id, vocab::kIsIdentifierOf,
                                         Term::node(vocab::lcs_dataset(ref.store, ref.dataset)));
    refs.push_back(std::move(ref));
  }
  return refs;
}

std::string identifier_of(const CatalogGraph& catalog, std::string_view store, std::string_view dataset) {
  NodeId ds = vocab::lcs_dataset(store, dataset);
  if (!catalog.contains(ds)) throw Error(ErrorCode::kUnknownDataset, std::string(store) + "/" + std::string(dataset));
  auto ids = catalog.subjects_of(vocab::kIsIdentifierOf, ds);
  if (ids.empty()) throw Error(ErrorCode::kMissingIdentifier, std::string(store) + "/" + std::string(dataset));
  return string_property(catalog.node(ids.front()), vocab::kPropName);
}

bool has_gcs_entity(const CatalogGraph& catalog, std::string_view entity) {
  return catalog.contains(vocab::gcs_entity(entity));
}

std::optional<GcsAttribute> find_gcs_attribute(const CatalogGraph& catalog, std::string_view entity,
                                               std::string_view attribute) {
  const NodeId entity_id = vocab::gcs_entity(entity);
  if (!catalog.contains(entity_id)) return std::nullopt;
  auto make = [&](const NodeId& id) {
    const Node& n = catalog.node(id);
    auto complex = n.properties.find(vocab::kPropComplex);
    return GcsAttribute{id, std::string(entity), string_property(n, vocab::kPropName),
                        complex != n.properties.end() && std::get<bool>(complex->second)};
  };
  NodeId direct = vocab::gcs_attribute(entity, attribute);
  if (catalog.contains(direct)) return make(direct);
  for (const NodeId& attr : catalog.subjects_of(vocab::kIsAttributeOf, entity_id)) {
    if (catalog.has_link(attr, vocab::kAltName, Term::literal(std::string(attribute)))) return make(attr);
  }
  return std::nullopt;
}

std::optional<NodeId> find_lcs_attribute(const CatalogGraph& catalog, std::string_view store,
                                         std::string_view dataset, std::string_view attribute) {
  NodeId id = vocab::lcs_attribute(store, dataset, attribute);
  if (!catalog.contains(id)) return std::nullopt;
  return id;
}

std::vector<std::string> store_names(const CatalogGraph& catalog) {
  std::vector<std::string> names;
  for (const Node& n : catalog.nodes()) {
    if (n.kind == NodeKind::kDataStore) names.push_back(string_property(n, vocab::kPropName));
  }
  return names;
}

StoreKind store_kind(const CatalogGraph& catalog, std::string_view store) {
  const Node* n = catalog.find_node(vocab::store(store));
  if (n == nullptr) throw Error(ErrorCode::kUnknownDataset, "unknown store " + std::string(store));
  auto kind = parse_store_kind(string_property(*n, vocab::kPropStoreKind));
  if (!kind) throw Error(ErrorCode::kInvalidSchema, "store " + std::string(store) + " has no valid kind");
  return *kind;
}

std::vector<std::string> dataset_names(const CatalogGraph& catalog, std::string_view store) {
  std::vector<std::string> names;
  const std::string prefix = vocab::lcs_dataset(store, "").value;
  for (const Node& n : catalog.nodes()) {
    if (n.kind == NodeKind::kDatasetSchema && n.id.value.starts_with(prefix) &&
        string_property(n, vocab::kPropStore) == store) {
      names.push_back(string_property(n, vocab::kPropName));
    }
  }
  return names;
}

std::vector<std::string> attribute_names(const CatalogGraph& catalog, const NodeId& dataset) {
  std::vector<std::string> names;
  for (const NodeId& attr : catalog.subjects_of(vocab::kIsAttributeOf, dataset)) {
    names.push_back(string_property(catalog.node(attr), vocab::kPropName));
  }
  return names;
}

}  // namespace polyfed
