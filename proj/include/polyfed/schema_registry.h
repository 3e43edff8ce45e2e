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

// Typed facade over the catalog for the global conceptual schema (GCS), the
// local conceptual schemas (LCS) of each data store, and the alias mappings
// between their attributes. Every operation here validates its whole input
// before writing, so a failed call leaves the catalog untouched.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyfed/catalog.h"

namespace polyfed {

struct AttributeDef {
  std::string name;
  bool complex = false;
  std::vector<AttributeDef> members;  // non-empty iff complex
  // Secondary spellings that resolve to this attribute (e.g. "hasWell" for "well").
  std::vector<std::string> alt_names;
};

struct ReferredDef {
  std::string attribute;  // local attribute name
  std::string target;     // "Dataset.attribute"
};

struct DatasetSchemaDef {
  std::string name;
  std::vector<AttributeDef> attributes;
  std::string identifier;
  std::vector<ReferredDef> referred;
};

enum class StoreKind { kFileSystem, kDocumentDB, kRelationalDB, kTripleStore };

std::string_view to_string(StoreKind kind);
std::optional<StoreKind> parse_store_kind(std::string_view text);

struct DatabaseSchemaDef {
  std::string name;
  std::vector<DatasetSchemaDef> datasets;
};

struct DatabaseDef {
  std::string name;
  std::vector<DatabaseSchemaDef> schemas;
};

struct DataStoreDescriptor {
  std::string name;
  StoreKind kind = StoreKind::kRelationalDB;
  std::string machine;
  std::vector<DatabaseDef> databases;
  // Where the store's fixture data lives, if it is served in-process.
  std::optional<std::string> data_dir;
};

// "Entity.attr" / "Dataset.attr", split at the first dot.
struct QualifiedName {
  std::string dataset;
  std::string attribute;

  static QualifiedName parse(std::string_view text);  // throws kInvalidArgument
  std::string str() const { return dataset + "." + attribute; }
  auto operator<=>(const QualifiedName&) const = default;
};

struct AliasMapping {
  std::string gcs_attr;  // "Entity.attr"
  std::string lcs_attr;  // "Dataset.attr"
  std::string store;     // may be empty when the dataset name is unique
};

struct AttributeRef {
  std::string store;
  std::string dataset;
  std::string attribute;
  bool is_identifier = false;

  auto operator<=>(const AttributeRef&) const = default;
};

struct GcsAttribute {
  NodeId id;
  std::string entity;
  std::string name;  // canonical name, even when looked up by an alt name
  bool complex = false;
};

// Throws kDuplicateEntity, kMissingIdentifier, kUnknownReferredTarget,
// kInvalidSchema.
void register_gcs(CatalogGraph& catalog, std::span<const DatasetSchemaDef> entities);

// Throws kDuplicateStore, kDuplicateDataset, kMissingIdentifier,
// kUnknownReferredTarget, kInvalidSchema.
void register_lcs(CatalogGraph& catalog, const DataStoreDescriptor& descriptor);

// Stores `lcs --alias--> gcs`. Throws kUnknownAttribute, kDuplicateTriple.
void create_alias(CatalogGraph& catalog, const AliasMapping& mapping);

// Every LCS attribute aliased to `gcs_attr`, in alias creation order.
// Throws kUnknownAttribute.
std::vector<AttributeRef> resolve_attribute(const CatalogGraph& catalog, std::string_view gcs_attr);

// Throws kUnknownDataset, kMissingIdentifier.
std::string identifier_of(const CatalogGraph& catalog, std::string_view store, std::string_view dataset);

bool has_gcs_entity(const CatalogGraph& catalog, std::string_view entity);
// Accepts canonical or alternate attribute names.
std::optional<GcsAttribute> find_gcs_attribute(const CatalogGraph& catalog, std::string_view entity,
                                               std::string_view attribute);
std::optional<NodeId> find_lcs_attribute(const CatalogGraph& catalog, std::string_view store,
                                         std::string_view dataset, std::string_view attribute);

std::vector<std::string> store_names(const CatalogGraph& catalog);
StoreKind store_kind(const CatalogGraph& catalog, std::string_view store);  // throws kUnknownDataset
std::vector<std::string> dataset_names(const CatalogGraph& catalog, std::string_view store);
std::vector<std::string> attribute_names(const CatalogGraph& catalog, const NodeId& dataset);

}  // namespace polyfed
