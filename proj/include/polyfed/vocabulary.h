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

// Link labels and node-id conventions shared by the registry, the provenance
// capture API and the planner's catalog traversal.

#pragma once

#include <string>
#include <string_view>

#include "polyfed/catalog.h"

namespace polyfed::vocab {

// Names and values.
inline constexpr std::string_view kName = "name";
inline constexpr std::string_view kAltName = "altName";
inline constexpr std::string_view kValue = "value";

// GCS / LCS structure.
inline constexpr std::string_view kIsAttributeOf = "isAttributeOf";
inline constexpr std::string_view kIsIdentifierOf = "isIdentifierOf";
inline constexpr std::string_view kReferred = "referred";
inline constexpr std::string_view kIsMemberOfComplexAttribute = "isMemberOfComplexAttribute";
inline constexpr std::string_view kWasRunOn = "wasRunOn";
inline constexpr std::string_view kIsInStore = "isInStore";
inline constexpr std::string_view kIsSchemaOf = "isSchemaOf";
inline constexpr std::string_view kIsDataSchemaOf = "isDataSchemaOf";
inline constexpr std::string_view kIsStoredInStore = "isStoredInStore";
inline constexpr std::string_view kAlias = "alias";

// Provenance.
inline constexpr std::string_view kIsTransformationOf = "isTransformationOf";
inline constexpr std::string_view kUsesAttribute = "usesAttribute";
inline constexpr std::string_view kGeneratesAttribute = "generatesAttribute";
inline constexpr std::string_view kWasDerivedFromWorkflow = "wasDerivedFromWorkflow";
inline constexpr std::string_view kWasDerivedFromDataTransformation = "wasDerivedFromDataTransformation";
inline constexpr std::string_view kWasMemberOfWorkflowExecution = "wasMemberOfWorkflowExecution";
inline constexpr std::string_view kWasDerivedFromAttribute = "wasDerivedFromAttribute";
inline constexpr std::string_view kWasGeneratedBy = "wasGeneratedBy";
inline constexpr std::string_view kUsed = "used";

// Node properties.
inline constexpr std::string_view kPropName = "name";
inline constexpr std::string_view kPropScope = "scope";  // "gcs" or "lcs"
inline constexpr std::string_view kPropStore = "store";
inline constexpr std::string_view kPropDataset = "dataset";
inline constexpr std::string_view kPropComplex = "complex";
inline constexpr std::string_view kPropStoreKind = "store_kind";
inline constexpr std::string_view kPropDataDir = "data_dir";
inline constexpr std::string_view kPropWorkflow = "workflow";
inline constexpr std::string_view kPropStatus = "status";
inline constexpr std::string_view kPropStartedAt = "started_at";
inline constexpr std::string_view kPropEndedAt = "ended_at";
inline constexpr std::string_view kPropDirection = "direction";

inline constexpr std::string_view kScopeGcs = "gcs";
inline constexpr std::string_view kScopeLcs = "lcs";

inline NodeId id(std::string_view path) { return NodeId("hk://id/" + std::string(path)); }

inline NodeId gcs_context() { return id("context/gcs"); }
inline NodeId store_context(std::string_view store) { return id("context/store/" + std::string(store)); }
inline NodeId provenance_context() { return id("context/provenance"); }

inline NodeId gcs_entity(std::string_view entity) { return id("gcs/" + std::string(entity)); }
inline NodeId gcs_attribute(std::string_view entity, std::string_view attr) {
  return id("gcs/" + std::string(entity) + "/" + std::string(attr));
}

inline NodeId machine(std::string_view name) { return id("machine/" + std::string(name)); }
inline NodeId store(std::string_view name) { return id("store/" + std::string(name)); }
inline NodeId database(std::string_view store, std::string_view db) {
  return id("database/" + std::string(store) + "/" + std::string(db));
}
inline NodeId database_schema(std::string_view store, std::string_view db, std::string_view schema) {
  return id("dbschema/" + std::string(store) + "/" + std::string(db) + "/" + std::string(schema));
}
inline NodeId lcs_dataset(std::string_view store, std::string_view dataset) {
  return id("lcs/" + std::string(store) + "/" + std::string(dataset));
}
inline NodeId lcs_attribute(std::string_view store, std::string_view dataset, std::string_view attr) {
  return id("lcs/" + std::string(store) + "/" + std::string(dataset) + "/" + std::string(attr));
}

inline NodeId workflow(std::string_view name) { return id("workflow/" + std::string(name)); }
inline NodeId transformation(std::string_view workflow, std::string_view name) {
  return id("workflow/" + std::string(workflow) + "/" + std::string(name));
}

}  // namespace polyfed::vocab
