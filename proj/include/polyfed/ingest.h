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

// JSON documents for bulk ingestion, shared by the fixture loader, the CLI
// and the HTTP service. Shapes (all keys lower-case):
//
//   GCS       {"entities": [Dataset...]}
//   Dataset   {"name", "identifier", "attributes": [name | Attribute...],
//              "referred": [{"attribute", "target": "Dataset.attr"}]}
//   Attribute {"name", "complex": bool, "members": [...], "alt_names": [...]}
//   LCS       {"name", "kind", "machine", "data_dir",
//              "databases": [{"name", "schemas": [{"name", "datasets": [Dataset...]}]}]}
//   Aliases   {"aliases": [{"gcs": "Entity.attr", "lcs": "Dataset.attr", "store"}]}
//   Provenance {"workflows": [{"name", "transformations": [{"name", "used", "generated"}]}],
//               "executions": [{"workflow", "started_at", "ended_at", "open": bool,
//                               "transformations": [{"name", "values": [Value...]}]}]}
//   Value     {"store", "dataset", "attribute", "value", "direction": "used"|"generated"}
//
// Malformed documents raise kInvalidArgument.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyfed/catalog.h"
#include "polyfed/provenance.h"
#include "polyfed/schema_registry.h"

namespace polyfed {

using Json = nlohmann::json;

struct TransformationRun {
  std::string name;
  std::vector<AttributeValueRecord> values;
};

struct ExecutionDoc {
  std::string workflow;
  std::optional<std::int64_t> started_at;
  std::optional<std::int64_t> ended_at;
  bool open = false;  // left open after loading
  std::vector<TransformationRun> transformations;
};

struct ProvenanceDoc {
  std::vector<WorkflowDef> workflows;
  std::vector<ExecutionDoc> executions;
};

Scalar scalar_from_json(const Json& j);
Json scalar_to_json(const Scalar& value);

DatasetSchemaDef dataset_from_json(const Json& j);
// Accepts {"entities": [...]}, a bare array, or a single dataset object.
std::vector<DatasetSchemaDef> gcs_from_json(const Json& j);
DataStoreDescriptor lcs_from_json(const Json& j);
// Accepts {"aliases": [...]}, a bare array, or a single mapping.
std::vector<AliasMapping> aliases_from_json(const Json& j);
LcsAttributeName lcs_attribute_from_json(const Json& j);  // object or "Dataset.attr"
AttributeValueRecord value_from_json(const Json& j);
TransformationRun transformation_run_from_json(const Json& j);
WorkflowDef workflow_from_json(const Json& j);
ProvenanceDoc provenance_from_json(const Json& j);

// Returns the execution ids in document order.
std::vector<std::string> apply_provenance(CatalogGraph& catalog, const ProvenanceDoc& doc);

// Loads <dir>/gcs.json, <dir>/lcs/*.json (name order), <dir>/aliases.json and
// <dir>/provenance.json, whichever exist. Relative store data_dir entries are
// resolved against `dir`. Throws kIoFailure and the registry's errors.
void load_fixture(CatalogGraph& catalog, const std::filesystem::path& dir);

Json read_json_file(const std::filesystem::path& path);

}  // namespace polyfed
