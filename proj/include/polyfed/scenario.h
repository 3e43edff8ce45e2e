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

// The Netherlands seismic scenario built in code: a Seismic entity (plus Well
// and Horizon), four stores, the alias mappings, the ingestion workflow and
// its single captured execution. fixtures/netherlands holds the same content
// as files.

#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "polyfed/catalog.h"
#include "polyfed/federation.h"
#include "polyfed/ingest.h"
#include "polyfed/schema_registry.h"

namespace polyfed::scenario {

inline constexpr std::string_view kWorkflow = "geological_data_ingestion_workflow";
inline constexpr std::string_view kRelational = "PostgreSQL";
inline constexpr std::string_view kTriple = "AllegroGraph";
inline constexpr std::string_view kDocument = "MongoDB";
inline constexpr std::string_view kFiles = "LocalFileSystem";

inline constexpr std::string_view kQuery =
    "select Seismic.inline, Seismic.crossline, \n"
    "Seismic.hasWell, Seismic.hasHorizon, Seismic.epsg\n"
    "where Seismic from geological_data_ingestion_workflow \n"
    "and Seismic.name = \"Netherlands\"\n";

// The data references of the captured execution.
inline constexpr std::int64_t kHeaderId = 12345;
inline constexpr std::int64_t kDocumentId = 1111;
inline constexpr std::string_view kSeismicUri = "http://oilandgas/Seismic#Netherlands";
inline constexpr std::string_view kTrainingPath = "/data/netherlands.train";

std::vector<DatasetSchemaDef> gcs();
// With `data_root`, each store's data_dir is data_root/<store name>.
std::vector<DataStoreDescriptor> stores(const std::optional<std::filesystem::path>& data_root = std::nullopt);
std::vector<AliasMapping> aliases();
WorkflowDef workflow();
ExecutionDoc netherlands_execution();

// GCS, LCS, aliases and the workflow definition; no executions.
void register_schemas(CatalogGraph& catalog, const std::optional<std::filesystem::path>& data_root = std::nullopt);
// Schemas plus the Netherlands execution.
CatalogGraph build(const std::optional<std::filesystem::path>& data_root = std::nullopt);

// In-memory stores holding the same records as the fixture files.
AdapterMap adapters();

}  // namespace polyfed::scenario
