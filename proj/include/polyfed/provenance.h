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

// Workflow provenance capture (workflow, transformation and attribute-value
// records) and retrieval of the data references that link records across
// stores: the identifier values each workflow execution used or generated.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyfed/catalog.h"

namespace polyfed {

enum class ValueDirection { kUsed, kGenerated };

std::string_view to_string(ValueDirection direction);
std::optional<ValueDirection> parse_value_direction(std::string_view text);

// Names an LCS attribute. `store` may be empty when the dataset name is unique
// across stores.
struct LcsAttributeName {
  std::string store;
  std::string dataset;
  std::string attribute;
};

struct AttributeValueRecord {
  LcsAttributeName attribute;
  Scalar value;
  ValueDirection direction = ValueDirection::kGenerated;
};

struct TransformationDef {
  std::string name;
  std::vector<LcsAttributeName> used;
  std::vector<LcsAttributeName> generated;
};

struct WorkflowDef {
  std::string name;
  std::vector<TransformationDef> transformations;
};

struct ExecutionInfo {
  std::string id;
  std::string workflow;
  std::int64_t started_at = 0;  // ms since epoch
  std::optional<std::int64_t> ended_at;
  bool open = true;
};

struct DataReference {
  std::string dataset;
  std::string attribute;  // the dataset's identifier attribute
  Scalar value;
};

struct DataReferenceRow {
  std::string workflow_execution;
  std::map<std::string, DataReference> references;  // by store
};

// Explicit schema registration; begin/record also create what is missing.
// Throws kInvalidSchema, kUnresolvableAttribute.
void register_workflow(CatalogGraph& catalog, const WorkflowDef& workflow);

// Timestamps default to the wall clock; fixtures pass them explicitly so that
// loading the same capture twice yields identical catalogs.
std::string begin_workflow_execution(CatalogGraph& catalog, std::string_view workflow,
                                     std::optional<std::int64_t> started_at = std::nullopt);

// Throws kUnknownExecution, kClosedExecution, kUnresolvableAttribute.
void record_transformation_execution(CatalogGraph& catalog, std::string_view execution,
                                     std::string_view transformation,
                                     std::span<const AttributeValueRecord> values);

// Throws kUnknownExecution, kClosedExecution, kInvalidArgument (ended before
// it started).
void end_workflow_execution(CatalogGraph& catalog, std::string_view execution,
                            std::optional<std::int64_t> ended_at = std::nullopt);

ExecutionInfo execution_info(const CatalogGraph& catalog, std::string_view execution);
std::vector<std::string> open_executions(const CatalogGraph& catalog);
std::vector<std::string> executions_of(const CatalogGraph& catalog, std::string_view workflow);
bool has_workflow(const CatalogGraph& catalog, std::string_view workflow);
NodeId execution_node(std::string_view execution);

// The catalog traversal from attribute values to the executions of
// `workflow`, binding ?wfe ?dte ?atv ?atvValue ?att ?attName ?datasetSchema
// ?datasetSchemaName ?dataStore ?dataStoreName.
Pattern data_reference_pattern(std::string_view workflow);

// One row per execution of `workflow`, in execution-id order, holding for each
// requested store the identifier value the execution captured. A generated
// value takes precedence over a used one.
// Throws kUnknownWorkflow, kMissingReference, kConflictingReference.
std::vector<DataReferenceRow> data_references_for(const CatalogGraph& catalog, std::string_view workflow,
                                                  std::span<const std::string> stores);

// Stores for which any execution of `workflow` captured an identifier value.
std::vector<std::string> referenced_stores(const CatalogGraph& catalog, std::string_view workflow);

}  // namespace polyfed
