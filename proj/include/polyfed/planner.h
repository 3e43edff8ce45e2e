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

// Translation of a validated global query into a federated plan: one local
// query per participating store, a constant table of data references (one
// row per workflow execution) and identifier equalities joining the two.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyfed/catalog.h"
#include "polyfed/query.h"
#include "polyfed/scalar.h"

namespace polyfed {

struct LocalFilter {
  std::string attribute;  // LCS attribute of the local dataset
  CompareOp op = CompareOp::kEq;
  Scalar value;
  std::size_t source_filter = 0;  // index into GlobalQuery::filters

  bool operator==(const LocalFilter&) const = default;
};

struct LocalQuery {
  std::string store;
  std::string dataset;
  std::vector<std::string> projection;  // always contains `identifier`
  std::vector<LocalFilter> filters;
  std::string identifier;

  bool operator==(const LocalQuery&) const = default;
};

struct ConstantTable {
  std::vector<std::string> stores;      // one column per store
  std::vector<std::string> columns;     // "<store>_prov_id", sanitized
  std::vector<std::string> executions;  // one per row
  std::vector<std::vector<Scalar>> rows;

  std::optional<std::size_t> column_of(std::string_view store) const;
  bool operator==(const ConstantTable&) const = default;
};

// local_queries[query].identifier = constant_table column `column`.
struct JoinPredicate {
  std::size_t query = 0;
  std::size_t column = 0;

  bool operator==(const JoinPredicate&) const = default;
};

struct OutputColumn {
  std::string name;           // as written in the query, e.g. "hasWell"
  std::string gcs_attribute;  // canonical "Entity.attr"
  std::size_t query = 0;      // index into local_queries
  std::string lcs_attribute;

  bool operator==(const OutputColumn&) const = default;
};

struct FederatedPlan {
  std::string workflow;
  std::vector<LocalQuery> local_queries;
  ConstantTable constant_table;
  std::vector<JoinPredicate> join_spec;
  std::vector<OutputColumn> output_columns;
  // Global filters that produced at least one local filter.
  std::size_t source_filter_count = 0;
  bool distinct = true;

  const LocalQuery* find(std::string_view store) const;
  bool operator==(const FederatedPlan&) const = default;
};

struct PlanOptions {
  // Drop stores that hold references but serve no projection or filter. When
  // false such stores stay in the plan without a join predicate, reproducing
  // the cross-joined table of the hand-written federated SQL.
  bool prune = true;
};

// Throws kUnmappedAttribute, kAmbiguousMapping, kComplexAttribute,
// kNoExecutions, and provenance errors (kMissingReference, ...).
FederatedPlan plan_query(const GlobalQuery& query, const CatalogGraph& catalog, const PlanOptions& options = {});

// Deterministic SQL text equivalent to the plan.
std::string render_sql(const FederatedPlan& plan);

// Foreign-table style name for a dataset ("SeismicHeader" -> "seismic_header").
std::string sql_table_name(std::string_view dataset);

}  // namespace polyfed
