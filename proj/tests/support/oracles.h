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

// Independent reference implementations used by the property tests, plus the
// random instance generators that feed them. Nothing here calls the code it
// checks except to build inputs and to read its answers.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polyfed/catalog.h"
#include "polyfed/federation.h"
#include "polyfed/planner.h"
#include "polyfed/provenance.h"
#include "polyfed/query.h"
#include "polyfed/schema_registry.h"

namespace polyfed::testing {

using Rng = std::mt19937_64;

// Uniform integer in [lo, hi].
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi);
bool chance(Rng& rng, double p);

// Type-strict comparison written from scratch: values of different types
// never satisfy any operator.
bool oracle_compare(const Scalar& lhs, CompareOp op, const Scalar& rhs);

// ---------------------------------------------------------------------------
// Triple patterns.

// Evaluates templates in the given order, trying every stored link for every
// template and branch. Sorting and dedup follow the documented contract.
std::vector<Binding> brute_force_match(const CatalogGraph& catalog, const Pattern& pattern,
                                       const MatchOptions& options = {});

// Small random graph over a handful of node ids, predicates and literals so
// that random patterns have joins to find. Also populates contexts.
CatalogGraph random_catalog(Rng& rng, std::size_t max_links);

// Up to `max_templates` templates drawing variables from a small pool.
Pattern random_pattern(Rng& rng, const CatalogGraph& catalog, std::size_t max_templates);

// Everything persistence must preserve, in a canonical order: nodes by id,
// links as sorted triples, context members as sorted pairs.
struct CatalogStructure {
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<std::pair<NodeId, NodeId>> node_members;
  std::vector<std::pair<NodeId, Link>> link_members;
  bool operator==(const CatalogStructure&) const = default;
};
CatalogStructure structure_of(const CatalogGraph& catalog);

// ---------------------------------------------------------------------------
// Provenance traversal.

struct ReferenceOracle {
  std::vector<std::string> executions;  // short ids, sorted
  // execution -> store -> chosen reference; absent when nothing was captured
  std::map<std::string, std::map<std::string, DataReference>> chosen;
  // (execution, store) pairs where two different references compete
  std::vector<std::pair<std::string, std::string>> conflicts;
};

// Runs the full data-reference pattern through brute_force_match (once per
// capture direction), keeps identifier attributes only, and applies the
// generated-over-used rule.
ReferenceOracle brute_force_references(const CatalogGraph& catalog, std::string_view workflow);

// Scenario schemas with a random number of executions and random captured
// values (identifier and non-identifier, used and generated).
CatalogGraph random_provenance_catalog(Rng& rng, std::size_t max_executions);

// ---------------------------------------------------------------------------
// Federation instances.

// A logical record: attribute -> values. Several values model multi-valued
// triple predicates; an absent attribute models a missing field.
using Record = std::map<std::string, std::vector<Scalar>>;

struct StoreTruth {
  std::string name;
  StoreKind kind = StoreKind::kRelationalDB;
  std::string dataset;
  std::string identifier;
  std::vector<std::string> attributes;  // includes identifier
  std::vector<Record> records;
};

struct Instance {
  CatalogGraph catalog;
  std::vector<StoreTruth> stores;
  // gcs attribute name -> (store index, lcs attribute) targets
  std::map<std::string, std::vector<std::pair<std::size_t, std::string>>> aliases;
  std::vector<std::string> gcs_attributes;
  std::string entity = "Thing";
  std::string workflow = "wf";
  std::vector<std::string> executions;
  // per execution, per store index: the captured identifier
  std::vector<std::vector<Scalar>> references;
};

struct InstanceSpec {
  std::size_t max_executions = 5;
  std::size_t max_rows = 20;
  // Chance that a record lacks a non-identifier attribute.
  double missing_rate = 0.1;
};

Instance random_instance(Rng& rng, const InstanceSpec& spec = {});

// Builds in-memory adapters holding the instance's records. With
// `pushdown` false every adapter filters after the scan.
AdapterMap instance_adapters(const Instance& instance, bool pushdown);

// A random query whose projections each map to exactly one store.
GlobalQuery random_query(Rng& rng, const Instance& instance);

// Nested-loop evaluation from the instance's ground truth: for each
// execution, every combination of one record row per involved store whose
// identifier equals the captured reference and which satisfies the filters.
// Involved stores are those serving a projection or a filter; `extra_stores`
// adds the rest as unconstrained cross-joined tables. Deduplicated.
std::vector<Row> nested_loop_oracle(const Instance& instance, const GlobalQuery& query, bool extra_stores);

// ---------------------------------------------------------------------------
// SQL.

// Evaluates the SELECT text produced by render_sql over named tables. Only
// the shapes render_sql emits are accepted; anything else throws
// std::runtime_error.
using SqlTable = std::vector<std::map<std::string, Scalar>>;
std::vector<Row> evaluate_sql(const std::string& sql, const std::map<std::string, SqlTable>& tables);

// Tables for evaluate_sql from an instance: one row per expanded record.
std::map<std::string, SqlTable> instance_tables(const Instance& instance);

// Sorted copy, for multiset comparison.
std::vector<Row> sorted(std::vector<Row> rows);

// Compares data_references_for against the pattern oracle for every single
// referenced store and for all of them together, including which error the
// first failing (execution, store) pair must raise. Empty when they agree,
// otherwise a description of the first difference.
std::string reference_mismatch(const CatalogGraph& catalog, std::string_view workflow);

// Random ASTs over the whole literal space of the query language.
GlobalQuery random_ast(Rng& rng);
// A few character edits: deletions, insertions, replacements, truncation.
std::string mutate_text(Rng& rng, std::string text);
// True when `p` addresses a character of `text` or the position just past
// the end of a line.
bool position_within(const std::string& text, SourcePosition p);

}  // namespace polyfed::testing
