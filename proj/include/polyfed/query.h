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

// The global query language: a small select/where/from language over the
// global conceptual schema.
//
//   query  := "select" qualname ("," qualname)* "where" ident "from" ident
//             ("and" filter)*
//   filter := qualname op literal
//   op     := "=" | "!=" | "<" | "<=" | ">" | ">="
//   literal:= double-quoted string | integer | decimal number
//
// Keywords are case-insensitive and reserved; identifiers are case-sensitive.
// All qualified names must belong to the entity named after "where".

#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polyfed/catalog.h"
#include "polyfed/error.h"
#include "polyfed/scalar.h"

namespace polyfed {

struct QualifiedAttribute {
  std::string entity;
  std::string attribute;

  std::string str() const { return entity + "." + attribute; }
  auto operator<=>(const QualifiedAttribute&) const = default;
};

struct QueryFilter {
  QualifiedAttribute attribute;
  CompareOp op = CompareOp::kEq;
  Scalar value;

  bool operator==(const QueryFilter&) const = default;
};

struct GlobalQuery {
  std::vector<QualifiedAttribute> projections;
  std::string subject_entity;
  std::string workflow;
  std::vector<QueryFilter> filters;

  bool operator==(const GlobalQuery&) const = default;
};

struct SourcePosition {
  std::size_t line = 1;
  std::size_t column = 1;

  auto operator<=>(const SourcePosition&) const = default;
};

class QueryParseError : public Error {
 public:
  QueryParseError(SourcePosition position, std::set<std::string> expected, std::string found);

  const SourcePosition& position() const noexcept { return position_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  SourcePosition position_;
  std::set<std::string> expected_;
  std::string found_;
};

// Throws QueryParseError.
GlobalQuery parse_query(std::string_view text);

// Canonical single-line form; parse_query(render_query(q)) == q.
std::string render_query(const GlobalQuery& query);

// Checks names against the catalog. Throws kUnknownEntity, kUnknownAttribute,
// kUnknownWorkflow.
void validate_query(const GlobalQuery& query, const CatalogGraph& catalog);

}  // namespace polyfed
