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

// Unweighted component counts of a query, used as a proxy for the effort of
// writing it by hand: projected columns, filter predicates, join predicates
// and from-clause elements.

#pragma once

#include <cstddef>

#include "polyfed/planner.h"
#include "polyfed/query.h"

namespace polyfed {

struct ComplexityReport {
  std::size_t projection = 0;
  std::size_t filter = 0;
  std::size_t join_clause = 0;
  std::size_t from_clause = 0;

  std::size_t total() const { return projection + filter + join_clause + from_clause; }

  ComplexityReport& operator+=(const ComplexityReport& o) {
    projection += o.projection;
    filter += o.filter;
    join_clause += o.join_clause;
    from_clause += o.from_clause;
    return *this;
  }
  friend ComplexityReport operator+(ComplexityReport a, const ComplexityReport& b) { return a += b; }
  bool operator==(const ComplexityReport&) const = default;
};

// The global language has no joins and exactly one from element.
ComplexityReport complexity_of_global(const GlobalQuery& query);

// A filter replicated into several local scopes is one predicate as far as
// the author is concerned, so it counts once. The constant table counts as a
// single from element.
ComplexityReport complexity_of_plan(const FederatedPlan& plan);

}  // namespace polyfed
