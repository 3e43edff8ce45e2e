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

#include "polyfed/complexity.h"

namespace polyfed {

ComplexityReport complexity_of_global(const GlobalQuery& query) {
  return {query.projections.size(), query.filters.size(), 0, 1};
}

ComplexityReport complexity_of_plan(const FederatedPlan& plan) {
  return {plan.output_columns.size(), plan.source_filter_count, plan.join_spec.size(),
          plan.local_queries.size() + 1};
}

}  // namespace polyfed
