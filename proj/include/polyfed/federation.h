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

// Store adapters and the federated executor. Each local query of a plan is
// scanned from its store; results are then linked through the constant table
// by hash lookups on the stores' identifier attributes.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyfed/planner.h"
#include "polyfed/scalar.h"

namespace polyfed {

using Row = std::vector<Scalar>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<Row> rows;

  bool operator==(const ResultTable&) const = default;
};

struct ScanFilter {
  std::string attribute;
  CompareOp op = CompareOp::kEq;
  Scalar value;
};

class StoreAdapter {
 public:
  virtual ~StoreAdapter() = default;

  virtual const std::string& name() const = 0;
  virtual bool supports_pushdown() const = 0;
  virtual std::vector<std::string> datasets() const = 0;
  // Throws kUnknownDataset.
  virtual std::vector<std::string> attributes(std::string_view dataset) const = 0;

  // Raw access used by scan(). `columns` are known attributes of `dataset`.
  // An adapter claiming pushdown must return exactly the records satisfying
  // every filter; others ignore `filters`. A record lacking a value for one
  // of the columns yields no row.
  virtual std::vector<Row> read(std::string_view dataset, std::span<const std::string> columns,
                                std::span<const ScanFilter> filters) const = 0;
};

// Rows projected in `projection` order, filtered in-store or post-scan.
// Throws kUnknownDataset, kUnknownAttribute.
std::vector<Row> scan(const StoreAdapter& adapter, std::string_view dataset, std::span<const std::string> projection,
                      std::span<const ScanFilter> filters);

using AdapterMap = std::map<std::string, std::shared_ptr<const StoreAdapter>, std::less<>>;

struct ExecutionStats {
  std::size_t stores_touched = 0;
  std::size_t constant_table_rows = 0;
  std::size_t local_rows = 0;  // rows returned by all local scans
};

struct ExecuteOptions {
  bool parallel_scans = true;
};

// Throws kMissingAdapter and scan errors.
ResultTable execute(const FederatedPlan& plan, const AdapterMap& adapters, const ExecuteOptions& options = {},
                    ExecutionStats* stats = nullptr);

}  // namespace polyfed
