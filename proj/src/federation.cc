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

#include "polyfed/federation.h"

#include <algorithm>
#include <future>
#include <set>
#include <unordered_map>

namespace polyfed {

namespace {

std::size_t index_of(std::span<const std::string> list, std::string_view value) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), value) - list.begin());
}

struct ScalarHash {
  std::size_t operator()(const Scalar& v) const { return std::hash<Scalar>{}(v); }
};

using IdentifierIndex = std::unordered_map<Scalar, std::vector<std::size_t>, ScalarHash>;

}  // namespace

std::vector<Row> scan(const StoreAdapter& adapter, std::string_view dataset, std::span<const std::string> projection,
                      std::span<const ScanFilter> filters) {
  const std::vector<std::string> known = adapter.attributes(dataset);
  auto require = [&](const std::string& attr) {
    if (std::find(known.begin(), known.end(), attr) == known.end()) {
      throw Error(ErrorCode::kUnknownAttribute,
                  adapter.name() + ":" + std::string(dataset) + " has no attribute '" + attr + "'");
    }
  };
  for (const auto& p : projection) require(p);
  for (const auto& f : filters) require(f.attribute);

  if (adapter.supports_pushdown()) return adapter.read(dataset, projection, filters);

  // Fetch projection plus filter columns, filter here, then project.
  std::vector<std::string> columns(projection.begin(), projection.end());
  for (const auto& f : filters) {
    if (std::find(columns.begin(), columns.end(), f.attribute) == columns.end()) columns.push_back(f.attribute);
  }
  std::vector<Row> raw = adapter.read(dataset, columns, {});
  std::vector<Row> out;
  for (Row& row : raw) {
    bool keep = true;
    for (const auto& f : filters) {
      if (!compare(row[index_of(columns, f.attribute)], f.op, f.value)) {
        keep = false;
        break;
      }
    }
    if (!keep) continue;
    row.resize(projection.size());
    out.push_back(std::move(row));
  }
  return out;
}

ResultTable execute(const FederatedPlan& plan, const AdapterMap& adapters, const ExecuteOptions& options,
                    ExecutionStats* stats) {
  const std::size_t n = plan.local_queries.size();
  std::vector<const StoreAdapter*> resolved;
  for (const LocalQuery& lq : plan.local_queries) {
    auto it = adapters.find(lq.store);
    if (it == adapters.end() || !it->second) throw Error(ErrorCode::kMissingAdapter, "no adapter for store " + lq.store);
    resolved.push_back(it->second.get());
  }

  auto run = [&](std::size_t q) {
    const LocalQuery& lq = plan.local_queries[q];
    std::vector<ScanFilter> filters;
    for (const LocalFilter& f : lq.filters) filters.push_back({f.attribute, f.op, f.value});
    return scan(*resolved[q], lq.dataset, lq.projection, filters);
  };

  std::vector<std::vector<Row>> results(n);
  if (options.parallel_scans && n > 1) {
    std::vector<std::future<std::vector<Row>>> pending;
    for (std::size_t q = 0; q < n; ++q) pending.push_back(std::async(std::launch::async, run, q));
    // Collected in plan order, so completion order never matters.
    for (std::size_t q = 0; q < n; ++q) results[q] = pending[q].get();
  } else {
    for (std::size_t q = 0; q < n; ++q) results[q] = run(q);
  }

  // Join column per query, if any; unjoined queries are cross-joined.
  std::vector<std::optional<std::size_t>> join_column(n);
  for (const JoinPredicate& j : plan.join_spec) join_column[j.query] = j.column;

  std::vector<IdentifierIndex> index(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (!join_column[q]) continue;
    const std::size_t id_pos = index_of(plan.local_queries[q].projection, plan.local_queries[q].identifier);
    for (std::size_t r = 0; r < results[q].size(); ++r) index[q][results[q][r][id_pos]].push_back(r);
  }
  std::vector<std::vector<std::size_t>> every(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (join_column[q]) continue;
    every[q].resize(results[q].size());
    for (std::size_t r = 0; r < results[q].size(); ++r) every[q][r] = r;
  }

  struct Source {
    std::size_t query;
    std::size_t position;
  };
  std::vector<Source> sources;
  ResultTable table;
  for (const OutputColumn& c : plan.output_columns) {
    sources.push_back({c.query, index_of(plan.local_queries[c.query].projection, c.lcs_attribute)});
    table.columns.push_back(c.name);
  }

  static const std::vector<std::size_t> kNone;
  std::set<Row> seen;
  std::vector<const std::vector<std::size_t>*> matches(n);
  std::vector<std::size_t> cursor(n);
  for (const auto& ct_row : plan.constant_table.rows) {
    bool empty = false;
    for (std::size_t q = 0; q < n && !empty; ++q) {
      if (join_column[q]) {
        auto it = index[q].find(ct_row[*join_column[q]]);
        matches[q] = it == index[q].end() ? &kNone : &it->second;
      } else {
        matches[q] = &every[q];
      }
      empty = matches[q]->empty();
    }
    if (empty) continue;
    std::fill(cursor.begin(), cursor.end(), 0);
    for (;;) {
      Row out;
      out.reserve(sources.size());
      for (const Source& s : sources) out.push_back(results[s.query][(*matches[s.query])[cursor[s.query]]][s.position]);
      if (!plan.distinct || seen.insert(out).second) table.rows.push_back(std::move(out));
      bool done = true;
      for (std::size_t q = n; q-- > 0;) {
        if (++cursor[q] < matches[q]->size()) {
          done = false;
          break;
        }
        cursor[q] = 0;
      }
      if (done) break;
    }
  }

  if (stats) {
    stats->stores_touched = n;
    stats->constant_table_rows = plan.constant_table.rows.size();
    stats->local_rows = 0;
    for (const auto& r : results) stats->local_rows += r.size();
  }
  return table;
}

}  // namespace polyfed
