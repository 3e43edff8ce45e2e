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

#include "polyfed/planner.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "polyfed/provenance.h"
#include "polyfed/schema_registry.h"

namespace polyfed {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower_or_digit(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }
bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string sanitize_column(std::string_view store) {
  std::string out;
  for (char c : store) out += is_word(c) && static_cast<unsigned char>(c) < 0x80 ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out = "s_" + out;
  return out;
}

std::string quote_ident(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string sql_literal(const Scalar& v) {
  if (const auto* s = std::get_if<std::string>(&v)) {
    std::string out = "'";
    for (char c : *s) {
      if (c == '\'') out += '\'';
      out += c;
    }
    return out + "'";
  }
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return std::get<bool>(v) ? "TRUE" : "FALSE";
}

std::string_view sql_op(CompareOp op) { return op == CompareOp::kNe ? "<>" : to_string(op); }

struct Builder {
  const CatalogGraph& catalog;
  FederatedPlan plan;
  std::map<std::string, std::size_t> by_store;

  std::size_t local_for(const AttributeRef& ref) {
    auto it = by_store.find(ref.store);
    if (it != by_store.end()) {
      const LocalQuery& lq = plan.local_queries[it->second];
      if (lq.dataset != ref.dataset) {
        throw Error(ErrorCode::kAmbiguousMapping, "store " + ref.store + " serves the query from both " +
                                                      lq.dataset + " and " + ref.dataset);
      }
      return it->second;
    }
    LocalQuery lq;
    lq.store = ref.store;
    lq.dataset = ref.dataset;
    lq.identifier = identifier_of(catalog, ref.store, ref.dataset);
    plan.local_queries.push_back(std::move(lq));
    by_store.emplace(ref.store, plan.local_queries.size() - 1);
    return plan.local_queries.size() - 1;
  }

  GcsAttribute global(const QualifiedAttribute& a) {
    auto gcs = find_gcs_attribute(catalog, a.entity, a.attribute);
    if (!gcs) throw Error(ErrorCode::kUnknownAttribute, "no global attribute '" + a.str() + "'");
    if (gcs->complex) throw Error(ErrorCode::kComplexAttribute, a.str() + " is a complex attribute");
    return *gcs;
  }
};

void add_unique(std::vector<std::string>& list, const std::string& value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
}

}  // namespace

std::optional<std::size_t> ConstantTable::column_of(std::string_view store) const {
  for (std::size_t i = 0; i < stores.size(); ++i) {
    if (stores[i] == store) return i;
  }
  return std::nullopt;
}

const LocalQuery* FederatedPlan::find(std::string_view store) const {
  for (const auto& lq : local_queries) {
    if (lq.store == store) return &lq;
  }
  return nullptr;
}

std::string sql_table_name(std::string_view dataset) {
  std::string out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const char c = dataset[i];
    if (!is_word(c) || static_cast<unsigned char>(c) >= 0x80) {
      if (!out.empty() && out.back() != '_') out += '_';
      continue;
    }
    if (is_upper(c) && i > 0) {
      const char prev = dataset[i - 1];
      const bool next_lower = i + 1 < dataset.size() && dataset[i + 1] >= 'a' && dataset[i + 1] <= 'z';
      if ((is_lower_or_digit(prev) || (is_upper(prev) && next_lower)) && !out.empty() && out.back() != '_') out += '_';
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out = "t_" + out;
  return out;
}

FederatedPlan plan_query(const GlobalQuery& query, const CatalogGraph& catalog, const PlanOptions& options) {
  Builder b{catalog, {}, {}};
  b.plan.workflow = query.workflow;

  for (const QualifiedAttribute& p : query.projections) {
    const GcsAttribute gcs = b.global(p);
    const std::string canonical = gcs.entity + "." + gcs.name;
    const std::vector<AttributeRef> refs = resolve_attribute(catalog, canonical);
    if (refs.empty()) throw Error(ErrorCode::kUnmappedAttribute, canonical + " has no local mapping");
    if (refs.size() > 1) {
      std::string where;
      for (const auto& r : refs) where += (where.empty() ? "" : ", ") + r.store + ":" + r.dataset + "." + r.attribute;
      throw Error(ErrorCode::kAmbiguousMapping, canonical + " maps to " + where);
    }
    const std::size_t q = b.local_for(refs.front());
    add_unique(b.plan.local_queries[q].projection, refs.front().attribute);
    b.plan.output_columns.push_back({p.attribute, canonical, q, refs.front().attribute});
  }

  for (std::size_t i = 0; i < query.filters.size(); ++i) {
    const QueryFilter& f = query.filters[i];
    const GcsAttribute gcs = b.global(f.attribute);
    const std::string canonical = gcs.entity + "." + gcs.name;
    const std::vector<AttributeRef> refs = resolve_attribute(catalog, canonical);
    if (refs.empty()) throw Error(ErrorCode::kUnmappedAttribute, canonical + " has no local mapping");
    for (const AttributeRef& r : refs) {
      const std::size_t q = b.local_for(r);
      b.plan.local_queries[q].filters.push_back({r.attribute, f.op, f.value, i});
    }
    ++b.plan.source_filter_count;
  }

  const std::size_t joined = b.plan.local_queries.size();
  std::vector<std::string> extras;
  if (!options.prune) {
    for (const std::string& s : referenced_stores(catalog, query.workflow)) {
      if (!b.by_store.count(s)) extras.push_back(s);
    }
    std::sort(extras.begin(), extras.end());
  }

  std::vector<std::string> stores;
  for (const auto& lq : b.plan.local_queries) stores.push_back(lq.store);
  stores.insert(stores.end(), extras.begin(), extras.end());

  const std::vector<DataReferenceRow> rows = data_references_for(catalog, query.workflow, stores);
  if (rows.empty()) throw Error(ErrorCode::kNoExecutions, "workflow " + query.workflow + " has no executions");

  for (const std::string& s : extras) {
    const DataReference& ref = rows.front().references.at(s);
    b.plan.local_queries.push_back({s, ref.dataset, {}, {}, ref.attribute});
  }

  ConstantTable& table = b.plan.constant_table;
  std::set<std::string> taken;
  for (LocalQuery& lq : b.plan.local_queries) {
    add_unique(lq.projection, lq.identifier);
    std::string base = sanitize_column(lq.store);
    std::string column = base + "_prov_id";
    for (int n = 2; !taken.insert(column).second; ++n) column = base + "_" + std::to_string(n) + "_prov_id";
    table.stores.push_back(lq.store);
    table.columns.push_back(column);
  }
  for (const DataReferenceRow& row : rows) {
    std::vector<Scalar> values;
    for (const LocalQuery& lq : b.plan.local_queries) {
      const DataReference& ref = row.references.at(lq.store);
      if (ref.dataset != lq.dataset) {
        throw Error(ErrorCode::kMissingReference, "execution " + row.workflow_execution + " captured no reference into " +
                                                      lq.store + ":" + lq.dataset + " (found " + ref.dataset + ")");
      }
      values.push_back(ref.value);
    }
    table.executions.push_back(row.workflow_execution);
    table.rows.push_back(std::move(values));
  }
  for (std::size_t i = 0; i < joined; ++i) b.plan.join_spec.push_back({i, i});
  return std::move(b.plan);
}

std::string render_sql(const FederatedPlan& plan) {
  // Table names; a dataset name shared by two stores is qualified by store.
  std::vector<std::string> tables;
  std::map<std::string, int> uses;
  for (const auto& lq : plan.local_queries) ++uses[sql_table_name(lq.dataset)];
  for (const auto& lq : plan.local_queries) {
    std::string t = sql_table_name(lq.dataset);
    if (uses[t] > 1) t = sql_table_name(lq.store) + "_" + t;
    tables.push_back(t);
  }
  auto alias = [&](std::size_t q) { return "fdw_" + tables[q]; };
  auto column = [&](std::size_t q, const std::string& attr) { return alias(q) + "." + quote_ident(attr); };

  std::string sql = "SELECT";
  if (plan.distinct) sql += " distinct";
  for (std::size_t i = 0; i < plan.output_columns.size(); ++i) {
    const OutputColumn& c = plan.output_columns[i];
    sql += (i ? ",\n  " : " ") + column(c.query, c.lcs_attribute);
  }
  sql += "\nFROM ";
  for (std::size_t q = 0; q < plan.local_queries.size(); ++q) {
    sql += tables[q] + " " + alias(q) + ",\n  ";
  }
  const ConstantTable& ct = plan.constant_table;
  sql += "( VALUES ";
  for (std::size_t r = 0; r < ct.rows.size(); ++r) {
    sql += r ? ",\n    ( " : "( ";
    for (std::size_t c = 0; c < ct.rows[r].size(); ++c) sql += (c ? ", " : "") + sql_literal(ct.rows[r][c]);
    sql += " )";
  }
  sql += " )\n  as p(";
  for (std::size_t c = 0; c < ct.columns.size(); ++c) sql += (c ? ", " : "") + ct.columns[c];
  sql += ")";

  std::vector<std::string> predicates;
  for (const JoinPredicate& j : plan.join_spec) {
    predicates.push_back(column(j.query, plan.local_queries[j.query].identifier) + " = p." + ct.columns[j.column]);
  }
  // Filters grouped by source filter so replicated predicates sit together.
  for (std::size_t f = 0;; ++f) {
    bool any_left = false;
    for (std::size_t q = 0; q < plan.local_queries.size(); ++q) {
      for (const LocalFilter& lf : plan.local_queries[q].filters) {
        if (lf.source_filter > f) any_left = true;
        if (lf.source_filter != f) continue;
        predicates.push_back(column(q, lf.attribute) + " " + std::string(sql_op(lf.op)) + " " + sql_literal(lf.value));
      }
    }
    if (!any_left) break;
  }
  for (std::size_t i = 0; i < predicates.size(); ++i) sql += (i ? "\n  AND " : "\nWHERE ") + predicates[i];
  sql += "\n";
  return sql;
}

}  // namespace polyfed
