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

#include "polyfed/service.h"

#include <chrono>
#include <iostream>
#include <regex>

#include <httplib.h>

#include "polyfed/complexity.h"
#include "polyfed/ingest.h"
#include "polyfed/planner.h"
#include "polyfed/provenance.h"
#include "polyfed/query.h"
#include "polyfed/schema_registry.h"
#include "polyfed/stores.h"

namespace polyfed {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

HttpResponse json_response(int status, const Json& body) { return {status, body.dump()}; }

HttpResponse error_response(const Error& e) {
  Json body{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* pe = dynamic_cast<const QueryParseError*>(&e)) {
    body["line"] = pe->position().line;
    body["column"] = pe->position().column;
    body["expected"] = pe->expected();
    body["found"] = pe->found();
  }
  return json_response(http_status_for(e.code()), body);
}

Json parse_body(const std::string& body) {
  try {
    return body.empty() ? Json::object() : Json::parse(body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseFailure, std::string("request body is not JSON: ") + e.what());
  }
}

Json row_to_json(const Row& row) {
  Json out = Json::array();
  for (const Scalar& v : row) out.push_back(scalar_to_json(v));
  return out;
}

Json complexity_json(const ComplexityReport& c) {
  return {{"projection", c.projection},
          {"filter", c.filter},
          {"join_clause", c.join_clause},
          {"from_clause", c.from_clause},
          {"total", c.total()}};
}

Json plan_json(const FederatedPlan& plan) {
  Json locals = Json::array();
  for (const LocalQuery& lq : plan.local_queries) {
    Json filters = Json::array();
    for (const LocalFilter& f : lq.filters) {
      filters.push_back({{"attribute", f.attribute}, {"op", std::string(to_string(f.op))}, {"value", scalar_to_json(f.value)}});
    }
    locals.push_back({{"store", lq.store},
                      {"dataset", lq.dataset},
                      {"projection", lq.projection},
                      {"filters", filters},
                      {"identifier", lq.identifier}});
  }
  Json rows = Json::array();
  for (const auto& r : plan.constant_table.rows) rows.push_back(row_to_json(r));
  return {{"workflow", plan.workflow},
          {"local_queries", locals},
          {"constant_table", {{"columns", plan.constant_table.columns}, {"executions", plan.constant_table.executions},
                              {"rows", rows}}},
          {"joins", plan.join_spec.size()}};
}

std::optional<std::int64_t> optional_timestamp(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number_integer()) throw Error(ErrorCode::kInvalidArgument, std::string(key) + " must be an integer");
  return j.at(key).get<std::int64_t>();
}

void save_atomically(const CatalogGraph& catalog, const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  catalog.save(tmp);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kQuerySyntax:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParseFailure:
      return 400;
    case ErrorCode::kUnknownExecution:
      return 404;
    case ErrorCode::kDuplicateId:
    case ErrorCode::kDuplicateTriple:
    case ErrorCode::kDuplicateEntity:
    case ErrorCode::kDuplicateStore:
    case ErrorCode::kDuplicateDataset:
    case ErrorCode::kClosedExecution:
      return 409;
    case ErrorCode::kUnknownContext:
    case ErrorCode::kUnknownNode:
    case ErrorCode::kContextCycle:
    case ErrorCode::kUnknownReferredTarget:
    case ErrorCode::kUnknownAttribute:
    case ErrorCode::kUnknownDataset:
    case ErrorCode::kMissingIdentifier:
    case ErrorCode::kInvalidSchema:
    case ErrorCode::kUnresolvableAttribute:
    case ErrorCode::kUnknownWorkflow:
    case ErrorCode::kMissingReference:
    case ErrorCode::kConflictingReference:
    case ErrorCode::kUnknownEntity:
    case ErrorCode::kUnmappedAttribute:
    case ErrorCode::kAmbiguousMapping:
    case ErrorCode::kComplexAttribute:
    case ErrorCode::kNoExecutions:
      return 422;
    case ErrorCode::kIoFailure:
    case ErrorCode::kMissingAdapter:
      return 500;
  }
  return 500;
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  auto state = std::make_shared<State>();
  std::error_code ec;
  if (config_.catalog_path && fs::exists(*config_.catalog_path, ec)) {
    state->catalog = CatalogGraph::load(*config_.catalog_path);
  } else if (config_.fixture_dir) {
    load_fixture(state->catalog, *config_.fixture_dir);
    if (config_.catalog_path) save_atomically(state->catalog, *config_.catalog_path);
  }
  state->adapters = load_adapters(state->catalog);
  state_ = std::move(state);
}

Service::Service(ServiceConfig config, CatalogGraph catalog, AdapterMap adapters) : config_(std::move(config)) {
  state_ = std::make_shared<const State>(State{std::move(catalog), std::move(adapters)});
}

std::shared_ptr<const Service::State> Service::snapshot() const {
  std::shared_lock lock(state_mutex_);
  return state_;
}

std::shared_ptr<const CatalogGraph> Service::catalog() const {
  auto s = snapshot();
  return std::shared_ptr<const CatalogGraph>(s, &s->catalog);
}

void Service::publish(std::shared_ptr<const State> next) {
  std::unique_lock lock(state_mutex_);
  state_ = std::move(next);
}

template <class Fn>
HttpResponse Service::mutate(Fn&& fn) {
  std::lock_guard writer(writer_mutex_);
  auto next = std::make_shared<State>(*snapshot());
  HttpResponse response = fn(*next);
  if (config_.catalog_path) save_atomically(next->catalog, *config_.catalog_path);
  publish(std::move(next));
  return response;
}

HttpResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  static const std::regex kExecution("^/provenance/executions/([^/]+)(/transformations|/end)?$");
  try {
    std::smatch m;
    const bool post = method == "POST";
    if (path == "/health") {
      if (method != "GET") return json_response(405, {{"error", "MethodNotAllowed"}});
      return json_response(200, {{"status", "ok"}});
    }
    if (path == "/query") {
      if (!post) return json_response(405, {{"error", "MethodNotAllowed"}});
      return query(body);
    }
    if (path == "/schema/gcs" || path == "/schema/lcs" || path == "/schema/alias" || path == "/provenance/workflows" ||
        path == "/provenance/executions") {
      if (!post) return json_response(405, {{"error", "MethodNotAllowed"}});
      const Json doc = parse_body(body);
      if (path == "/schema/gcs") {
        const auto entities = gcs_from_json(doc);
        return mutate([&](State& s) {
          register_gcs(s.catalog, entities);
          Json names = Json::array();
          for (const auto& e : entities) names.push_back(e.name);
          return json_response(201, {{"registered", names}});
        });
      }
      if (path == "/schema/lcs") {
        const DataStoreDescriptor desc = lcs_from_json(doc);
        // Load the store before touching the catalog so a bad directory
        // leaves nothing behind.
        std::shared_ptr<StoreAdapter> adapter;
        if (desc.data_dir) adapter = load_store(desc.kind, desc.name, *desc.data_dir);
        return mutate([&](State& s) {
          register_lcs(s.catalog, desc);
          if (adapter) s.adapters[desc.name] = adapter;
          return json_response(201, {{"store", desc.name}});
        });
      }
      if (path == "/schema/alias") {
        const auto mappings = aliases_from_json(doc);
        return mutate([&](State& s) {
          for (const auto& a : mappings) create_alias(s.catalog, a);
          return json_response(201, {{"created", mappings.size()}});
        });
      }
      if (path == "/provenance/workflows") {
        const WorkflowDef wf = workflow_from_json(doc);
        return mutate([&](State& s) {
          register_workflow(s.catalog, wf);
          return json_response(201, {{"workflow", wf.name}});
        });
      }
      if (!doc.is_object() || !doc.contains("workflow") || !doc.at("workflow").is_string()) {
        throw Error(ErrorCode::kInvalidArgument, "expected {\"workflow\": name}");
      }
      const std::string workflow = doc.at("workflow").get<std::string>();
      const auto started = optional_timestamp(doc, "started_at");
      return mutate([&](State& s) {
        const std::string id = begin_workflow_execution(s.catalog, workflow, started);
        return json_response(201, {{"id", id}, {"workflow", workflow}});
      });
    }
    if (std::regex_match(path, m, kExecution)) {
      const std::string id = m[1].str();
      const std::string action = m[2].str();
      if (action.empty()) {
        if (method != "GET") return json_response(405, {{"error", "MethodNotAllowed"}});
        const ExecutionInfo info = execution_info(snapshot()->catalog, id);
        Json out{{"id", info.id}, {"workflow", info.workflow}, {"started_at", info.started_at},
                 {"status", info.open ? "open" : "closed"}};
        if (info.ended_at) out["ended_at"] = *info.ended_at;
        return json_response(200, out);
      }
      if (!post) return json_response(405, {{"error", "MethodNotAllowed"}});
      const Json doc = parse_body(body);
      if (action == "/transformations") {
        const TransformationRun run = transformation_run_from_json(doc);
        return mutate([&](State& s) {
          record_transformation_execution(s.catalog, id, run.name, run.values);
          return json_response(201, {{"execution", id}, {"transformation", run.name}, {"values", run.values.size()}});
        });
      }
      const auto ended = optional_timestamp(doc, "ended_at");
      return mutate([&](State& s) {
        end_workflow_execution(s.catalog, id, ended);
        return json_response(200, {{"id", id}, {"status", "closed"}});
      });
    }
    return json_response(404, {{"error", "NotFound"}, {"message", "no route for " + path}});
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return json_response(500, {{"error", "Internal"}, {"message", e.what()}});
  }
}

HttpResponse Service::query(const std::string& body) const {
  const Json doc = parse_body(body);
  if (!doc.is_object() || !doc.contains("text") || !doc.at("text").is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "expected {\"text\": query}");
  }
  bool explain = false;
  if (doc.contains("explain")) {
    if (!doc.at("explain").is_boolean()) throw Error(ErrorCode::kInvalidArgument, "explain must be a boolean");
    explain = doc.at("explain").get<bool>();
  }
  const auto state = snapshot();

  const auto t0 = Clock::now();
  const GlobalQuery q = parse_query(doc.at("text").get<std::string>());
  validate_query(q, state->catalog);
  const FederatedPlan plan = plan_query(q, state->catalog);
  const std::string sql = render_sql(plan);
  const double build_ms = ms_since(t0);

  Json stats{{"build_ms", build_ms},
             {"exec_ms", 0.0},
             {"stores_touched", plan.local_queries.size()},
             {"constant_table_rows", plan.constant_table.rows.size()}};
  Json columns = Json::array();
  for (const auto& c : plan.output_columns) columns.push_back(c.name);

  if (explain) {
    return json_response(200, {{"columns", columns},
                               {"rows", Json::array()},
                               {"stats", stats},
                               {"rendered_sql", sql},
                               {"plan", plan_json(plan)},
                               {"complexity",
                                {{"global", complexity_json(complexity_of_global(q))},
                                 {"federated", complexity_json(complexity_of_plan(plan))}}}});
  }
  const auto t1 = Clock::now();
  ExecutionStats exec_stats;
  const ResultTable result = execute(plan, state->adapters, {}, &exec_stats);
  stats["exec_ms"] = ms_since(t1);
  Json rows = Json::array();
  for (const Row& r : result.rows) rows.push_back(row_to_json(r));
  return json_response(200, {{"columns", result.columns}, {"rows", rows}, {"stats", stats}});
}

int serve(Service& service) {
  httplib::Server server;
  const int verbosity = service.config().verbosity;
  auto route = [&service, verbosity](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
    if (verbosity >= 1) std::clog << req.method << ' ' << req.path << ' ' << r.status << '\n';
    if (verbosity >= 2) std::clog << "  " << r.body << '\n';
  };
  const std::string any = R"(/.*)";
  server.Get(any, route);
  server.Post(any, route);
  server.Put(any, route);
  server.Delete(any, route);
  if (verbosity >= 1) {
    std::clog << "listening on " << service.config().host << ':' << service.config().port << '\n';
  }
  return server.listen(service.config().host, service.config().port) ? 0 : 1;
}

}  // namespace polyfed
