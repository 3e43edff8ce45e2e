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

// polyfed: command-line front end.
//
//   polyfed load <dir>                      ingest a fixture directory
//   polyfed query [-e] [--no-prune] [text]  run one query (text or stdin)
//   polyfed shell                           interactive query loop
//   polyfed bench --batches 1,10 --runs 50  timing harness
//   polyfed serve --port 8080               HTTP service
//
// The catalog lives at --catalog, else $POLYFED_CATALOG, else ./polyfed.kg.
// Exit codes: 0 ok, 1 usage, 2 parse/validation/planning, 3 execution.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyfed/bench.h"
#include "polyfed/complexity.h"
#include "polyfed/federation.h"
#include "polyfed/ingest.h"
#include "polyfed/planner.h"
#include "polyfed/provenance.h"
#include "polyfed/query.h"
#include "polyfed/schema_registry.h"
#include "polyfed/service.h"
#include "polyfed/stores.h"

namespace fs = std::filesystem;
using namespace polyfed;

namespace {

constexpr int kUsage = 1;
constexpr int kPlanFailure = 2;
constexpr int kExecFailure = 3;

// Tags an error with the stage it came from so main() can pick the code.
struct StageError {
  int exit_code;
  std::string message;
};

fs::path catalog_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("POLYFED_CATALOG"); env && *env) return env;
  return "polyfed.kg";
}

CatalogGraph open_catalog(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw StageError{kUsage, "no catalog at " + path.string() + "; run 'polyfed load <dir>' first"};
  }
  try {
    return CatalogGraph::load(path);
  } catch (const Error& e) {
    throw StageError{kExecFailure, path.string() + ": " + e.what()};
  }
}

std::string format_error(const Error& e) {
  std::string out = e.what();
  if (const auto* pe = dynamic_cast<const QueryParseError*>(&e)) {
    std::string expected;
    for (const auto& x : pe->expected()) expected += (expected.empty() ? "" : " or ") + x;
    out = "syntax error at line " + std::to_string(pe->position().line) + ", column " +
          std::to_string(pe->position().column) + ": expected " + expected + ", found " + pe->found();
  }
  return out;
}

struct Prepared {
  GlobalQuery query;
  FederatedPlan plan;
};

Prepared prepare(const std::string& text, const CatalogGraph& catalog, bool prune) {
  try {
    Prepared p{parse_query(text), {}};
    validate_query(p.query, catalog);
    p.plan = plan_query(p.query, catalog, PlanOptions{prune});
    return p;
  } catch (const Error& e) {
    throw StageError{kPlanFailure, format_error(e)};
  }
}

void print_table(std::ostream& out, const ResultTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "\t" : "") << table.columns[i];
  out << '\n';
  for (const Row& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << format_scalar(row[i]);
    out << '\n';
  }
}

ResultTable run_plan(const FederatedPlan& plan, const CatalogGraph& catalog) {
  try {
    return execute(plan, load_adapters(catalog));
  } catch (const Error& e) {
    throw StageError{kExecFailure, e.what()};
  }
}

void print_json(std::ostream& out, const ResultTable& table) {
  Json rows = Json::array();
  for (const Row& r : table.rows) {
    Json row = Json::array();
    for (const Scalar& v : r) row.push_back(scalar_to_json(v));
    rows.push_back(row);
  }
  out << Json{{"columns", table.columns}, {"rows", rows}}.dump(2) << '\n';
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw StageError{kUsage, "--batches expects positive integers separated by commas, got '" + text + "'"};
    }
  }
  if (out.empty()) throw StageError{kUsage, "--batches is empty"};
  return out;
}

int run_shell(const fs::path& path) {
  CatalogGraph catalog = open_catalog(path);
  AdapterMap adapters = load_adapters(catalog);
  std::cout << "polyfed shell; end a query with ';' or an empty line. "
               "Prefix with 'explain' for SQL, '\\q' quits.\n";
  std::string buffer, line;
  auto prompt = [&] { std::cout << (buffer.empty() ? "polyfed> " : "    ...> ") << std::flush; };
  auto run_buffer = [&] {
    std::string text = buffer;
    buffer.clear();
    bool explain = false;
    const auto start = text.find_first_not_of(" \t\n");
    if (text.compare(start, 7, "explain") == 0) {
      explain = true;
      text = text.substr(start + 7);
    }
    try {
      Prepared p = prepare(text, catalog, true);
      if (explain) {
        std::cout << render_sql(p.plan);
      } else {
        const ResultTable t = execute(p.plan, adapters);
        print_table(std::cout, t);
        std::cout << "(" << t.rows.size() << (t.rows.size() == 1 ? " row)\n" : " rows)\n");
      }
    } catch (const StageError& e) {
      std::cout << "error: " << e.message << '\n';
    } catch (const Error& e) {
      std::cout << "error: " << e.what() << '\n';
    }
  };
  auto blank = [&] { return buffer.find_first_not_of(" \t\n") == std::string::npos; };
  prompt();
  while (std::getline(std::cin, line)) {
    if (buffer.empty() && (line == "\\q" || line == "quit" || line == "exit")) break;
    bool complete = line.empty();
    if (!line.empty() && line.back() == ';') {
      line.pop_back();
      complete = true;
    }
    buffer += line + "\n";
    if (!complete || blank()) {
      if (complete) buffer.clear();
      prompt();
      continue;
    }
    run_buffer();
    prompt();
  }
  // End of input finishes a pending query.
  if (!blank()) {
    std::cout << '\n';
    run_buffer();
  }
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Provenance-linked polystore mediator"};
  app.require_subcommand(1);
  std::string catalog_flag;
  app.add_option("--catalog", catalog_flag, "Catalog file (default $POLYFED_CATALOG or ./polyfed.kg)");

  auto* load = app.add_subcommand("load", "Ingest a fixture directory into a new catalog");
  std::string load_dir;
  bool append = false;
  load->add_option("dir", load_dir, "Directory with gcs.json, lcs/, aliases.json, provenance.json")->required();
  load->add_flag("--append", append, "Add to the existing catalog instead of replacing it");

  auto* query = app.add_subcommand("query", "Run one query given as argument or on stdin");
  std::vector<std::string> query_words;
  bool explain = false, no_prune = false, as_json = false, complexity = false;
  query->add_option("text", query_words, "Query text");
  query->add_flag("-e,--explain", explain, "Print the federated SQL instead of executing");
  query->add_flag("--no-prune", no_prune, "Keep stores that serve no projection or filter");
  query->add_flag("--json", as_json, "Print results as JSON");
  query->add_flag("--complexity", complexity, "Print component counts of the query and its SQL");

  auto* shell = app.add_subcommand("shell", "Interactive query loop");

  auto* bench = app.add_subcommand("bench", "Build/execution timing over synthetic batches");
  std::string batches = "1,10,50,100", report_path, data_path;
  BenchmarkOptions bench_options;
  long sleep_ms = 0;
  bool sequential = false;
  bench->add_option("--batches", batches, "Comma-separated batch counts")->capture_default_str();
  bench->add_option("--runs", bench_options.runs, "Timed runs per batch count")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--warmup", bench_options.warmup, "Untimed runs per batch count")->capture_default_str();
  bench->add_option("--seed", bench_options.seed, "Generator seed")->capture_default_str();
  bench->add_option("--sleep", sleep_ms, "Milliseconds between timed runs")->capture_default_str()->check(CLI::NonNegativeNumber);
  bench->add_option("--query", bench_options.query, "Query to time (default: the scenario query)");
  bench->add_option("--report", report_path, "Also write the report to this file");
  bench->add_option("--data", data_path, "Write plot-ready data to this file");
  bench->add_flag("--sequential", sequential, "Scan stores one after another");

  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  ServiceConfig config;
  std::string fixtures;
  serve_cmd->add_option("--host", config.host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", config.port, "Listen port")->capture_default_str();
  serve_cmd->add_option("--fixtures", fixtures, "Fixture directory loaded when the catalog does not exist yet");
  serve_cmd->add_option("-v,--verbosity", config.verbosity, "0 quiet, 1 requests, 2 bodies")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  const fs::path path = catalog_path(catalog_flag);
  try {
    if (*load) {
      CatalogGraph catalog = append ? open_catalog(path) : CatalogGraph{};
      try {
        load_fixture(catalog, load_dir);
        catalog.save(path);
      } catch (const Error& e) {
        throw StageError{e.code() == ErrorCode::kIoFailure ? kExecFailure : kPlanFailure, e.what()};
      }
      std::size_t executions = 0;
      for (const Node& n : catalog.nodes()) executions += n.kind == NodeKind::kWorkflowExecution;
      std::cout << "loaded " << load_dir << " into " << path.string() << ": " << catalog.node_count() << " nodes, "
                << catalog.link_count() << " links, " << store_names(catalog).size() << " stores, " << executions
                << " executions\n";
      return 0;
    }
    if (*query) {
      std::string text;
      for (const auto& w : query_words) text += (text.empty() ? "" : " ") + w;
      if (text.empty()) text.assign(std::istreambuf_iterator<char>(std::cin), {});
      if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw StageError{kUsage, "empty query"};
      const CatalogGraph catalog = open_catalog(path);
      const Prepared p = prepare(text, catalog, !no_prune);
      if (complexity) {
        const ComplexityReport g = complexity_of_global(p.query), f = complexity_of_plan(p.plan);
        std::cout << "component\tglobal\tfederated\n"
                  << "projection\t" << g.projection << '\t' << f.projection << '\n'
                  << "filter\t" << g.filter << '\t' << f.filter << '\n'
                  << "join_clause\t" << g.join_clause << '\t' << f.join_clause << '\n'
                  << "from_clause\t" << g.from_clause << '\t' << f.from_clause << '\n'
                  << "total\t" << g.total() << '\t' << f.total() << '\n';
        return 0;
      }
      if (explain) {
        std::cout << render_sql(p.plan);
        return 0;
      }
      const ResultTable t = run_plan(p.plan, catalog);
      if (as_json) {
        print_json(std::cout, t);
      } else {
        print_table(std::cout, t);
      }
      return 0;
    }
    if (*shell) return run_shell(path);
    if (*bench) {
      bench_options.batch_counts = parse_counts(batches);
      bench_options.sleep = std::chrono::milliseconds(sleep_ms);
      bench_options.parallel_scans = !sequential;
      TimingReport report;
      try {
        report = run_benchmark(bench_options);
      } catch (const Error& e) {
        throw StageError{kExecFailure, e.what()};
      }
      write_report(std::cout, report);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        write_report(out, report);
        if (!out) throw StageError{kExecFailure, "cannot write " + report_path};
      }
      if (!data_path.empty()) {
        std::ofstream out(data_path);
        write_plot_data(out, report);
        if (!out) throw StageError{kExecFailure, "cannot write " + data_path};
      }
      return 0;
    }
    if (*serve_cmd) {
      config.catalog_path = path;
      if (!fixtures.empty()) config.fixture_dir = fixtures;
      try {
        Service service(config);
        return serve(service) == 0 ? 0 : kExecFailure;
      } catch (const Error& e) {
        throw StageError{kExecFailure, e.what()};
      }
    }
  } catch (const StageError& e) {
    std::cerr << "polyfed: " << e.message << '\n';
    return e.exit_code;
  } catch (const Error& e) {
    std::cerr << "polyfed: " << e.what() << '\n';
    return kExecFailure;
  }
  return kUsage;
}
