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

#include "polyfed/bench.h"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <random>
#include <thread>

#include "polyfed/ingest.h"
#include "polyfed/planner.h"
#include "polyfed/query.h"
#include "polyfed/scenario.h"
#include "polyfed/stores.h"

namespace polyfed {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string filler(std::mt19937_64& rng, std::size_t bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ";
  std::uniform_int_distribution<std::size_t> pick(0, sizeof(kAlphabet) - 2);
  std::string out(bytes, ' ');
  for (auto& c : out) c = kAlphabet[pick(rng)];
  return out;
}

}  // namespace

GeneratedBatches generate_batches(const BatchSpec& spec, std::uint64_t seed) {
  if (spec.batch_count == 0) throw Error(ErrorCode::kInvalidArgument, "batch_count must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> line(100, 5000);
  constexpr std::int64_t kEpsg[] = {23031, 23032, 4326, 28352};
  std::uniform_int_distribution<std::size_t> epsg_pick(0, std::size(kEpsg) - 1);
  std::uniform_int_distribution<int> well_pick(1, 999);

  GeneratedBatches out;
  scenario::register_schemas(out.catalog);

  using C = RelationalStore::ColumnType;
  auto pg = std::make_shared<RelationalStore>(std::string(scenario::kRelational));
  pg->create_table("SeismicHeader", {{"id", C::kInt},
                                     {"inline", C::kInt},
                                     {"crossline", C::kInt},
                                     {"header_info", C::kString},
                                     {"filepath", C::kString},
                                     {"name", C::kString}});
  auto kb = std::make_shared<TripleStore>(std::string(scenario::kTriple));
  kb->declare_class("SeismicCls", {"name", "hasWell", "hasHorizon"});
  auto mongo = std::make_shared<DocumentStore>(std::string(scenario::kDocument));
  mongo->create_collection("Seismic_data", {"identifier", "name", "num_ilines", "num_xlines", "epsg"});

  // Most of a batch is the textual header of the seismic file.
  const std::size_t header_bytes = spec.batch_bytes > 512 ? spec.batch_bytes - 512 : spec.batch_bytes;
  const std::string name = "Netherlands";
  const std::string type(TripleStore::kTypePredicate);

  ProvenanceDoc prov;
  for (std::size_t b = 0; b < spec.batch_count; ++b) {
    const auto n = static_cast<std::int64_t>(b);
    const std::int64_t header_id = b == 0 ? scenario::kHeaderId : 20000 + n;
    const std::int64_t doc_id = b == 0 ? scenario::kDocumentId : 30000 + n;
    const std::string uri = b == 0 ? std::string(scenario::kSeismicUri)
                                   : std::string(scenario::kSeismicUri) + "-" + std::to_string(b);
    const std::int64_t inl = line(rng), xl = line(rng), epsg = kEpsg[epsg_pick(rng)];

    pg->insert("SeismicHeader", {header_id, inl, xl, filler(rng, header_bytes),
                                 std::string("/data/netherlands-" + std::to_string(b) + ".sgy"), name});
    kb->add(uri, type, std::string("SeismicCls"));
    kb->add(uri, "name", name);
    kb->add(uri, "hasWell", std::string("http://oilandgas/Well#W-" + std::to_string(well_pick(rng))));
    kb->add(uri, "hasHorizon", std::string("http://oilandgas/Horizon#H-" + std::to_string(well_pick(rng))));
    mongo->insert("Seismic_data",
                  Document{{"identifier", doc_id}, {"name", name}, {"num_ilines", inl}, {"num_xlines", xl},
                           {"epsg", epsg}});

    ExecutionDoc e;
    e.workflow = std::string(scenario::kWorkflow);
    e.started_at = 1600000000000 + n * 60000;
    e.ended_at = *e.started_at + 30000;
    e.transformations = {
        {"Data quality assessment",
         {{{std::string(scenario::kRelational), "SeismicHeader", "id"}, header_id, ValueDirection::kGenerated}}},
        {"Geospatial index generation",
         {{{std::string(scenario::kDocument), "Seismic_data", "identifier"}, doc_id, ValueDirection::kGenerated}}},
        {"Expert Knowledge Ingestion",
         {{{std::string(scenario::kTriple), "SeismicCls", "URI"}, uri, ValueDirection::kGenerated}}},
    };
    prov.executions.push_back(std::move(e));
  }
  out.executions = apply_provenance(out.catalog, prov);
  out.adapters = {{pg->name(), pg}, {kb->name(), kb}, {mongo->name(), mongo}};
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2;
}

TimingReport run_benchmark(const BenchmarkOptions& options) {
  if (options.batch_counts.empty()) throw Error(ErrorCode::kInvalidArgument, "no batch counts");
  if (options.runs == 0) throw Error(ErrorCode::kInvalidArgument, "runs must be at least 1");
  const std::string text = options.query.empty() ? std::string(scenario::kQuery) : options.query;
  const ExecuteOptions exec_options{options.parallel_scans};

  TimingReport report;
  for (std::size_t count : options.batch_counts) {
    // Each point starts from schemas only: provenance and store contents are
    // regenerated from scratch.
    const GeneratedBatches data = generate_batches({count}, options.seed);
    TimingPoint point;
    point.batch_count = count;

    auto run_once = [&](TimingSample* sample) {
      const auto t0 = Clock::now();
      const GlobalQuery q = parse_query(text);
      validate_query(q, data.catalog);
      const FederatedPlan plan = plan_query(q, data.catalog);
      const std::string sql = render_sql(plan);
      const double build = ms_since(t0);
      const auto t1 = Clock::now();
      const ResultTable result = execute(plan, data.adapters, exec_options);
      const double exec = ms_since(t1);
      if (sample) *sample = {build, exec};
      point.result_rows = result.rows.size();
      point.constant_table_rows = plan.constant_table.rows.size();
      return sql.size();
    };

    for (std::size_t i = 0; i < options.warmup; ++i) run_once(nullptr);
    for (std::size_t i = 0; i < options.runs; ++i) {
      if (i && options.sleep.count() > 0) std::this_thread::sleep_for(options.sleep);
      TimingSample s;
      run_once(&s);
      point.samples.push_back(s);
    }

    std::vector<double> build, exec, total;
    for (const auto& s : point.samples) {
      build.push_back(s.build_ms);
      exec.push_back(s.exec_ms);
      total.push_back(s.total_ms());
    }
    point.median_build_ms = median(build);
    point.median_exec_ms = median(exec);
    point.median_total_ms = median(total);
    point.build_share = point.median_total_ms > 0 ? point.median_build_ms / point.median_total_ms : 0;
    report.points.push_back(std::move(point));
  }
  return report;
}

void write_report(std::ostream& out, const TimingReport& report) {
  out << "batch_count,median_build_ms,median_exec_ms,median_total_ms,build_share\n";
  out << std::fixed;
  for (const auto& p : report.points) {
    out << p.batch_count << ',' << std::setprecision(4) << p.median_build_ms << ',' << p.median_exec_ms << ','
        << p.median_total_ms << ',' << std::setprecision(3) << p.build_share << '\n';
  }
  out << std::defaultfloat;
}

void write_plot_data(std::ostream& out, const TimingReport& report) {
  out << "# batch_count build_ms exec_ms total_ms build_share result_rows\n";
  out << std::fixed;
  for (const auto& p : report.points) {
    out << p.batch_count << ' ' << std::setprecision(4) << p.median_build_ms << ' ' << p.median_exec_ms << ' '
        << p.median_total_ms << ' ' << std::setprecision(3) << p.build_share << ' ' << p.result_rows << '\n';
  }
  out << std::defaultfloat;
}

}  // namespace polyfed
