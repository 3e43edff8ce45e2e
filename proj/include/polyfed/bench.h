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

// Synthetic batch generation and the query timing harness. Every timed run
// is split into a build part (parse, validate, plan, render SQL) and an
// execution part (federated execution over the in-process stores).

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyfed/catalog.h"
#include "polyfed/federation.h"

namespace polyfed {

struct BatchSpec {
  std::size_t batch_count = 1;
  // Approximate payload of one batch across its three store records.
  std::size_t batch_bytes = 16 * 1024;
};

struct GeneratedBatches {
  CatalogGraph catalog;  // scenario schemas plus one execution per batch
  AdapterMap adapters;   // in-memory stores, one record per store per batch
  std::vector<std::string> executions;
};

// Batch 0 carries the Netherlands reference values; later batches are
// further surveys of the same block with fresh identifiers and random
// attribute values. Throws kInvalidArgument when batch_count is 0.
GeneratedBatches generate_batches(const BatchSpec& spec, std::uint64_t seed);

struct TimingSample {
  double build_ms = 0;
  double exec_ms = 0;
  double total_ms() const { return build_ms + exec_ms; }
};

struct TimingPoint {
  std::size_t batch_count = 0;
  std::vector<TimingSample> samples;
  double median_build_ms = 0;
  double median_exec_ms = 0;
  double median_total_ms = 0;
  double build_share = 0;  // median_build_ms / median_total_ms
  std::size_t result_rows = 0;
  std::size_t constant_table_rows = 0;
};

struct TimingReport {
  std::vector<TimingPoint> points;
};

struct BenchmarkOptions {
  std::vector<std::size_t> batch_counts{1, 10, 50, 100};
  std::size_t runs = 50;
  std::size_t warmup = 3;  // untimed runs before each point
  std::uint64_t seed = 42;
  std::chrono::milliseconds sleep{0};  // pause between timed runs
  std::string query;                   // empty: the scenario query
  bool parallel_scans = true;
};

double median(std::vector<double> values);

// Throws kInvalidArgument for an empty batch list or zero runs.
TimingReport run_benchmark(const BenchmarkOptions& options);

// "batch_count,median_build_ms,median_exec_ms,median_total_ms,build_share"
// header followed by one record per point.
void write_report(std::ostream& out, const TimingReport& report);
// Whitespace-separated columns for plotting, '#' comment header.
void write_plot_data(std::ostream& out, const TimingReport& report);

}  // namespace polyfed
