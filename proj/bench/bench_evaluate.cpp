/* Copyright 2026 The optc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <benchmark/benchmark.h>
#include <omp.h>

#include "fixtures.hpp"
#include "optc/metrics.hpp"

namespace {

using namespace optc;

struct Workload {
  Graph graph;
  Dataset data;
};

const Workload& ae_workload() {
  static const Workload w = [] {
    testing::Rng rng(1);
    Workload out{testing::ae_model(rng), {}};
    out.data = testing::random_anomaly(rng, out.graph, 256);
    return out;
  }();
  return w;
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto& w = ae_workload();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_serial(w.graph, w.data, MetricKind::Auc).value);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.data.size()));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto& w = ae_workload();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(w.graph, w.data, MetricKind::Auc).value);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.data.size()));
}

BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
