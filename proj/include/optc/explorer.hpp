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

#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "optc/codegen.hpp"
#include "optc/dataset.hpp"
#include "optc/graph.hpp"
#include "optc/host.hpp"
#include "optc/metrics.hpp"
#include "optc/pruner.hpp"

namespace optc {

struct MemoryTarget {
  std::string name;
  std::optional<std::int64_t> rom_limit;  // nullopt: unlimited
  std::optional<std::int64_t> ram_limit;
};

struct ExplorationConfig {
  int steps = 10;  // J
  std::vector<double> probes{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::optional<double> threshold;  // nullopt: the unpruned model's quality
  MetricKind metric = MetricKind::Auc;
  // Precomputed sensitivities skip the analysis stage.
  std::optional<std::vector<LayerSensitivity>> sensitivities;

  // Host compile, conformance check and timing of every variant.
  bool measure = true;
  HostCompiler compiler;
  int timing_reps = 5;        // R, median taken
  double min_rep_ms = 50.0;   // inner loop autoscaled to at least this long
  int verify_inputs = 10;
  double verify_rel_tol = 1e-5;
  double verify_abs_tol = 1e-6;
  int jobs = 1;
  std::filesystem::path work_dir;  // empty: a fresh directory under TMPDIR

  std::uint64_t seed = 0;
  CodegenOptions codegen;
  FootprintModel footprint;
  // Optional per-variant hook, run as `<command> <model-dir>`; the model is
  // reloaded from that directory afterwards. Empty disables it.
  std::string retrain_command;
};

struct ConfigRecord {
  int j = 0;
  QualityMetric quality;
  double error = 0.0;  // lower is better; 1 - AUC for AUC
  double exec_time_us = std::numeric_limits<double>::quiet_NaN();
  std::int64_t rom_bytes = 0;
  std::int64_t ram_bytes = 0;
  std::int64_t flops = 0;
  std::int64_t params = 0;
  bool pareto = false;
  bool valid = true;  // false when the emitted program diverged or failed
  std::string diagnostic;
  std::vector<std::int64_t> remaining;  // m_i
  std::int64_t arena_bytes = 0;
};

struct ExplorationResult {
  QualityMetric baseline;
  double threshold = 0.0;
  std::vector<LayerSensitivity> sensitivities;
  PruneSchedule schedule;
  std::vector<ConfigRecord> records;  // j = 0 .. J
  std::filesystem::path work_dir;
};

/// Sensitivity analysis, schedule, then for j = 0..J: prune, optimize, plan,
/// emit, estimate footprint, evaluate quality, and (when measuring) compile,
/// check against the interpreter and time on the host. Records come back in
/// j order with Pareto flags set.
ExplorationResult explore(const Graph& g, const Dataset& d, const ExplorationConfig& cfg);

/// Flags records not dominated in (error, exec_time_us, rom_bytes). A record
/// is dominated iff another is <= in all three and < in at least one. Missing
/// times count as +infinity.
std::vector<ConfigRecord> pareto_front(std::vector<ConfigRecord> records);

struct FeasibilityRow {
  int j = 0;
  std::string target;
  bool fits = false;
};

/// One row per (record, target): fits iff rom <= rom_limit and ram <= ram_limit.
std::vector<FeasibilityRow> feasibility_report(const std::vector<ConfigRecord>& records,
                                               const std::vector<MemoryTarget>& targets);

bool fits(const ConfigRecord& r, const MemoryTarget& t);

/// `rows` seeded input vectors in [-1, 1).
std::vector<float> seeded_inputs(std::size_t rows, std::size_t len, std::uint64_t seed);

struct ConformanceResult {
  bool ok = false;
  double max_abs_diff = 0.0;
  double max_rel_diff = 0.0;
  std::string log;
};

/// Compiles `program` in `dir` with the conform harness and compares its
/// outputs on seeded inputs with the interpreter run on `reference`.
ConformanceResult check_conformance(const Graph& reference, const EmittedProgram& program,
                                    const std::filesystem::path& dir, const HostCompiler& cc,
                                    int inputs, std::uint64_t seed, double rel_tol,
                                    double abs_tol);

}  // namespace optc
