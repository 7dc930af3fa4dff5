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

#include "optc/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "optc/cost.hpp"
#include "optc/error.hpp"
#include "optc/graph_opt.hpp"
#include "optc/interpreter.hpp"
#include "optc/model_io.hpp"

namespace optc {
namespace {

double time_or_inf(double t) {
  return std::isnan(t) ? std::numeric_limits<double>::infinity() : t;
}

bool dominates(const ConfigRecord& a, const ConfigRecord& b) {
  const double at = time_or_inf(a.exec_time_us);
  const double bt = time_or_inf(b.exec_time_us);
  const bool no_worse = a.error <= b.error && at <= bt && a.rom_bytes <= b.rom_bytes;
  const bool better = a.error < b.error || at < bt || a.rom_bytes < b.rom_bytes;
  return no_worse && better;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::filesystem::path fresh_work_dir(std::uint64_t seed) {
  std::random_device rd;
  auto base = std::filesystem::temp_directory_path() /
              ("optc-explore-" + std::to_string(seed) + "-" + std::to_string(rd()));
  std::filesystem::create_directories(base);
  return base;
}

struct Variant {
  Graph graph;      // pruned, unoptimized
  Graph optimized;
  EmittedProgram program;
};

// Compiles, verifies and times one variant. Fills the record's measurement
// fields; never throws.
void verify_variant(const Variant& v, const std::filesystem::path& dir,
                    const ExplorationConfig& cfg, ConfigRecord& rec) {
  try {
    auto conf = check_conformance(v.graph, v.program, dir, cfg.compiler, cfg.verify_inputs,
                                  cfg.seed, cfg.verify_rel_tol, cfg.verify_abs_tol);
    if (!conf.ok) {
      rec.valid = false;
      rec.diagnostic = conf.log;
    }
  } catch (const std::exception& e) {
    rec.valid = false;
    rec.diagnostic = e.what();
  }
}

void time_variant(const Variant& v, const std::filesystem::path& dir,
                  const ExplorationConfig& cfg, ConfigRecord& rec) {
  HarnessParams params{v.program.input_len, v.program.output_len, 1, 16};
  auto probe = build_harness(cfg.compiler, dir, HarnessKind::Bench, params);
  if (!probe.ok) throw PipelineError("bench build failed:\n" + probe.log);
  const auto calib = run_bench(probe.executable);
  const double per_call = calib.empty() ? 0.0 : std::max(calib.front(), 1e-3);
  params.inner_iters = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(cfg.min_rep_ms * 1000.0 / per_call)));
  params.reps = cfg.timing_reps;
  auto bench = build_harness(cfg.compiler, dir, HarnessKind::Bench, params);
  if (!bench.ok) throw PipelineError("bench build failed:\n" + bench.log);
  const auto samples = run_bench(bench.executable);
  if (samples.size() != static_cast<std::size_t>(cfg.timing_reps)) {
    throw PipelineError("bench printed " + std::to_string(samples.size()) + " lines, expected " +
                        std::to_string(cfg.timing_reps));
  }
  rec.exec_time_us = median(samples);
}

}  // namespace

std::vector<float> seeded_inputs(std::size_t rows, std::size_t len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::vector<float> v(rows * len);
  for (auto& x : v) x = dist(rng);
  return v;
}

ConformanceResult check_conformance(const Graph& reference, const EmittedProgram& program,
                                    const std::filesystem::path& dir, const HostCompiler& cc,
                                    int inputs, std::uint64_t seed, double rel_tol,
                                    double abs_tol) {
  ConformanceResult res;
  write_sources(program, dir);
  auto objs = compile_model_objects(cc, dir);
  if (!objs.ok) {
    res.log = "host compilation failed:\n" + objs.log;
    return res;
  }
  auto conform = build_harness(cc, dir, HarnessKind::Conform,
                               {program.input_len, program.output_len, 1, 1});
  if (!conform.ok) {
    res.log = "conform harness build failed:\n" + conform.log;
    return res;
  }
  const auto rows = static_cast<std::size_t>(inputs);
  const auto in_len = static_cast<std::size_t>(program.input_len);
  const auto out_len = static_cast<std::size_t>(program.output_len);
  const auto x = seeded_inputs(rows, in_len, seed);
  const auto got = run_conform(conform.executable, x, out_len);
  const auto want = forward_batch_serial(reference, x, rows);
  if (got.size() != want.size()) {
    res.log = "conform produced " + std::to_string(got.size()) + " values, expected " +
              std::to_string(want.size());
    return res;
  }
  res.ok = true;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double a = got[i];
    const double b = want[i];
    const double diff = std::fabs(a - b);
    res.max_abs_diff = std::max(res.max_abs_diff, diff);
    if (b != 0.0) res.max_rel_diff = std::max(res.max_rel_diff, diff / std::fabs(b));
    if (!(diff <= std::max(rel_tol * std::fabs(b), abs_tol))) {
      if (res.ok) {
        res.log = "output " + std::to_string(i) + ": emitted " + std::to_string(a) +
                  " vs interpreter " + std::to_string(b);
      }
      res.ok = false;
    }
  }
  return res;
}

ExplorationResult explore(const Graph& g, const Dataset& d, const ExplorationConfig& cfg) {
  if (cfg.steps < 1) throw ValidationError("J must be >= 1");
  if (cfg.measure && cfg.timing_reps < 3) throw ValidationError("timing repetitions must be >= 3");
  check_compatible(g, d);

  ExplorationResult res;
  res.baseline = evaluate(g, d, cfg.metric);
  res.threshold = cfg.threshold.value_or(res.baseline.value);
  if (cfg.sensitivities) {
    res.sensitivities = *cfg.sensitivities;
  } else {
    SensitivityOptions opts;
    opts.probes = cfg.probes;
    opts.threshold = res.threshold;
    opts.direction = direction_of(cfg.metric);
    res.sensitivities = sensitivity_analysis(g, d, cfg.metric, opts);
  }
  res.schedule = make_schedule(g, res.sensitivities, cfg.steps);

  const bool need_dir = cfg.measure || !cfg.retrain_command.empty();
  if (need_dir) {
    res.work_dir = cfg.work_dir.empty() ? fresh_work_dir(cfg.seed) : cfg.work_dir;
    std::filesystem::create_directories(res.work_dir);
  }
  auto variant_dir = [&](int j) { return res.work_dir / ("j" + std::to_string(j)); };

  std::vector<Variant> variants;
  for (int j = 0; j <= cfg.steps; ++j) {
    auto pv = gwp_variant(g, res.schedule, j);
    Variant v;
    v.graph = std::move(pv.graph);
    ConfigRecord rec;
    rec.j = j;
    rec.remaining = pv.remaining;
    if (!cfg.retrain_command.empty() && j > 0) {
      const auto model_dir = variant_dir(j) / "model";
      save_graph(v.graph, model_dir);
      const auto cmd = cfg.retrain_command + " " + shell_quote(model_dir.string());
      if (std::system(cmd.c_str()) != 0) {
        throw PipelineError("retrain hook failed for j=" + std::to_string(j));
      }
      v.graph = load_graph(model_dir / "model.json");
    }
    v.optimized = optimize(v.graph);
    v.program = emit(v.optimized, plan_memory(v.optimized), cfg.codegen);
    const auto fp = estimate_footprint(v.program, cfg.footprint);
    const auto cost = count_cost(v.graph);
    rec.quality = evaluate(v.graph, d, cfg.metric);
    rec.error = rec.quality.error();
    rec.rom_bytes = fp.rom_bytes;
    rec.ram_bytes = fp.ram_bytes;
    rec.flops = cost.flops;
    rec.params = cost.param_count;
    rec.arena_bytes = v.program.arena_bytes;
    res.records.push_back(std::move(rec));
    variants.push_back(std::move(v));
  }

  if (cfg.measure) {
    const auto n = static_cast<int>(variants.size());
    // Compile and verify concurrently; each job owns its directory.
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, cfg.jobs))
    for (int j = 0; j < n; ++j) {
      verify_variant(variants[static_cast<std::size_t>(j)], variant_dir(j), cfg,
                     res.records[static_cast<std::size_t>(j)]);
    }
    // Timing is serialized so runs do not contend.
    for (int j = 0; j < n; ++j) {
      auto& rec = res.records[static_cast<std::size_t>(j)];
      if (!rec.valid && !std::filesystem::exists(variant_dir(j) / "nn.o")) continue;
      try {
        time_variant(variants[static_cast<std::size_t>(j)], variant_dir(j), cfg, rec);
      } catch (const std::exception& e) {
        rec.valid = false;
        rec.diagnostic += std::string(rec.diagnostic.empty() ? "" : "\n") + e.what();
      }
    }
  }

  res.records = pareto_front(std::move(res.records));
  return res;
}

std::vector<ConfigRecord> pareto_front(std::vector<ConfigRecord> records) {
  for (auto& r : records) {
    r.pareto = std::none_of(records.begin(), records.end(),
                            [&](const ConfigRecord& o) { return dominates(o, r); });
  }
  return records;
}

bool fits(const ConfigRecord& r, const MemoryTarget& t) {
  return (!t.rom_limit || r.rom_bytes <= *t.rom_limit) &&
         (!t.ram_limit || r.ram_bytes <= *t.ram_limit);
}

std::vector<FeasibilityRow> feasibility_report(const std::vector<ConfigRecord>& records,
                                               const std::vector<MemoryTarget>& targets) {
  if (targets.empty()) throw ValidationError("feasibility report needs at least one target");
  std::vector<FeasibilityRow> rows;
  for (const auto& r : records) {
    for (const auto& t : targets) rows.push_back({r.j, t.name, fits(r, t)});
  }
  return rows;
}

}  // namespace optc
