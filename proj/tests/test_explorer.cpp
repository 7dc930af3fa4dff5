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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "optc/cost.hpp"
#include "optc/error.hpp"
#include "optc/explorer.hpp"
#include "optc/graph_opt.hpp"
#include "optc/interpreter.hpp"
#include "optc/report.hpp"
#include "oracles.hpp"

namespace optc {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

ConfigRecord rec(int j, double error, double time, std::int64_t rom, std::int64_t ram = 0) {
  ConfigRecord r;
  r.j = j;
  r.error = error;
  r.exec_time_us = time;
  r.rom_bytes = rom;
  r.ram_bytes = ram;
  return r;
}

std::vector<bool> flags_of(const std::vector<ConfigRecord>& records) {
  std::vector<bool> f;
  for (const auto& r : records) f.push_back(r.pareto);
  return f;
}

ExplorationConfig quick_config(int steps) {
  ExplorationConfig cfg;
  cfg.steps = steps;
  cfg.measure = false;
  return cfg;
}

TEST(Pareto, OneDominatesTheOther) {
  const auto out = pareto_front({rec(0, 0.1, 5, 100), rec(1, 0.2, 6, 120)});
  EXPECT_EQ(flags_of(out), (std::vector<bool>{true, false}));
}

TEST(Pareto, IdenticalRecordsAllOnFront) {
  const auto out = pareto_front({rec(0, 0.1, 5, 100), rec(1, 0.1, 5, 100), rec(2, 0.1, 5, 100)});
  EXPECT_EQ(flags_of(out), (std::vector<bool>{true, true, true}));
}

TEST(Pareto, MissingTimeCountsAsInfinite) {
  const auto out = pareto_front({rec(0, 0.1, std::nan(""), 100), rec(1, 0.1, 5, 100)});
  EXPECT_EQ(flags_of(out), (std::vector<bool>{false, true}));
}

TEST(Pareto, RandomRecordsMatchBruteForce) {
  Rng rng(1);
  std::uniform_int_distribution<int> small(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ConfigRecord> records;
    for (int j = 0; j < 11; ++j) {
      records.push_back(rec(j, small(rng) * 0.05, small(rng) * 1.5, 1000 + 10 * small(rng)));
    }
    const auto out = pareto_front(records);
    EXPECT_EQ(flags_of(out), oracle::pareto_flags(records));
    auto shuffled = records;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (const auto& r : pareto_front(shuffled)) {
      EXPECT_EQ(r.pareto, out[static_cast<std::size_t>(r.j)].pareto);
    }
  }
}

TEST(Feasibility, AeBaselineDoesNotFitOneMegabyte) {
  Rng rng(2);
  const auto g = testing::ae_model(rng);
  ConfigRecord r;
  r.rom_bytes = count_cost(g).param_bytes;
  const MemoryTarget tc32x{"tc32x", 1 << 20, std::nullopt};
  EXPECT_FALSE(fits(r, tc32x));
  const MemoryTarget decimal{"tc32x_dec", 1000000, std::nullopt};
  EXPECT_FALSE(fits(r, decimal));
}

TEST(Feasibility, LimitlessTargetFitsEverything) {
  const auto rows =
      feasibility_report({rec(0, 0, 0, 1 << 30, 1 << 30), rec(1, 0, 0, 5, 5)}, {{"any", {}, {}}});
  for (const auto& row : rows) EXPECT_TRUE(row.fits);
}

TEST(Feasibility, RamLimitStraddle) {
  const std::int64_t limit = 96 * 1024;
  std::vector<ConfigRecord> records;
  for (int j = 0; j < 9; ++j) records.push_back(rec(j, 0, 0, 10, limit - 4 + j));
  const auto rows = feasibility_report(records, {{"cpu2", std::nullopt, limit}});
  ASSERT_EQ(rows.size(), records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].fits, records[i].ram_bytes <= limit);
    EXPECT_EQ(rows[i].target, "cpu2");
  }
  EXPECT_THROW(feasibility_report(records, {}), ValidationError);
}

TEST(Explore, AeShapedJ10GivesElevenRecords) {
  Rng rng(3);
  const auto g = testing::ae_model(rng);
  const auto d = testing::random_anomaly(rng, g, 24);
  const auto res = explore(g, d, quick_config(10));
  ASSERT_EQ(res.records.size(), 11u);
  for (std::size_t j = 0; j < res.records.size(); ++j) EXPECT_EQ(res.records[j].j, int(j));
  const auto& base = res.records[0];
  const auto cost = count_cost(g);
  EXPECT_EQ(base.flops, cost.flops);
  EXPECT_EQ(base.params, cost.param_count);
  EXPECT_EQ(base.rom_bytes, cost.param_bytes);
  EXPECT_EQ(base.quality.value, evaluate(g, d, MetricKind::Auc).value);
  EXPECT_EQ(base.quality.value, res.baseline.value);
  EXPECT_DOUBLE_EQ(base.error, 1.0 - base.quality.value);
  EXPECT_EQ(flags_of(res.records), oracle::pareto_flags(res.records));
  for (std::size_t j = 1; j < res.records.size(); ++j) {
    EXPECT_LE(res.records[j].rom_bytes, res.records[j - 1].rom_bytes);
    EXPECT_LE(res.records[j].flops, res.records[j - 1].flops);
  }
}

TEST(Explore, InsensitiveSingleLayerStaysIdentical) {
  Rng rng(4);
  const auto g = testing::mlp(rng, {6, 4});
  const auto d = testing::random_regression(rng, g, 10);
  auto cfg = quick_config(1);
  cfg.metric = MetricKind::Mse;
  cfg.sensitivities = testing::uniform_sensitivity(g, 0.0);
  const auto res = explore(g, d, cfg);
  ASSERT_EQ(res.records.size(), 2u);
  EXPECT_EQ(res.records[0].flops, res.records[1].flops);
  EXPECT_EQ(res.records[0].remaining, res.records[1].remaining);
  EXPECT_TRUE(structurally_equal(gwp_variant(g, res.schedule, 1).graph, g));
}

TEST(Explore, FlopsFollowCostModel) {
  Rng rng(5);
  const auto g = testing::mlp(rng, {8, 12, 10, 3});
  const auto d = testing::random_classification(rng, g, 30, 3);
  auto cfg = quick_config(3);
  cfg.metric = MetricKind::ErrorRate;
  cfg.sensitivities = testing::sensitivity_from(g, {0.6, 0.3, 0.0});
  const auto res = explore(g, d, cfg);
  ASSERT_EQ(res.records.size(), 4u);
  for (int j = 0; j <= 3; ++j) {
    const auto v = gwp_variant(g, res.schedule, j).graph;
    EXPECT_EQ(res.records[static_cast<std::size_t>(j)].flops, count_cost(v).flops);
    EXPECT_EQ(res.records[static_cast<std::size_t>(j)].quality.value,
              evaluate(v, d, MetricKind::ErrorRate).value);
    if (j > 0) {
      EXPECT_LE(res.records[static_cast<std::size_t>(j)].flops,
                res.records[static_cast<std::size_t>(j - 1)].flops);
    }
  }
}

TEST(Explore, SensitivityStageUsesBaselineThreshold) {
  Rng rng(6);
  const auto g = testing::mlp(rng, {6, 9, 6}, OpKind::Tanh);
  const auto d = testing::random_anomaly(rng, g, 40);
  const auto res = explore(g, d, quick_config(4));
  EXPECT_EQ(res.threshold, res.baseline.value);
  ASSERT_EQ(res.sensitivities.size(), 2u);
  for (const auto& s : res.sensitivities) EXPECT_NEAR(s.s, 1.0 - s.p_max, 1e-15);
}

TEST(Explore, Reproducible) {
  Rng rng(7);
  const auto g = testing::conv_chain(rng);
  const auto d = testing::random_classification(rng, g, 25, 3);
  auto cfg = quick_config(5);
  cfg.metric = MetricKind::ErrorRate;
  cfg.seed = 99;
  const auto a = explore(g, d, cfg);
  const auto b = explore(g, d, cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].quality.value, b.records[i].quality.value);
    EXPECT_EQ(a.records[i].flops, b.records[i].flops);
    EXPECT_EQ(a.records[i].rom_bytes, b.records[i].rom_bytes);
    EXPECT_EQ(a.records[i].ram_bytes, b.records[i].ram_bytes);
  }
}

TEST(Explore, RejectsBadConfig) {
  Rng rng(8);
  const auto g = testing::mlp(rng, {4, 3});
  const auto d = testing::random_regression(rng, g, 4);
  auto cfg = quick_config(0);
  cfg.metric = MetricKind::Mse;
  EXPECT_THROW(explore(g, d, cfg), ValidationError);
  cfg.steps = 2;
  cfg.measure = true;
  cfg.timing_reps = 2;
  EXPECT_THROW(explore(g, d, cfg), ValidationError);
}

TEST(ReportIo, CsvRoundTrip) {
  Rng rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ConfigRecord> records;
  for (int j = 0; j < 6; ++j) {
    auto r = rec(j, u(rng), j == 2 ? std::nan("") : 1000 * u(rng), 5000 - 100 * j, 300 + j);
    r.quality.kind = MetricKind::ErrorRate;
    r.quality.value = r.error;
    r.flops = 100000 - 7 * j;
    r.params = 2000 - j;
    records.push_back(r);
  }
  records = pareto_front(records);
  const std::vector<MemoryTarget> targets{{"small", 4800, std::nullopt}, {"wide", {}, {}}};
  const auto parsed = parse_report_csv(report_csv(records, targets), MetricKind::ErrorRate);
  ASSERT_EQ(parsed.records.size(), records.size());
  EXPECT_EQ(parsed.fit_columns, (std::vector<std::string>{"small", "wide"}));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = parsed.records[i];
    EXPECT_EQ(b.j, a.j);
    EXPECT_EQ(b.quality.value, a.quality.value);
    EXPECT_EQ(b.error, a.error);
    EXPECT_EQ(std::isnan(b.exec_time_us), std::isnan(a.exec_time_us));
    if (!std::isnan(a.exec_time_us)) EXPECT_EQ(b.exec_time_us, a.exec_time_us);
    EXPECT_EQ(b.rom_bytes, a.rom_bytes);
    EXPECT_EQ(b.ram_bytes, a.ram_bytes);
    EXPECT_EQ(b.flops, a.flops);
    EXPECT_EQ(b.params, a.params);
    EXPECT_EQ(b.pareto, a.pareto);
    EXPECT_EQ(parsed.fits[i][0], a.rom_bytes <= 4800);
    EXPECT_TRUE(parsed.fits[i][1]);
  }
}

TEST(ReportIo, SensitivityJsonRoundTrip) {
  std::vector<LayerSensitivity> sens{{"fc0", 0.7, 0.3, {{0.1, 0.9}, {0.2, 0.85}, {0.3, 0.8}}},
                                     {"fc1", 1.0, 0.0, {{0.1, 0.2}}}};
  const auto doc = sensitivity_to_json(sens, 0.81, MetricKind::Auc);
  EXPECT_EQ(doc.at("threshold").get<double>(), 0.81);
  const auto back = sensitivity_from_json(nlohmann::json::parse(doc.dump()));
  ASSERT_EQ(back.size(), sens.size());
  for (std::size_t i = 0; i < sens.size(); ++i) {
    EXPECT_EQ(back[i].layer_id, sens[i].layer_id);
    EXPECT_EQ(back[i].s, sens[i].s);
    EXPECT_EQ(back[i].p_max, sens[i].p_max);
    EXPECT_EQ(back[i].probe_curve, sens[i].probe_curve);
  }
}

TEST(ReportIo, TargetSpecs) {
  const auto t = parse_target("tc32x:1MB:96kB");
  EXPECT_EQ(t.name, "tc32x");
  EXPECT_EQ(t.rom_limit, 1048576);
  EXPECT_EQ(t.ram_limit, 98304);
  const auto u = parse_target("host:-:");
  EXPECT_FALSE(u.rom_limit.has_value());
  EXPECT_FALSE(u.ram_limit.has_value());
  EXPECT_EQ(parse_target("x:2048:16").ram_limit, 16);
  EXPECT_THROW(parse_target("bad"), ValidationError);
  EXPECT_THROW(parse_target("y:12zz:1"), ValidationError);
}

class MeasuredExplore : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!host_compiler_available({})) GTEST_SKIP() << "no host C compiler";
    work_ = fs::temp_directory_path() / ("optc-ex-" + std::to_string(std::random_device{}()));
    Rng rng(9);
    graph_ = testing::mlp(rng, {16, 24, 12, 4}, OpKind::Tanh);
    data_ = testing::random_regression(rng, graph_, 20);
    cfg_.steps = 2;
    cfg_.metric = MetricKind::Mse;
    cfg_.sensitivities = testing::uniform_sensitivity(graph_, 0.6);
    cfg_.min_rep_ms = 2.0;
    cfg_.timing_reps = 3;
    cfg_.work_dir = work_;
  }
  void TearDown() override {
    if (!work_.empty()) fs::remove_all(work_);
  }
  fs::path work_;
  Graph graph_;
  Dataset data_;
  ExplorationConfig cfg_;
};

TEST_F(MeasuredExplore, TimesAndVerifiesEveryVariant) {
  cfg_.jobs = 2;
  const auto res = explore(graph_, data_, cfg_);
  ASSERT_EQ(res.records.size(), 3u);
  for (const auto& r : res.records) {
    EXPECT_TRUE(r.valid) << r.diagnostic;
    EXPECT_TRUE(std::isfinite(r.exec_time_us));
    EXPECT_GT(r.exec_time_us, 0.0);
    EXPECT_TRUE(fs::exists(work_ / ("j" + std::to_string(r.j)) / "nn.c"));
  }
  EXPECT_EQ(flags_of(res.records), oracle::pareto_flags(res.records));
}

TEST_F(MeasuredExplore, CompileFailureFlagsRecordAndContinues) {
  cfg_.compiler.command = "cc -O3";
  cfg_.compiler.extra_flags = "-DNN_BREAK_BUILD -include /nonexistent/header.h";
  const auto res = explore(graph_, data_, cfg_);
  ASSERT_EQ(res.records.size(), 3u);
  for (const auto& r : res.records) {
    EXPECT_FALSE(r.valid);
    EXPECT_NE(r.diagnostic.find("compilation failed"), std::string::npos) << r.diagnostic;
    EXPECT_TRUE(std::isnan(r.exec_time_us));
    EXPECT_GT(r.flops, 0);
  }
}

TEST_F(MeasuredExplore, DivergenceFlagsRecordInvalid) {
  cfg_.codegen.approximate_activations = true;
  cfg_.verify_rel_tol = 0.0;
  cfg_.verify_abs_tol = 0.0;
  const auto res = explore(graph_, data_, cfg_);
  ASSERT_EQ(res.records.size(), 3u);
  bool any_invalid = false;
  for (const auto& r : res.records) {
    if (!r.valid) {
      any_invalid = true;
      EXPECT_NE(r.diagnostic.find("interpreter"), std::string::npos) << r.diagnostic;
      EXPECT_TRUE(std::isfinite(r.exec_time_us));
    }
  }
  EXPECT_TRUE(any_invalid);
}

TEST_F(MeasuredExplore, RetrainHookRunsPerVariant) {
  cfg_.measure = false;
  const auto marker = work_ / "hook.log";
  fs::create_directories(work_);
  cfg_.retrain_command = "echo >> " + marker.string();
  const auto res = explore(graph_, data_, cfg_);
  ASSERT_EQ(res.records.size(), 3u);
  std::ifstream in(marker);
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 2);
  const auto direct = evaluate(gwp_variant(graph_, res.schedule, 2).graph, data_, MetricKind::Mse);
  EXPECT_NEAR(res.records[2].quality.value, direct.value, 1e-12);
}

}  // namespace
}  // namespace optc
