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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "optc/codegen.hpp"
#include "optc/error.hpp"
#include "optc/explorer.hpp"
#include "optc/graph_opt.hpp"
#include "optc/harness.hpp"
#include "optc/host.hpp"
#include "optc/interpreter.hpp"

namespace optc {
namespace {

namespace fs = std::filesystem;

const HostCompiler kStrict{"cc -O2",
                           "-std=c99 -Wall -Wextra -Wpedantic -Wconversion -Wshadow -Werror"};

TEST(Placeholders, Substitution) {
  EXPECT_EQ(substitute_placeholders("a @X@ b @Y_Z@", {{"X", "1"}, {"Y_Z", "two"}}),
            "a 1 b two");
  EXPECT_EQ(substitute_placeholders("mail@host", {}), "mail@host");
}

TEST(Placeholders, MissingValueIsAnError) {
  try {
    substitute_placeholders("n = @REPS@;", {});
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("REPS"), std::string::npos);
  }
}

TEST(Templates, AllPlaceholdersFilled) {
  for (auto kind : {HarnessKind::Bench, HarnessKind::Conform}) {
    const auto src = instantiate_harness(kind, {7, 3, 5, 11});
    EXPECT_EQ(src.find("@INPUT_LEN@"), std::string::npos);
    EXPECT_EQ(src.find("@OUTPUT_LEN@"), std::string::npos);
    EXPECT_NE(src.find("#define INPUT_LEN 7"), std::string::npos);
    EXPECT_EQ(src.find("malloc"), std::string::npos);
  }
  EXPECT_NE(instantiate_harness(HarnessKind::Bench, {7, 3, 5, 11}).find("#define REPS 5"),
            std::string::npos);
  EXPECT_THROW(instantiate_harness(HarnessKind::Bench, {7, 3, 0, 1}), ValidationError);
}

class Harness : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!host_compiler_available(kStrict)) GTEST_SKIP() << "no host C compiler";
    dir_ = fs::temp_directory_path() / ("optc-h-" + std::to_string(std::random_device{}()));
    testing::Rng rng(21);
    graph_ = optimize(testing::conv_chain(rng));
    program_ = emit(graph_, plan_memory(graph_));
    write_sources(program_, dir_);
    const auto objs = compile_model_objects(kStrict, dir_);
    ASSERT_TRUE(objs.ok) << objs.log;
  }
  void TearDown() override {
    if (!dir_.empty()) fs::remove_all(dir_);
  }
  fs::path dir_;
  Graph graph_;
  EmittedProgram program_;
};

TEST_F(Harness, BenchPrintsExactlyRepsLines) {
  const auto r = build_harness(kStrict, dir_, HarnessKind::Bench,
                               {program_.input_len, program_.output_len, 5, 20});
  ASSERT_TRUE(r.ok) << r.log;
  const auto values = run_bench(r.executable);
  ASSERT_EQ(values.size(), 5u);
  for (double v : values) EXPECT_GT(v, 0.0);
  // Raw stdout: decimal numbers only, one per line.
  std::ifstream in(r.executable.string() + ".out");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    EXPECT_EQ(line.find_first_not_of("0123456789."), std::string::npos) << line;
  }
  EXPECT_EQ(lines, 5);
}

TEST_F(Harness, ConformRoundTripsInterpreterInputs) {
  const auto r = build_harness(kStrict, dir_, HarnessKind::Conform,
                               {program_.input_len, program_.output_len, 1, 1});
  ASSERT_TRUE(r.ok) << r.log;
  const auto x = seeded_inputs(10, static_cast<std::size_t>(program_.input_len), 4);
  const auto got = run_conform(r.executable, x, static_cast<std::size_t>(program_.output_len));
  ASSERT_EQ(got.size(), 10u * static_cast<std::size_t>(program_.output_len));
  const auto want = forward_batch_serial(graph_, x, 10);
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_LE(std::abs(got[i] - want[i]), std::max(1e-5 * std::abs(want[i]), 1e-6)) << i;
  }
}

TEST_F(Harness, ConformRejectsTruncatedInput) {
  const auto r = build_harness(kStrict, dir_, HarnessKind::Conform,
                               {program_.input_len, program_.output_len, 1, 1});
  ASSERT_TRUE(r.ok) << r.log;
  const std::vector<float> partial(static_cast<std::size_t>(program_.input_len) + 3, 0.5f);
  EXPECT_THROW(run_conform(r.executable, partial, static_cast<std::size_t>(program_.output_len)),
               PipelineError);
}

TEST_F(Harness, MismatchedLengthsFailToBuild) {
  const auto r = build_harness(kStrict, dir_, HarnessKind::Conform,
                               {program_.input_len + 1, program_.output_len, 1, 1});
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.log.find("different model"), std::string::npos);
}

TEST(Host, MissingCompilerReported) {
  EXPECT_FALSE(host_compiler_available({"/nonexistent/cc", ""}));
}

TEST(Host, ShellQuote) {
  EXPECT_EQ(shell_quote("a b"), "'a b'");
  EXPECT_EQ(shell_quote("it's"), "'it'\\''s'");
}

}  // namespace
}  // namespace optc
