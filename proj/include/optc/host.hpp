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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "optc/harness.hpp"

namespace optc {

/// Host C compiler invocation, e.g. "cc -O3". Extra flags are appended to
/// every compile (tests use them for strict warning checks).
struct HostCompiler {
  std::string command = "cc -O3";
  std::string extra_flags;
};

bool host_compiler_available(const HostCompiler& cc);

struct BuildResult {
  bool ok = false;
  std::string log;
  std::filesystem::path executable;
};

/// Compiles dir/nn.c and dir/weights.c into dir/nn.o and dir/weights.o.
BuildResult compile_model_objects(const HostCompiler& cc, const std::filesystem::path& dir);

/// Writes dir/<kind>.c from the harness template and links it with the model
/// objects into dir/<kind>.
BuildResult build_harness(const HostCompiler& cc, const std::filesystem::path& dir,
                          HarnessKind kind, const HarnessParams& params);

/// Runs a bench binary and parses its one-value-per-line output.
std::vector<double> run_bench(const std::filesystem::path& exe);

/// Streams `inputs` (rows back to back) through a conform binary.
std::vector<float> run_conform(const std::filesystem::path& exe, std::span<const float> inputs,
                               std::size_t output_len);

std::string shell_quote(const std::string& s);

}  // namespace optc
