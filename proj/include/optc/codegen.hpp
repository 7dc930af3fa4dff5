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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "optc/graph.hpp"

namespace optc {

/// Where a node reads from or writes to in the emitted program.
struct BufferRef {
  enum class Kind { GraphInput, GraphOutput, Arena };
  Kind kind = Kind::GraphInput;
  std::int64_t offset = 0;  // bytes into the arena
  bool operator==(const BufferRef&) const = default;
};

struct PlannedTensor {
  std::size_t node = 0;  // producing node
  std::string name;
  std::int64_t byte_size = 0;
  std::size_t first_def = 0;  // step that writes the tensor
  std::size_t last_use = 0;   // last step that reads it
  std::int64_t offset = 0;
};

/// Static placement of intermediate activations in one arena. The graph input
/// and output are caller-owned and never placed. Flatten is a view and
/// aliases its input.
struct MemoryPlan {
  std::vector<PlannedTensor> tensors;
  std::int64_t arena_total_bytes = 0;
  std::vector<BufferRef> node_input;
  std::vector<BufferRef> node_output;
  std::vector<bool> emits_code;  // false for views
};

/// Lifetimes follow chain order. On a chain every tensor overlaps only its
/// producer's input and its consumer's output, so tensors alternate between
/// the bottom and the top of an arena sized to the largest live pair
/// (double buffering), which is the minimum possible.
MemoryPlan plan_memory(const Graph& g);

struct CodegenOptions {
  /// Rational approximations instead of libm tanhf/expf for Tanh and Sigmoid.
  bool approximate_activations = false;
};

struct EmittedProgram {
  std::map<std::string, std::string> sources;  // nn.h, nn.c, weights.h, weights.c
  std::int64_t input_len = 0;
  std::int64_t output_len = 0;
  std::int64_t weight_bytes = 0;
  std::int64_t arena_bytes = 0;
  std::vector<OpKind> emitted_ops;
  std::int64_t rom_estimate_bytes = 0;
  std::int64_t ram_estimate_bytes = 0;
};

/// Emits one loop nest per non-view node. Weights become const arrays; fused
/// activations run in the accumulation epilogue. Output is deterministic.
EmittedProgram emit(const Graph& g, const MemoryPlan& plan, const CodegenOptions& opts = {});

/// Writes the program's sources into `dir`.
void write_sources(const EmittedProgram& p, const std::filesystem::path& dir);

/// Code-size and stack allowances added on top of model-attributable bytes.
/// Defaults are zero, i.e. ROM is pure weight bytes.
struct FootprintModel {
  std::int64_t base_code_bytes = 0;
  std::map<OpKind, std::int64_t> code_bytes_per_op;
  std::int64_t stack_bytes = 0;
};

struct Footprint {
  std::int64_t rom_bytes = 0;
  std::int64_t ram_bytes = 0;
};

/// rom = weights + code allowances; ram = arena + input/output buffers + stack.
Footprint estimate_footprint(const EmittedProgram& p, const FootprintModel& model = {});

/// Single-precision tanh used by the approximate activation mode; mirrors the
/// emitted C. Max abs error below 1e-6 on the whole real line.
float tanh_approx(float x);

}  // namespace optc
