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
#include <span>
#include <vector>

#include "optc/graph.hpp"

namespace optc {

enum class TaskKind : std::uint32_t { Regression = 0, Classification = 1, Anomaly = 2 };

/// N rows of flattened inputs plus either float targets (regression) or one
/// u32 label per row (classification class index, anomaly 0/1).
struct Dataset {
  TaskKind task = TaskKind::Regression;
  std::size_t input_len = 0;
  std::size_t target_len = 0;
  std::vector<float> inputs;
  std::vector<float> targets;
  std::vector<std::uint32_t> labels;

  std::size_t size() const { return input_len ? inputs.size() / input_len : 0; }
  std::span<const float> input(std::size_t row) const {
    return std::span<const float>(inputs).subspan(row * input_len, input_len);
  }
  std::span<const float> target(std::size_t row) const {
    return std::span<const float>(targets).subspan(row * target_len, target_len);
  }
};

/// Binary container: "OPTCDS1\0", u32 {N, input_len, target_len, task_kind},
/// N*input_len f32 inputs, then f32 targets (regression) or N u32 labels.
/// All little-endian.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& d, const std::filesystem::path& path);

/// Throws ValidationError when the dataset cannot be fed to the graph.
void check_compatible(const Graph& g, const Dataset& d);

}  // namespace optc
