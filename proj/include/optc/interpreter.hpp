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

#include <span>
#include <vector>

#include "optc/graph.hpp"

namespace optc {

/// Reference float32 forward pass. Accumulation order matches the emitted
/// C loop nests so both agree up to libm differences.
std::vector<float> forward(const Graph& g, std::span<const float> input);

/// Forward over `rows` consecutive inputs, rows distributed across OpenMP
/// threads. Bit-identical to forward_batch_serial for any thread count.
std::vector<float> forward_batch(const Graph& g, std::span<const float> inputs,
                                 std::size_t rows);
std::vector<float> forward_batch_serial(const Graph& g, std::span<const float> inputs,
                                        std::size_t rows);

}  // namespace optc
