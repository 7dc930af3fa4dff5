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

#include <string>
#include <vector>

#include "optc/graph.hpp"

namespace optc {

/// Warnings collected by the rewrite passes; passes never fail.
struct PassDiagnostics {
  std::vector<std::string> warnings;
};

/// (MatMul W, Add b) and (bias-less FullyConnected, Add b) become FC(W, b).
Graph fuse_matmul_add(const Graph& g);

/// A FullyConnected or Conv1D node immediately followed by ReLU, Tanh or
/// Sigmoid absorbs the activation as its epilogue. Softmax is never fused.
Graph fuse_activation(const Graph& g);

/// Pads feeding a Conv1D are folded into its padding; zero-amount pads are
/// removed. Other pads stay and produce a warning.
Graph elide_padding(const Graph& g, PassDiagnostics* diag = nullptr);

/// elide_padding, then fuse_matmul_add, then fuse_activation.
Graph optimize(const Graph& g, PassDiagnostics* diag = nullptr);

}  // namespace optc
