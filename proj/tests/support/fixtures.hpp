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
#include <random>
#include <string>
#include <vector>

#include "optc/dataset.hpp"
#include "optc/graph.hpp"
#include "optc/pruner.hpp"

namespace optc::testing {

using Rng = std::mt19937_64;

Tensor random_tensor(Rng& rng, Shape shape, float scale = 1.0f);
std::vector<float> random_vector(Rng& rng, std::size_t n, float lo = -1.0f, float hi = 1.0f);

/// FC chain with the given widths; `act` after every layer but the last.
Graph mlp(Rng& rng, const std::vector<std::int64_t>& widths, OpKind act = OpKind::ReLU,
          bool bias = true);

/// 640 -> 128 x4 -> 8 -> 128 x4 -> 640 with ReLU between layers.
Graph ae_model(Rng& rng);
inline const std::vector<std::int64_t> kAeWidths{128, 128, 128, 128, 8,
                                                 128, 128, 128, 128, 640};

/// [4, 16] input: Pad, Conv1D, ReLU, MaxPool, Conv1D (padded), Tanh, AvgPool,
/// Flatten, FC, Sigmoid, FC.
Graph conv_chain(Rng& rng);

/// The same kind of MLP written as MatMul / Add pairs.
Graph matmul_add_chain(Rng& rng, const std::vector<std::int64_t>& widths);

/// [3, 12] input with explicit pads before each convolution.
Graph padded_conv_chain(Rng& rng);

/// Named corpus used by the cross-module checks.
struct CorpusEntry {
  std::string name;
  Graph graph;
};
std::vector<CorpusEntry> corpus(std::uint64_t seed);

Dataset random_regression(Rng& rng, const Graph& g, std::size_t rows);
Dataset random_classification(Rng& rng, const Graph& g, std::size_t rows,
                              std::uint32_t classes);
/// Rows with alternating labels; anomalies get larger-magnitude inputs.
Dataset random_anomaly(Rng& rng, const Graph& g, std::size_t rows);

/// Uniform sensitivities: every layer gets the same p_max.
std::vector<LayerSensitivity> uniform_sensitivity(const Graph& g, double p_max);
std::vector<LayerSensitivity> sensitivity_from(const Graph& g, const std::vector<double>& p_max);

}  // namespace optc::testing
