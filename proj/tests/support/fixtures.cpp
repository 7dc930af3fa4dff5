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

#include "fixtures.hpp"

#include <cmath>

namespace optc::testing {

Tensor random_tensor(Rng& rng, Shape shape, float scale) {
  Tensor t;
  t.shape = std::move(shape);
  std::uniform_real_distribution<float> dist(-scale, scale);
  t.data.resize(static_cast<std::size_t>(t.size()));
  for (auto& v : t.data) v = dist(rng);
  return t;
}

std::vector<float> random_vector(Rng& rng, std::size_t n, float lo, float hi) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

namespace {

float fan_in_scale(std::int64_t in) { return 1.0f / std::sqrt(static_cast<float>(in)); }

Graph finish(Graph g) { return validate(std::move(g)); }

}  // namespace

Graph mlp(Rng& rng, const std::vector<std::int64_t>& widths, OpKind act, bool bias) {
  Graph g;
  g.input_shape = {widths.front()};
  for (std::size_t i = 1; i < widths.size(); ++i) {
    const auto in = widths[i - 1];
    const auto out = widths[i];
    std::optional<Tensor> b;
    if (bias) b = random_tensor(rng, {out}, 0.1f);
    g.nodes.push_back(fully_connected("fc" + std::to_string(i - 1),
                                      random_tensor(rng, {out, in}, 1.5f * fan_in_scale(in)),
                                      b));
    if (i + 1 < widths.size()) g.nodes.push_back(activation("act" + std::to_string(i - 1), act));
  }
  return finish(std::move(g));
}

Graph ae_model(Rng& rng) {
  std::vector<std::int64_t> widths{640};
  widths.insert(widths.end(), kAeWidths.begin(), kAeWidths.end());
  return mlp(rng, widths, OpKind::ReLU);
}

Graph conv_chain(Rng& rng) {
  Graph g;
  g.input_shape = {4, 16};
  g.nodes.push_back(pad1d("pad0", 1, 1));
  g.nodes.push_back(conv1d("conv0", random_tensor(rng, {8, 4, 3}, 0.4f),
                           random_tensor(rng, {8}, 0.1f)));
  g.nodes.push_back(activation("relu0", OpKind::ReLU));
  g.nodes.push_back(pool1d("pool0", OpKind::MaxPool1D, 2, 2));
  g.nodes.push_back(conv1d("conv1", random_tensor(rng, {6, 8, 3}, 0.3f),
                           random_tensor(rng, {6}, 0.1f), 1, 1, 1));
  g.nodes.push_back(activation("tanh1", OpKind::Tanh));
  g.nodes.push_back(pool1d("pool1", OpKind::AvgPool1D, 2, 2));
  g.nodes.push_back(flatten("flat"));
  g.nodes.push_back(fully_connected("fc0", random_tensor(rng, {10, 24}, 0.3f),
                                    random_tensor(rng, {10}, 0.1f)));
  g.nodes.push_back(activation("sig0", OpKind::Sigmoid));
  g.nodes.push_back(fully_connected("fc1", random_tensor(rng, {3, 10}, 0.5f),
                                    random_tensor(rng, {3}, 0.1f)));
  return finish(std::move(g));
}

Graph matmul_add_chain(Rng& rng, const std::vector<std::int64_t>& widths) {
  Graph g;
  g.input_shape = {widths.front()};
  const OpKind acts[] = {OpKind::ReLU, OpKind::Tanh, OpKind::Sigmoid};
  for (std::size_t i = 1; i < widths.size(); ++i) {
    const auto in = widths[i - 1];
    const auto out = widths[i];
    const auto id = std::to_string(i - 1);
    g.nodes.push_back(matmul("mm" + id, random_tensor(rng, {out, in}, 1.5f * fan_in_scale(in))));
    g.nodes.push_back(bias_add("add" + id, random_tensor(rng, {out}, 0.1f)));
    if (i + 1 < widths.size()) g.nodes.push_back(activation("act" + id, acts[(i - 1) % 3]));
  }
  return finish(std::move(g));
}

Graph padded_conv_chain(Rng& rng) {
  Graph g;
  g.input_shape = {3, 12};
  g.nodes.push_back(pad1d("pad0", 2, 1));
  g.nodes.push_back(conv1d("conv0", random_tensor(rng, {5, 3, 3}, 0.5f),
                           random_tensor(rng, {5}, 0.1f), 2));
  g.nodes.push_back(activation("relu0", OpKind::ReLU));
  g.nodes.push_back(pad1d("pad1", 0, 0));
  g.nodes.push_back(pad1d("pad2", 1, 0));
  g.nodes.push_back(pad1d("pad3", 0, 1));
  g.nodes.push_back(conv1d("conv1", random_tensor(rng, {4, 5, 2}, 0.5f), std::nullopt));
  g.nodes.push_back(flatten("flat"));
  g.nodes.push_back(fully_connected("fc0", random_tensor(rng, {2, 32}, 0.3f),
                                    random_tensor(rng, {2}, 0.1f)));
  return finish(std::move(g));
}

std::vector<CorpusEntry> corpus(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CorpusEntry> c;
  c.push_back({"mlp_relu", mlp(rng, {12, 16, 10, 4}, OpKind::ReLU)});
  c.push_back({"mlp_tanh", mlp(rng, {9, 20, 7}, OpKind::Tanh)});
  c.push_back({"mlp_sigmoid_nobias", mlp(rng, {6, 11, 5, 3}, OpKind::Sigmoid, false)});
  c.push_back({"conv_chain", conv_chain(rng)});
  c.push_back({"matmul_add", matmul_add_chain(rng, {10, 14, 9, 6})});
  c.push_back({"padded_conv", padded_conv_chain(rng)});
  c.push_back({"single_fc", mlp(rng, {5, 3})});
  return c;
}

Dataset random_regression(Rng& rng, const Graph& g, std::size_t rows) {
  Dataset d;
  d.task = TaskKind::Regression;
  d.input_len = static_cast<std::size_t>(num_elements(g.input_shape));
  d.target_len = static_cast<std::size_t>(num_elements(g.output_shape()));
  d.inputs = random_vector(rng, rows * d.input_len);
  d.targets = random_vector(rng, rows * d.target_len);
  return d;
}

Dataset random_classification(Rng& rng, const Graph& g, std::size_t rows,
                              std::uint32_t classes) {
  Dataset d;
  d.task = TaskKind::Classification;
  d.input_len = static_cast<std::size_t>(num_elements(g.input_shape));
  d.target_len = 1;
  d.inputs = random_vector(rng, rows * d.input_len);
  std::uniform_int_distribution<std::uint32_t> lab(0, classes - 1);
  for (std::size_t r = 0; r < rows; ++r) d.labels.push_back(lab(rng));
  return d;
}

Dataset random_anomaly(Rng& rng, const Graph& g, std::size_t rows) {
  Dataset d;
  d.task = TaskKind::Anomaly;
  d.input_len = static_cast<std::size_t>(num_elements(g.input_shape));
  d.target_len = 1;
  for (std::size_t r = 0; r < rows; ++r) {
    const bool anomaly = r % 2 == 1;
    const float mag = anomaly ? 2.0f : 0.5f;
    auto row = random_vector(rng, d.input_len, -mag, mag);
    d.inputs.insert(d.inputs.end(), row.begin(), row.end());
    d.labels.push_back(anomaly ? 1u : 0u);
  }
  return d;
}

std::vector<LayerSensitivity> sensitivity_from(const Graph& g, const std::vector<double>& p_max) {
  std::vector<LayerSensitivity> out;
  const auto layers = trainable_layers(g);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    LayerSensitivity s;
    s.layer_id = g.nodes[layers[i]].id;
    s.p_max = p_max[i];
    s.s = 1.0 - p_max[i];
    out.push_back(s);
  }
  return out;
}

std::vector<LayerSensitivity> uniform_sensitivity(const Graph& g, double p_max) {
  return sensitivity_from(g, std::vector<double>(trainable_layers(g).size(), p_max));
}

}  // namespace optc::testing
