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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optc {

using Shape = std::vector<std::int64_t>;

std::int64_t num_elements(const Shape& shape);
std::string to_string(const Shape& shape);

/// Dense float32 tensor, row-major. Only weights and biases carry data.
struct Tensor {
  std::string name;
  Shape shape;
  std::vector<float> data;

  std::int64_t size() const { return num_elements(shape); }
  bool operator==(const Tensor&) const = default;
};

enum class OpKind {
  FullyConnected,
  MatMul,  // weight-only product, as emitted by some exporters
  Add,     // bias add, broadcast over the channel axis
  Conv1D,
  ReLU,
  Tanh,
  Sigmoid,
  MaxPool1D,
  AvgPool1D,
  Flatten,
  Pad,
  Softmax,
  Scatter,  // places m channels into a wider tensor; inserted by pruning
};

enum class Activation { None, ReLU, Tanh, Sigmoid };

std::string_view to_string(OpKind op);
std::optional<OpKind> parse_op_kind(std::string_view name);
std::string_view to_string(Activation act);
std::optional<Activation> parse_activation(std::string_view name);

/// Value of the activation at zero; used as the fill of removed outputs.
float activation_at_zero(Activation act);

bool is_trainable(OpKind op);
bool is_elementwise_activation(OpKind op);

struct Attributes {
  std::int64_t stride = 1;
  std::int64_t pad_begin = 0;
  std::int64_t pad_end = 0;
  std::int64_t pool_size = 0;
  // Declared dims are optional and only cross-checked against weights.
  std::optional<std::int64_t> in_channels;
  std::optional<std::int64_t> out_channels;
  Activation activation = Activation::None;  // fused epilogue
  // Scatter: destination channel of each input channel, and output width.
  std::vector<std::int64_t> indices;
  std::int64_t length = 0;
  float fill = 0.0f;

  bool operator==(const Attributes&) const = default;
};

struct Node {
  std::string id;
  OpKind op = OpKind::ReLU;
  Attributes attrs;
  std::optional<Tensor> weights;
  std::optional<Tensor> bias;

  bool operator==(const Node&) const = default;

  /// Output neurons / filters (M_i) of a trainable node.
  std::int64_t output_units() const;
  /// Input features / channels of a trainable node.
  std::int64_t input_units() const;
  std::int64_t kernel_size() const;
};

/// A single-path chain of operators.
struct Graph {
  Shape input_shape;
  std::vector<Node> nodes;
  // edge_shapes[0] is the graph input, edge_shapes[i + 1] the output of
  // nodes[i]. Filled by infer_shapes().
  std::vector<Shape> edge_shapes;

  const Shape& output_shape() const;
  bool has_shapes() const { return edge_shapes.size() == nodes.size() + 1; }
};

/// Structural equality: nodes, attributes, weights bit-exact.
bool structurally_equal(const Graph& a, const Graph& b);

/// Annotates every edge with its concrete shape. Throws ValidationError
/// naming the offending node.
Graph infer_shapes(Graph g);

/// Shape inference plus the model-level invariants (unique ids, weight
/// layouts, at least one trainable layer).
Graph validate(Graph g);

/// Indices into g.nodes of the trainable layers, in chain order.
std::vector<std::size_t> trainable_layers(const Graph& g);

/// M_i for every trainable layer.
std::vector<std::int64_t> layer_widths(const Graph& g);

std::int64_t conv_output_length(std::int64_t length, std::int64_t kernel,
                                std::int64_t stride, std::int64_t pad_begin,
                                std::int64_t pad_end);

// Builders used by tests, fixtures and converters.
Node fully_connected(std::string id, Tensor weights,
                     std::optional<Tensor> bias = std::nullopt);
Node matmul(std::string id, Tensor weights);
Node bias_add(std::string id, Tensor bias);
Node conv1d(std::string id, Tensor weights, std::optional<Tensor> bias,
            std::int64_t stride = 1, std::int64_t pad_begin = 0,
            std::int64_t pad_end = 0);
Node activation(std::string id, OpKind op);
Node pool1d(std::string id, OpKind op, std::int64_t pool_size,
            std::int64_t stride);
Node flatten(std::string id);
Node pad1d(std::string id, std::int64_t pad_begin, std::int64_t pad_end);
Node softmax(std::string id);

}  // namespace optc
