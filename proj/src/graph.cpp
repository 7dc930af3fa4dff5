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

#include "optc/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "optc/error.hpp"

namespace optc {
namespace {

struct OpName {
  OpKind op;
  std::string_view name;
};

constexpr std::array<OpName, 13> kOpNames{{
    {OpKind::FullyConnected, "FullyConnected"},
    {OpKind::MatMul, "MatMul"},
    {OpKind::Add, "Add"},
    {OpKind::Conv1D, "Conv1D"},
    {OpKind::ReLU, "ReLU"},
    {OpKind::Tanh, "Tanh"},
    {OpKind::Sigmoid, "Sigmoid"},
    {OpKind::MaxPool1D, "MaxPool1D"},
    {OpKind::AvgPool1D, "AvgPool1D"},
    {OpKind::Flatten, "Flatten"},
    {OpKind::Pad, "Pad"},
    {OpKind::Softmax, "Softmax"},
    {OpKind::Scatter, "Scatter"},
}};

void check_tensor(const Node& n, const Tensor& t, const char* what) {
  if (t.shape.empty()) {
    throw ValidationError(n.id, std::string(what) + " has an empty shape");
  }
  for (auto d : t.shape) {
    if (d < 1) {
      throw ValidationError(n.id, std::string(what) + " has non-positive dim in " +
                                      to_string(t.shape));
    }
  }
  if (static_cast<std::int64_t>(t.data.size()) != t.size()) {
    throw ValidationError(n.id, std::string(what) + " holds " +
                                    std::to_string(t.data.size()) +
                                    " values but shape " + to_string(t.shape) +
                                    " needs " + std::to_string(t.size()));
  }
}

void check_bias(const Node& n, std::int64_t units) {
  if (!n.bias) return;
  check_tensor(n, *n.bias, "bias");
  if (n.bias->shape.size() != 1 || n.bias->shape[0] != units) {
    throw ValidationError(n.id, "bias shape " + to_string(n.bias->shape) +
                                    " does not match " + std::to_string(units) +
                                    " outputs");
  }
}

void check_declared(const Node& n) {
  if (n.attrs.in_channels && *n.attrs.in_channels != n.input_units()) {
    throw ValidationError(
        n.id, "shape mismatch: declared in_channels " +
                  std::to_string(*n.attrs.in_channels) + " but weight shape " +
                  to_string(n.weights->shape) + " has " +
                  std::to_string(n.input_units()));
  }
  if (n.attrs.out_channels && *n.attrs.out_channels != n.output_units()) {
    throw ValidationError(
        n.id, "shape mismatch: declared out_channels " +
                  std::to_string(*n.attrs.out_channels) + " but weight shape " +
                  to_string(n.weights->shape) + " has " +
                  std::to_string(n.output_units()));
  }
}

Shape infer_node(const Node& n, const Shape& in) {
  auto require_rank = [&](std::size_t rank) {
    if (in.size() != rank) {
      throw ValidationError(n.id, std::string(to_string(n.op)) + " expects rank " +
                                      std::to_string(rank) + " input, got " +
                                      to_string(in));
    }
  };
  switch (n.op) {
    case OpKind::FullyConnected:
    case OpKind::MatMul: {
      if (!n.weights) throw ValidationError(n.id, "missing weights");
      check_tensor(n, *n.weights, "weights");
      if (n.weights->shape.size() != 2) {
        throw ValidationError(n.id, "weights must be [out, in], got " +
                                        to_string(n.weights->shape));
      }
      if (n.op == OpKind::MatMul && n.bias) {
        throw ValidationError(n.id, "MatMul carries no bias; use Add");
      }
      check_bias(n, n.output_units());
      check_declared(n);
      require_rank(1);
      if (in[0] != n.input_units()) {
        throw ValidationError(n.id, "shape mismatch: input " + to_string(in) +
                                        " vs weights " +
                                        to_string(n.weights->shape));
      }
      return {n.output_units()};
    }
    case OpKind::Conv1D: {
      if (!n.weights) throw ValidationError(n.id, "missing weights");
      check_tensor(n, *n.weights, "weights");
      if (n.weights->shape.size() != 3) {
        throw ValidationError(n.id, "weights must be [out_ch, in_ch, k], got " +
                                        to_string(n.weights->shape));
      }
      check_bias(n, n.output_units());
      check_declared(n);
      if (n.attrs.stride < 1 || n.attrs.pad_begin < 0 || n.attrs.pad_end < 0) {
        throw ValidationError(n.id, "invalid stride or padding");
      }
      require_rank(2);
      if (in[0] != n.input_units()) {
        throw ValidationError(n.id, "shape mismatch: input " + to_string(in) +
                                        " has " + std::to_string(in[0]) +
                                        " channels, weights expect " +
                                        std::to_string(n.input_units()));
      }
      auto len = conv_output_length(in[1], n.kernel_size(), n.attrs.stride,
                                    n.attrs.pad_begin, n.attrs.pad_end);
      if (len < 1) {
        throw ValidationError(n.id, "non-positive output length for input " +
                                        to_string(in));
      }
      return {n.output_units(), len};
    }
    case OpKind::Add: {
      if (!n.bias) throw ValidationError(n.id, "Add requires a bias tensor");
      check_tensor(n, *n.bias, "bias");
      if (in.empty() || n.bias->shape.size() != 1 || n.bias->shape[0] != in[0]) {
        throw ValidationError(n.id, "bias shape " + to_string(n.bias->shape) +
                                        " does not broadcast over input " +
                                        to_string(in));
      }
      return in;
    }
    case OpKind::ReLU:
    case OpKind::Tanh:
    case OpKind::Sigmoid:
    case OpKind::Softmax:
      return in;
    case OpKind::MaxPool1D:
    case OpKind::AvgPool1D: {
      require_rank(2);
      if (n.attrs.pool_size < 1 || n.attrs.stride < 1) {
        throw ValidationError(n.id, "pool size and stride must be positive");
      }
      auto len = conv_output_length(in[1], n.attrs.pool_size, n.attrs.stride, 0, 0);
      if (len < 1) {
        throw ValidationError(n.id, "pool window " + std::to_string(n.attrs.pool_size) +
                                        " exceeds input " + to_string(in));
      }
      return {in[0], len};
    }
    case OpKind::Flatten:
      return {num_elements(in)};
    case OpKind::Pad: {
      if (n.attrs.pad_begin < 0 || n.attrs.pad_end < 0) {
        throw ValidationError(n.id, "negative padding");
      }
      Shape out = in;
      out.back() += n.attrs.pad_begin + n.attrs.pad_end;
      return out;
    }
    case OpKind::Scatter: {
      const auto& idx = n.attrs.indices;
      if (in.empty() || static_cast<std::int64_t>(idx.size()) != in[0]) {
        throw ValidationError(n.id, "scatter index count does not match input " +
                                        to_string(in));
      }
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= n.attrs.length ||
            (i > 0 && idx[i] <= idx[i - 1])) {
          throw ValidationError(n.id, "scatter indices must be strictly "
                                      "increasing and below length");
        }
      }
      Shape out = in;
      out[0] = n.attrs.length;
      return out;
    }
  }
  throw ValidationError(n.id, "unsupported op");
}

void name_params(Node& n) {
  if (n.weights && n.weights->name.empty()) n.weights->name = n.id + ".weight";
  if (n.bias && n.bias->name.empty()) n.bias->name = n.id + ".bias";
}

}  // namespace

std::int64_t num_elements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::int64_t{1},
                         std::multiplies<>());
}

std::string to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ']';
  return os.str();
}

std::string_view to_string(OpKind op) {
  for (const auto& e : kOpNames) {
    if (e.op == op) return e.name;
  }
  return "Unknown";
}

std::optional<OpKind> parse_op_kind(std::string_view name) {
  for (const auto& e : kOpNames) {
    if (e.name == name) return e.op;
  }
  return std::nullopt;
}

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::None: return "none";
    case Activation::ReLU: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "none";
}

std::optional<Activation> parse_activation(std::string_view name) {
  for (auto a : {Activation::None, Activation::ReLU, Activation::Tanh,
                 Activation::Sigmoid}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

float activation_at_zero(Activation act) {
  return act == Activation::Sigmoid ? 0.5f : 0.0f;
}

bool is_trainable(OpKind op) {
  return op == OpKind::FullyConnected || op == OpKind::MatMul ||
         op == OpKind::Conv1D;
}

bool is_elementwise_activation(OpKind op) {
  return op == OpKind::ReLU || op == OpKind::Tanh || op == OpKind::Sigmoid;
}

std::int64_t Node::output_units() const {
  return weights && !weights->shape.empty() ? weights->shape[0] : 0;
}

std::int64_t Node::input_units() const {
  return weights && weights->shape.size() >= 2 ? weights->shape[1] : 0;
}

std::int64_t Node::kernel_size() const {
  return weights && weights->shape.size() == 3 ? weights->shape[2] : 1;
}

const Shape& Graph::output_shape() const {
  if (!edge_shapes.empty()) return edge_shapes.back();
  return input_shape;
}

bool structurally_equal(const Graph& a, const Graph& b) {
  return a.input_shape == b.input_shape && a.nodes == b.nodes;
}

std::int64_t conv_output_length(std::int64_t length, std::int64_t kernel,
                                std::int64_t stride, std::int64_t pad_begin,
                                std::int64_t pad_end) {
  const auto span = length + pad_begin + pad_end - kernel;
  if (span < 0) return 0;
  return span / stride + 1;
}

Graph infer_shapes(Graph g) {
  if (g.input_shape.empty()) throw ValidationError("graph input_shape is empty");
  for (auto d : g.input_shape) {
    if (d < 1) {
      throw ValidationError("graph input_shape " + to_string(g.input_shape) +
                            " has a non-positive dim");
    }
  }
  g.edge_shapes.clear();
  g.edge_shapes.reserve(g.nodes.size() + 1);
  g.edge_shapes.push_back(g.input_shape);
  for (const auto& n : g.nodes) {
    g.edge_shapes.push_back(infer_node(n, g.edge_shapes.back()));
  }
  return g;
}

Graph validate(Graph g) {
  std::set<std::string> ids;
  for (const auto& n : g.nodes) {
    if (n.id.empty()) throw ValidationError("node with empty id");
    if (!ids.insert(n.id).second) throw ValidationError(n.id, "duplicate node id");
  }
  g = infer_shapes(std::move(g));
  if (trainable_layers(g).empty()) {
    throw ValidationError("graph has no trainable layer");
  }
  return g;
}

std::vector<std::size_t> trainable_layers(const Graph& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (is_trainable(g.nodes[i].op)) out.push_back(i);
  }
  return out;
}

std::vector<std::int64_t> layer_widths(const Graph& g) {
  std::vector<std::int64_t> out;
  for (auto i : trainable_layers(g)) out.push_back(g.nodes[i].output_units());
  return out;
}

Node fully_connected(std::string id, Tensor weights, std::optional<Tensor> bias) {
  Node n;
  n.id = std::move(id);
  n.op = OpKind::FullyConnected;
  n.weights = std::move(weights);
  n.bias = std::move(bias);
  name_params(n);
  return n;
}

Node matmul(std::string id, Tensor weights) {
  Node n;
  n.id = std::move(id);
  n.op = OpKind::MatMul;
  n.weights = std::move(weights);
  name_params(n);
  return n;
}

Node bias_add(std::string id, Tensor bias) {
  Node n;
  n.id = std::move(id);
  n.op = OpKind::Add;
  n.bias = std::move(bias);
  name_params(n);
  return n;
}

Node conv1d(std::string id, Tensor weights, std::optional<Tensor> bias,
            std::int64_t stride, std::int64_t pad_begin, std::int64_t pad_end) {
  Node n;
  n.id = std::move(id);
  n.op = OpKind::Conv1D;
  n.weights = std::move(weights);
  n.bias = std::move(bias);
  n.attrs.stride = stride;
  n.attrs.pad_begin = pad_begin;
  n.attrs.pad_end = pad_end;
  name_params(n);
  return n;
}

Node activation(std::string id, OpKind op) {
  Node n;
  n.id = std::move(id);
  n.op = op;
  return n;
}

Node pool1d(std::string id, OpKind op, std::int64_t pool_size,
            std::int64_t stride) {
  Node n;
  n.id = std::move(id);
  n.op = op;
  n.attrs.pool_size = pool_size;
  n.attrs.stride = stride;
  return n;
}

Node flatten(std::string id) { return activation(std::move(id), OpKind::Flatten); }

Node pad1d(std::string id, std::int64_t pad_begin, std::int64_t pad_end) {
  Node n;
  n.id = std::move(id);
  n.op = OpKind::Pad;
  n.attrs.pad_begin = pad_begin;
  n.attrs.pad_end = pad_end;
  return n;
}

Node softmax(std::string id) { return activation(std::move(id), OpKind::Softmax); }

}  // namespace optc
