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

#include "optc/cost.hpp"

#include <algorithm>

#include "optc/error.hpp"

namespace optc {

std::int64_t node_params(const Node& n) {
  std::int64_t p = 0;
  if (n.weights) p += n.weights->size();
  if (n.bias) p += n.bias->size();
  return p;
}

std::int64_t node_flops(const Node& n, const Shape& in, const Shape& out) {
  switch (n.op) {
    case OpKind::FullyConnected:
    case OpKind::MatMul:
      return 2 * n.output_units() * n.input_units();
    case OpKind::Conv1D:
      return 2 * n.output_units() * n.input_units() * n.kernel_size() * out.at(1);
    case OpKind::Add:
    case OpKind::ReLU:
    case OpKind::Tanh:
    case OpKind::Sigmoid:
    case OpKind::MaxPool1D:
    case OpKind::AvgPool1D:
    case OpKind::Softmax:
      return num_elements(out);
    case OpKind::Flatten:
    case OpKind::Pad:
    case OpKind::Scatter:
      return 0;
  }
  (void)in;
  return 0;
}

CostReport count_cost(const Graph& g) {
  if (!g.has_shapes()) throw ValidationError("count_cost requires inferred shapes");
  CostReport r;
  std::int64_t peak_pair = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    const auto& in = g.edge_shapes[i];
    const auto& out = g.edge_shapes[i + 1];
    r.param_count += node_params(n);
    r.flops += node_flops(n, in, out);
    // A fused activation costs one op per output element, like the
    // standalone node it replaced.
    if (n.attrs.activation != Activation::None) r.flops += num_elements(out);
    peak_pair = std::max(peak_pair, num_elements(in) + num_elements(out));
  }
  for (const auto& s : g.edge_shapes) r.intermediate_bytes_naive += 4 * num_elements(s);
  r.param_bytes = 4 * r.param_count;
  r.rom_estimate_bytes = r.param_bytes;
  // Chain execution keeps at most one producer/consumer pair live.
  r.ram_estimate_bytes = 4 * std::max(peak_pair, num_elements(g.input_shape));
  return r;
}

boost::multiprecision::cpp_int design_space_size(const Graph& g, DesignSpaceMode mode) {
  const auto widths = layer_widths(g);
  if (widths.empty()) throw ValidationError("design space needs a trainable layer");
  if (mode == DesignSpaceMode::Global) {
    return *std::max_element(widths.begin(), widths.end());
  }
  boost::multiprecision::cpp_int size = 1;
  for (auto m : widths) size *= m;
  return size;
}

}  // namespace optc
