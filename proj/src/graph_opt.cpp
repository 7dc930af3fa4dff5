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

#include "optc/graph_opt.hpp"

#include "optc/error.hpp"

namespace optc {
namespace {

Graph rebuild(const Graph& g, std::vector<Node> nodes) {
  Graph out;
  out.input_shape = g.input_shape;
  out.nodes = std::move(nodes);
  return infer_shapes(std::move(out));
}

Activation as_activation(OpKind op) {
  switch (op) {
    case OpKind::ReLU: return Activation::ReLU;
    case OpKind::Tanh: return Activation::Tanh;
    case OpKind::Sigmoid: return Activation::Sigmoid;
    default: return Activation::None;
  }
}

}  // namespace

Graph fuse_matmul_add(const Graph& g) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    const bool multiply = n.op == OpKind::MatMul ||
                          (n.op == OpKind::FullyConnected && !n.bias &&
                           n.attrs.activation == Activation::None);
    if (multiply && i + 1 < g.nodes.size() && g.nodes[i + 1].op == OpKind::Add) {
      Node fused = n;
      fused.op = OpKind::FullyConnected;
      fused.bias = g.nodes[i + 1].bias;
      nodes.push_back(std::move(fused));
      ++i;
      continue;
    }
    nodes.push_back(n);
  }
  return rebuild(g, std::move(nodes));
}

Graph fuse_activation(const Graph& g) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    const bool base = (n.op == OpKind::FullyConnected || n.op == OpKind::Conv1D) &&
                      n.attrs.activation == Activation::None;
    if (base && i + 1 < g.nodes.size() && is_elementwise_activation(g.nodes[i + 1].op)) {
      Node fused = n;
      fused.attrs.activation = as_activation(g.nodes[i + 1].op);
      nodes.push_back(std::move(fused));
      ++i;
      continue;
    }
    nodes.push_back(n);
  }
  return rebuild(g, std::move(nodes));
}

Graph elide_padding(const Graph& g, PassDiagnostics* diag) {
  const Graph shaped = g.has_shapes() ? g : infer_shapes(g);
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < shaped.nodes.size(); ++i) {
    const auto& n = shaped.nodes[i];
    if (n.op != OpKind::Pad) {
      nodes.push_back(n);
      continue;
    }
    // Collapse a run of consecutive pads first.
    Node run = n;
    while (i + 1 < shaped.nodes.size() && shaped.nodes[i + 1].op == OpKind::Pad) {
      ++i;
      run.attrs.pad_begin += shaped.nodes[i].attrs.pad_begin;
      run.attrs.pad_end += shaped.nodes[i].attrs.pad_end;
    }
    if (run.attrs.pad_begin == 0 && run.attrs.pad_end == 0) continue;
    const bool rank2 = shaped.edge_shapes[i].size() == 2;
    if (rank2 && i + 1 < shaped.nodes.size() && shaped.nodes[i + 1].op == OpKind::Conv1D) {
      Node conv = shaped.nodes[i + 1];
      conv.attrs.pad_begin += run.attrs.pad_begin;
      conv.attrs.pad_end += run.attrs.pad_end;
      nodes.push_back(std::move(conv));
      ++i;
      continue;
    }
    if (diag) {
      diag->warnings.push_back("pad '" + run.id + "' is not followed by a Conv1D; kept");
    }
    nodes.push_back(std::move(run));
  }
  return rebuild(shaped, std::move(nodes));
}

Graph optimize(const Graph& g, PassDiagnostics* diag) {
  return fuse_activation(fuse_matmul_add(elide_padding(g, diag)));
}

}  // namespace optc
