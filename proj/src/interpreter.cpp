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

#include "optc/interpreter.hpp"

#include <algorithm>
#include <cmath>

#include "optc/error.hpp"

namespace optc {
namespace {

float apply(Activation act, float v) {
  switch (act) {
    case Activation::None: return v;
    case Activation::ReLU: return v > 0.0f ? v : 0.0f;
    case Activation::Tanh: return std::tanh(v);
    case Activation::Sigmoid: return 1.0f / (1.0f + std::exp(-v));
  }
  return v;
}

void dense(const Node& n, const float* x, float* y) {
  const auto out = n.output_units();
  const auto in = n.input_units();
  const float* w = n.weights->data.data();
  const float* b = n.bias ? n.bias->data.data() : nullptr;
  for (std::int64_t o = 0; o < out; ++o) {
    float acc = 0.0f;
    const float* row = w + o * in;
    for (std::int64_t i = 0; i < in; ++i) acc += row[i] * x[i];
    if (b) acc += b[o];
    y[o] = apply(n.attrs.activation, acc);
  }
}

// Output channel outer, position middle, (in_channel x k) inner. Taps that
// fall into padding read 0.0f so folding an explicit Pad is exact.
void conv(const Node& n, const Shape& in_shape, const Shape& out_shape,
          const float* x, float* y) {
  const auto oc_n = n.output_units();
  const auto ic_n = n.input_units();
  const auto k = n.kernel_size();
  const auto len = in_shape[1];
  const auto out_len = out_shape[1];
  const float* w = n.weights->data.data();
  const float* b = n.bias ? n.bias->data.data() : nullptr;
  for (std::int64_t oc = 0; oc < oc_n; ++oc) {
    for (std::int64_t t = 0; t < out_len; ++t) {
      float acc = 0.0f;
      const auto start = t * n.attrs.stride - n.attrs.pad_begin;
      for (std::int64_t ic = 0; ic < ic_n; ++ic) {
        const float* wk = w + (oc * ic_n + ic) * k;
        const float* xc = x + ic * len;
        for (std::int64_t kk = 0; kk < k; ++kk) {
          const auto pos = start + kk;
          const float v = (pos >= 0 && pos < len) ? xc[pos] : 0.0f;
          acc += wk[kk] * v;
        }
      }
      if (b) acc += b[oc];
      y[oc * out_len + t] = apply(n.attrs.activation, acc);
    }
  }
}

void pool(const Node& n, const Shape& in_shape, const Shape& out_shape,
          const float* x, float* y) {
  const auto ch = in_shape[0];
  const auto len = in_shape[1];
  const auto out_len = out_shape[1];
  const auto w = n.attrs.pool_size;
  const bool is_max = n.op == OpKind::MaxPool1D;
  for (std::int64_t c = 0; c < ch; ++c) {
    for (std::int64_t t = 0; t < out_len; ++t) {
      const float* src = x + c * len + t * n.attrs.stride;
      float acc = src[0];
      for (std::int64_t i = 1; i < w; ++i) {
        acc = is_max ? (src[i] > acc ? src[i] : acc) : acc + src[i];
      }
      y[c * out_len + t] = is_max ? acc : acc / static_cast<float>(w);
    }
  }
}

void run_node(const Node& n, const Shape& in_shape, const Shape& out_shape,
              const float* x, float* y) {
  const auto in_count = num_elements(in_shape);
  const auto out_count = num_elements(out_shape);
  switch (n.op) {
    case OpKind::FullyConnected:
    case OpKind::MatMul:
      dense(n, x, y);
      return;
    case OpKind::Conv1D:
      conv(n, in_shape, out_shape, x, y);
      return;
    case OpKind::Add: {
      const auto ch = in_shape[0];
      const auto inner = in_count / ch;
      const float* b = n.bias->data.data();
      for (std::int64_t c = 0; c < ch; ++c) {
        for (std::int64_t i = 0; i < inner; ++i) y[c * inner + i] = x[c * inner + i] + b[c];
      }
      return;
    }
    case OpKind::ReLU:
    case OpKind::Tanh:
    case OpKind::Sigmoid: {
      const auto act = n.op == OpKind::ReLU   ? Activation::ReLU
                       : n.op == OpKind::Tanh ? Activation::Tanh
                                              : Activation::Sigmoid;
      for (std::int64_t i = 0; i < in_count; ++i) y[i] = apply(act, x[i]);
      return;
    }
    case OpKind::MaxPool1D:
    case OpKind::AvgPool1D:
      pool(n, in_shape, out_shape, x, y);
      return;
    case OpKind::Flatten:
      std::copy(x, x + in_count, y);
      return;
    case OpKind::Pad: {
      const auto len = in_shape.back();
      const auto out_len = out_shape.back();
      const auto rows = in_count / len;
      for (std::int64_t r = 0; r < rows; ++r) {
        float* dst = y + r * out_len;
        std::fill(dst, dst + out_len, 0.0f);
        std::copy(x + r * len, x + (r + 1) * len, dst + n.attrs.pad_begin);
      }
      return;
    }
    case OpKind::Softmax: {
      float mx = x[0];
      for (std::int64_t i = 1; i < in_count; ++i) mx = x[i] > mx ? x[i] : mx;
      float sum = 0.0f;
      for (std::int64_t i = 0; i < in_count; ++i) {
        y[i] = std::exp(x[i] - mx);
        sum += y[i];
      }
      for (std::int64_t i = 0; i < in_count; ++i) y[i] = y[i] / sum;
      return;
    }
    case OpKind::Scatter: {
      const auto inner = in_shape[0] ? in_count / in_shape[0] : 0;
      std::fill(y, y + out_count, n.attrs.fill);
      for (std::size_t c = 0; c < n.attrs.indices.size(); ++c) {
        const auto dst = n.attrs.indices[c] * inner;
        std::copy(x + static_cast<std::int64_t>(c) * inner,
                  x + (static_cast<std::int64_t>(c) + 1) * inner, y + dst);
      }
      return;
    }
  }
  throw PipelineError("interpreter: unsupported node " + n.id);
}

std::size_t check_input(const Graph& g, std::size_t count) {
  if (!g.has_shapes()) throw ValidationError("forward requires inferred shapes");
  const auto in_len = static_cast<std::size_t>(num_elements(g.input_shape));
  if (count != in_len) {
    throw ValidationError("input has " + std::to_string(count) + " values, model expects " +
                          to_string(g.input_shape));
  }
  return in_len;
}

void forward_into(const Graph& g, std::span<const float> input, float* output,
                  std::vector<float>& a, std::vector<float>& b) {
  a.assign(input.begin(), input.end());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    b.resize(static_cast<std::size_t>(num_elements(g.edge_shapes[i + 1])));
    run_node(g.nodes[i], g.edge_shapes[i], g.edge_shapes[i + 1], a.data(), b.data());
    std::swap(a, b);
  }
  std::copy(a.begin(), a.end(), output);
}

}  // namespace

std::vector<float> forward(const Graph& g, std::span<const float> input) {
  check_input(g, input.size());
  std::vector<float> out(static_cast<std::size_t>(num_elements(g.output_shape())));
  std::vector<float> a, b;
  forward_into(g, input, out.data(), a, b);
  return out;
}

std::vector<float> forward_batch_serial(const Graph& g, std::span<const float> inputs,
                                        std::size_t rows) {
  const auto in_len = check_input(g, rows ? inputs.size() / rows : 0);
  const auto out_len = static_cast<std::size_t>(num_elements(g.output_shape()));
  std::vector<float> out(rows * out_len);
  std::vector<float> a, b;
  for (std::size_t r = 0; r < rows; ++r) {
    forward_into(g, inputs.subspan(r * in_len, in_len), out.data() + r * out_len, a, b);
  }
  return out;
}

std::vector<float> forward_batch(const Graph& g, std::span<const float> inputs,
                                 std::size_t rows) {
  const auto in_len = check_input(g, rows ? inputs.size() / rows : 0);
  const auto out_len = static_cast<std::size_t>(num_elements(g.output_shape()));
  std::vector<float> out(rows * out_len);
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel
  {
    std::vector<float> a, b;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      const auto row = static_cast<std::size_t>(r);
      forward_into(g, inputs.subspan(row * in_len, in_len), out.data() + row * out_len, a, b);
    }
  }
  return out;
}

}  // namespace optc
