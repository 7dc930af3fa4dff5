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

#include "optc/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>

#include "optc/error.hpp"

namespace optc {
namespace {

// Keeps rows `rows` (axis 0) and, when given, the columns / input channels
// `cols` (axis 1) of a trainable node's weights.
Tensor slice_weights(const Tensor& w, const std::vector<std::int64_t>& rows,
                     const std::vector<std::int64_t>* cols) {
  const auto in = w.shape[1];
  const auto inner = w.shape.size() == 3 ? w.shape[2] : 1;
  std::vector<std::int64_t> all_cols;
  if (!cols) {
    all_cols.resize(static_cast<std::size_t>(in));
    std::iota(all_cols.begin(), all_cols.end(), 0);
    cols = &all_cols;
  }
  Tensor out;
  out.name = w.name;
  out.shape = w.shape;
  out.shape[0] = static_cast<std::int64_t>(rows.size());
  out.shape[1] = static_cast<std::int64_t>(cols->size());
  out.data.reserve(static_cast<std::size_t>(out.size()));
  for (auto r : rows) {
    for (auto c : *cols) {
      const auto base = (r * in + c) * inner;
      out.data.insert(out.data.end(), w.data.begin() + base, w.data.begin() + base + inner);
    }
  }
  return out;
}

Tensor slice_vector(const Tensor& t, const std::vector<std::int64_t>& keep) {
  Tensor out;
  out.name = t.name;
  out.shape = {static_cast<std::int64_t>(keep.size())};
  for (auto k : keep) out.data.push_back(t.data[static_cast<std::size_t>(k)]);
  return out;
}

struct PendingScatter {
  std::vector<std::int64_t> indices;
  std::int64_t length = 0;
  float fill = 0.0f;
  std::string id;
};

Node make_scatter(const PendingScatter& p) {
  Node n;
  n.id = p.id;
  n.op = OpKind::Scatter;
  n.attrs.indices = p.indices;
  n.attrs.length = p.length;
  n.attrs.fill = p.fill;
  return n;
}

std::string unique_id(const Graph& g, std::string base) {
  std::set<std::string> ids;
  for (const auto& n : g.nodes) ids.insert(n.id);
  while (ids.count(base)) base += "_";
  return base;
}

}  // namespace

std::vector<std::int64_t> l1_rank(const Node& layer) {
  if (!is_trainable(layer.op) || !layer.weights) {
    throw ValidationError(layer.id, "l1_rank needs a trainable layer");
  }
  const auto units = layer.output_units();
  const auto per_unit = layer.weights->size() / units;
  std::vector<double> norms(static_cast<std::size_t>(units), 0.0);
  for (std::int64_t u = 0; u < units; ++u) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < per_unit; ++i) {
      sum += std::fabs(static_cast<double>(layer.weights->data[static_cast<std::size_t>(u * per_unit + i)]));
    }
    norms[static_cast<std::size_t>(u)] = sum;
  }
  std::vector<std::int64_t> order(static_cast<std::size_t>(units));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return norms[static_cast<std::size_t>(a)] > norms[static_cast<std::size_t>(b)];
  });
  return order;
}

std::int64_t remaining_units(std::int64_t units, double rate) {
  const double exact = static_cast<double>(units) * (1.0 - rate);
  const auto m = static_cast<std::int64_t>(std::ceil(exact - 1e-9));
  return std::clamp<std::int64_t>(m, 1, units);
}

PrunedVariant prune_structural(const Graph& g, const std::vector<double>& rates) {
  if (!g.has_shapes()) throw ValidationError("prune_structural requires inferred shapes");
  const auto layers = trainable_layers(g);
  if (rates.size() != layers.size()) {
    throw ValidationError("expected " + std::to_string(layers.size()) +
                          " pruning rates, got " + std::to_string(rates.size()));
  }
  for (auto p : rates) {
    if (!(p >= 0.0 && p < 1.0)) {
      throw ValidationError("pruning rate " + std::to_string(p) + " outside [0, 1)");
    }
  }

  PrunedVariant v;
  Graph out;
  out.input_shape = g.input_shape;
  std::optional<std::vector<std::int64_t>> live;  // kept positions on axis 0
  std::optional<PendingScatter> pending;
  std::size_t layer = 0;
  const auto last_trainable = layers.back();

  auto flush_scatter = [&] {
    out.nodes.push_back(make_scatter(*pending));
    pending.reset();
    live.reset();
  };

  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    Node n = g.nodes[i];
    const auto& in_shape = g.edge_shapes[i];
    if (pending && n.op != OpKind::Add && n.op != OpKind::Scatter) flush_scatter();

    if (is_trainable(n.op)) {
      const auto units = n.output_units();
      const auto m = remaining_units(units, rates[layer]);
      auto rank = l1_rank(g.nodes[i]);
      std::vector<std::int64_t> kept(rank.begin(), rank.begin() + m);
      std::sort(kept.begin(), kept.end());
      if (m < units || live) {
        n.weights = slice_weights(*n.weights, kept, live ? &*live : nullptr);
        if (n.bias) n.bias = slice_vector(*n.bias, kept);
        n.attrs.in_channels.reset();
        n.attrs.out_channels.reset();
      }
      live.reset();
      if (m < units) {
        live = kept;
        if (i == last_trainable) {
          pending = PendingScatter{kept, units, activation_at_zero(n.attrs.activation),
                                   unique_id(g, n.id + ".restore")};
        }
      }
      v.kept_indices.push_back(std::move(kept));
      v.remaining.push_back(m);
      ++layer;
      out.nodes.push_back(std::move(n));
      // A fused epilogue already produced act(0) semantics for the removed
      // outputs, so restore the width right here.
      if (pending && out.nodes.back().attrs.activation != Activation::None) flush_scatter();
      continue;
    }

    if (live) {
      switch (n.op) {
        case OpKind::Add:
          n.bias = slice_vector(*n.bias, *live);
          break;
        case OpKind::ReLU:
        case OpKind::Tanh:
        case OpKind::Sigmoid:
        case OpKind::MaxPool1D:
        case OpKind::AvgPool1D:
        case OpKind::Pad:
          break;
        case OpKind::Flatten:
          if (in_shape.size() == 2) {
            const auto len = in_shape[1];
            std::vector<std::int64_t> positions;
            positions.reserve(live->size() * static_cast<std::size_t>(len));
            for (auto c : *live) {
              for (std::int64_t t = 0; t < len; ++t) positions.push_back(c * len + t);
            }
            live = std::move(positions);
          }
          break;
        case OpKind::Scatter: {
          std::vector<std::int64_t> composed;
          for (auto k : *live) composed.push_back(n.attrs.indices[static_cast<std::size_t>(k)]);
          n.attrs.indices = std::move(composed);
          live.reset();
          pending.reset();
          break;
        }
        default:
          throw PipelineError("cannot propagate pruned indices through node '" + n.id +
                              "' (" + std::string(to_string(n.op)) + ")");
      }
    }
    out.nodes.push_back(std::move(n));
  }
  if (pending) flush_scatter();

  v.graph = infer_shapes(std::move(out));
  return v;
}

std::vector<LayerSensitivity> sensitivity_analysis(const Graph& g, const QualityFn& quality,
                                                   const SensitivityOptions& opts,
                                                   const ProbeObserver& observer) {
  const auto& probes = opts.probes;
  if (probes.empty()) throw ValidationError("probe rate sequence is empty");
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (!(probes[i] >= 0.0 && probes[i] < 1.0) || (i > 0 && probes[i] <= probes[i - 1])) {
      throw ValidationError("probe rates must be strictly ascending within [0, 1)");
    }
  }
  if (!std::isfinite(opts.threshold)) throw ValidationError("threshold must be finite");

  const auto layers = trainable_layers(g);
  std::vector<LayerSensitivity> result;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    LayerSensitivity s;
    s.layer_id = g.nodes[layers[li]].id;
    s.p_max = probes.back();
    for (double p : probes) {
      std::vector<double> rates(layers.size(), 0.0);
      rates[li] = p;
      auto variant = prune_structural(g, rates);
      if (observer) observer(li, p, variant);
      const double a = quality(variant.graph);
      s.probe_curve.emplace_back(p, a);
      const bool crossed = std::isnan(a) ||
                           (opts.direction == Direction::HigherBetter ? a < opts.threshold
                                                                      : a > opts.threshold);
      if (crossed) {
        s.p_max = p;
        break;
      }
    }
    s.s = 1.0 - s.p_max;
    result.push_back(std::move(s));
  }
  return result;
}

std::vector<LayerSensitivity> sensitivity_analysis(const Graph& g, const Dataset& d,
                                                   MetricKind kind,
                                                   const SensitivityOptions& opts,
                                                   const ProbeObserver& observer) {
  check_compatible(g, d);
  auto quality = [&](const Graph& pruned) { return evaluate(pruned, d, kind).value; };
  return sensitivity_analysis(g, quality, opts, observer);
}

std::vector<double> PruneSchedule::rates_at(int j) const {
  std::vector<double> rates;
  rates.reserve(initial_rates.size());
  for (double p : initial_rates) rates.push_back(p * j);
  return rates;
}

std::vector<std::int64_t> PruneSchedule::remaining_at(int j) const {
  std::vector<std::int64_t> m;
  const auto rates = rates_at(j);
  for (std::size_t i = 0; i < widths.size(); ++i) m.push_back(remaining_units(widths[i], rates[i]));
  return m;
}

PruneSchedule make_schedule(const Graph& g, const std::vector<LayerSensitivity>& sens,
                            int steps) {
  if (steps < 1) throw ValidationError("J must be a positive integer");
  auto widths = layer_widths(g);
  if (sens.size() != widths.size()) {
    throw ValidationError("sensitivity report covers " + std::to_string(sens.size()) +
                          " layers, model has " + std::to_string(widths.size()));
  }
  PruneSchedule sched;
  sched.steps = steps;
  sched.widths = std::move(widths);
  for (const auto& s : sens) {
    if (!(s.p_max >= 0.0 && s.p_max < 1.0)) {
      throw ValidationError("layer '" + s.layer_id + "' has p_max outside [0, 1)");
    }
    sched.initial_rates.push_back(s.p_max / steps);
  }
  return sched;
}

PrunedVariant gwp_variant(const Graph& g, const PruneSchedule& sched, int j) {
  if (j < 0 || j > sched.steps) {
    throw ValidationError("iteration j=" + std::to_string(j) + " outside [0, " +
                          std::to_string(sched.steps) + "]");
  }
  auto v = prune_structural(g, sched.rates_at(j));
  v.j = j;
  return v;
}

}  // namespace optc
