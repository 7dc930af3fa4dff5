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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "optc/dataset.hpp"
#include "optc/graph.hpp"
#include "optc/metrics.hpp"

namespace optc {

/// Output neurons / filters of a trainable node ordered by descending l1 norm
/// of their weight row or filter (bias excluded). Ties keep the lower index
/// first.
std::vector<std::int64_t> l1_rank(const Node& layer);

/// ceil(M * (1 - p)), guarded against products that land a rounding error
/// above an integer.
std::int64_t remaining_units(std::int64_t units, double rate);

struct PrunedVariant {
  int j = 0;
  Graph graph;
  // Per trainable layer: sorted original indices of the retained outputs.
  std::vector<std::vector<std::int64_t>> kept_indices;
  std::vector<std::int64_t> remaining;  // m_i
};

/// Removes the lowest-l1 outputs of every trainable layer (rates[i] applies to
/// the i-th trainable layer) and the matching input columns / channels of the
/// next trainable layer. Index sets propagate unchanged through activation,
/// pooling, pad and add nodes; flatten expands channel c of a [C, L] tensor
/// to positions c*L .. c*L + L - 1. When the final trainable layer loses
/// outputs, a Scatter node restores the original output width so the model
/// interface is unchanged.
PrunedVariant prune_structural(const Graph& g, const std::vector<double>& rates);

struct LayerSensitivity {
  std::string layer_id;
  double s = 1.0;      // 1 - p_max
  double p_max = 0.0;
  std::vector<std::pair<double, double>> probe_curve;  // (p, quality)
};

struct SensitivityOptions {
  std::vector<double> probes{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double threshold = 0.0;
  Direction direction = Direction::HigherBetter;
};

/// Observes each probe: trainable layer index, probe rate, pruned model.
using ProbeObserver = std::function<void(std::size_t, double, const PrunedVariant&)>;
using QualityFn = std::function<double(const Graph&)>;

/// Per-layer sweep over the probe rates with all other layers unpruned. The
/// first probe whose quality crosses the threshold (below it for higher-better
/// metrics, above it for lower-better ones) becomes p_max; when no probe
/// crosses, p_max is the largest probe. No retraining happens.
std::vector<LayerSensitivity> sensitivity_analysis(const Graph& g, const QualityFn& quality,
                                                   const SensitivityOptions& opts,
                                                   const ProbeObserver& observer = {});

std::vector<LayerSensitivity> sensitivity_analysis(const Graph& g, const Dataset& d,
                                                   MetricKind kind,
                                                   const SensitivityOptions& opts,
                                                   const ProbeObserver& observer = {});

struct PruneSchedule {
  int steps = 1;                       // J
  std::vector<double> initial_rates;   // p_init_i = p_max_i / J
  std::vector<std::int64_t> widths;    // M_i

  std::vector<double> rates_at(int j) const;
  std::vector<std::int64_t> remaining_at(int j) const;
};

PruneSchedule make_schedule(const Graph& g, const std::vector<LayerSensitivity>& sens,
                            int steps);

/// Global weighted pruning step j: p_i = p_init_i * j. j = 0 is the unpruned
/// model.
PrunedVariant gwp_variant(const Graph& g, const PruneSchedule& sched, int j);

}  // namespace optc
