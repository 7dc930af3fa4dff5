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
#include <span>
#include <string_view>

#include "optc/dataset.hpp"
#include "optc/graph.hpp"

namespace optc {

enum class MetricKind { Auc, ErrorRate, Mse };
enum class Direction { HigherBetter, LowerBetter };

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric_kind(std::string_view name);
std::string_view to_string(Direction dir);
Direction direction_of(MetricKind kind);

struct QualityMetric {
  MetricKind kind = MetricKind::Mse;
  double value = 0.0;
  Direction direction = Direction::LowerBetter;

  /// Lower-is-better view: 1 - value for higher-better metrics.
  double error() const {
    return direction == Direction::HigherBetter ? 1.0 - value : value;
  }
};

/// Area under the ROC curve by the trapezoid rule over tied-score groups.
/// Labels are 0 (normal) / 1 (anomaly, positive class). Tied scores across
/// classes contribute one half per pair. Throws ValidationError when only one
/// class is present.
double roc_auc(std::span<const double> scores, std::span<const std::uint32_t> labels);

/// Evaluates the graph on every dataset row (rows in parallel) and reduces in
/// row order, so the value does not depend on the thread count.
QualityMetric evaluate(const Graph& g, const Dataset& d, MetricKind kind);

/// Single-threaded reference for evaluate().
QualityMetric evaluate_serial(const Graph& g, const Dataset& d, MetricKind kind);

/// Metric computed from precomputed outputs (N rows of the model output).
QualityMetric score_outputs(const Dataset& d, std::span<const float> outputs,
                            std::size_t out_len, MetricKind kind);

}  // namespace optc
