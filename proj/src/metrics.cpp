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

#include "optc/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "optc/error.hpp"
#include "optc/interpreter.hpp"

namespace optc {
namespace {

void check_kind(const Dataset& d, MetricKind kind) {
  const bool ok = (d.task == TaskKind::Anomaly && kind == MetricKind::Auc) ||
                  (d.task == TaskKind::Classification && kind == MetricKind::ErrorRate) ||
                  (d.task == TaskKind::Regression && kind == MetricKind::Mse);
  if (!ok) {
    throw ValidationError("metric '" + std::string(to_string(kind)) +
                          "' does not apply to this dataset's task kind");
  }
}

double row_squared_error(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += diff * diff;
  }
  return sum;
}

}  // namespace

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Auc: return "auc";
    case MetricKind::ErrorRate: return "error_rate";
    case MetricKind::Mse: return "mse";
  }
  return "mse";
}

std::optional<MetricKind> parse_metric_kind(std::string_view name) {
  for (auto k : {MetricKind::Auc, MetricKind::ErrorRate, MetricKind::Mse}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Direction dir) {
  return dir == Direction::HigherBetter ? "higher_better" : "lower_better";
}

Direction direction_of(MetricKind kind) {
  return kind == MetricKind::Auc ? Direction::HigherBetter : Direction::LowerBetter;
}

double roc_auc(std::span<const double> scores, std::span<const std::uint32_t> labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("roc_auc: score and label counts differ");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return scores[a] > scores[b]; });
  std::int64_t pos = 0;
  std::int64_t neg = 0;
  for (auto l : labels) (l ? pos : neg)++;
  if (pos == 0 || neg == 0) {
    throw ValidationError("AUC is undefined when only one class is present");
  }
  // Walking thresholds from high to low, each tied group moves the ROC point
  // by (fp_g, tp_g). Twice the trapezoid area in units of 1/(P*N) is then an
  // exact integer: sum over groups of fp_g * (2 * tp_before + tp_g).
  std::int64_t tp = 0;
  std::int64_t twice_area = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::int64_t tp_g = 0;
    std::int64_t fp_g = 0;
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? tp_g : fp_g)++;
      ++j;
    }
    twice_area += fp_g * (2 * tp + tp_g);
    tp += tp_g;
    i = j;
  }
  return static_cast<double>(twice_area) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

QualityMetric score_outputs(const Dataset& d, std::span<const float> outputs,
                            std::size_t out_len, MetricKind kind) {
  check_kind(d, kind);
  const auto n = d.size();
  QualityMetric m{kind, 0.0, direction_of(kind)};
  switch (kind) {
    case MetricKind::Mse: {
      double total = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        total += row_squared_error(outputs.subspan(r * out_len, out_len), d.target(r));
      }
      m.value = total / static_cast<double>(n * out_len);
      break;
    }
    case MetricKind::ErrorRate: {
      std::size_t wrong = 0;
      for (std::size_t r = 0; r < n; ++r) {
        auto row = outputs.subspan(r * out_len, out_len);
        auto arg = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        if (arg != d.labels[r]) ++wrong;
      }
      m.value = static_cast<double>(wrong) / static_cast<double>(n);
      break;
    }
    case MetricKind::Auc: {
      std::vector<double> scores(n);
      for (std::size_t r = 0; r < n; ++r) {
        scores[r] = row_squared_error(outputs.subspan(r * out_len, out_len), d.input(r)) /
                    static_cast<double>(out_len);
      }
      m.value = roc_auc(scores, d.labels);
      break;
    }
  }
  return m;
}

QualityMetric evaluate(const Graph& g, const Dataset& d, MetricKind kind) {
  check_kind(d, kind);
  check_compatible(g, d);
  const auto out = forward_batch(g, d.inputs, d.size());
  return score_outputs(d, out, static_cast<std::size_t>(num_elements(g.output_shape())), kind);
}

QualityMetric evaluate_serial(const Graph& g, const Dataset& d, MetricKind kind) {
  check_kind(d, kind);
  check_compatible(g, d);
  const auto out = forward_batch_serial(g, d.inputs, d.size());
  return score_outputs(d, out, static_cast<std::size_t>(num_elements(g.output_shape())), kind);
}

}  // namespace optc
