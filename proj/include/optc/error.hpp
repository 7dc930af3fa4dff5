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

#include <stdexcept>
#include <string>

namespace optc {

/// Input rejected by validation: malformed model file, shape mismatch,
/// unsupported operator, non-linear topology, bad dataset.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message)
      : std::runtime_error(message) {}
  ValidationError(std::string node_id, const std::string& message)
      : std::runtime_error("node '" + node_id + "': " + message),
        node_id_(std::move(node_id)) {}

  /// Empty when the error is not attributable to a single node.
  const std::string& node_id() const { return node_id_; }

 private:
  std::string node_id_;
};

/// A pipeline stage failed on otherwise valid input (host compiler errors,
/// harness divergence, unsupported propagation during pruning).
class PipelineError : public std::runtime_error {
 public:
  explicit PipelineError(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace optc
