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

#include <filesystem>
#include <string>

#include "optc/graph.hpp"

namespace optc {

/// Loads `model.json` and its sibling weight blob file, validates the chain
/// and infers every edge shape.
Graph load_graph(const std::filesystem::path& model_json);

/// Writes `<dir>/model.json` and `<dir>/weights.bin`. Returns the path of the
/// JSON file.
std::filesystem::path save_graph(const Graph& g, const std::filesystem::path& dir);

/// Human-readable one-line-per-node summary with inferred shapes.
std::string shape_summary(const Graph& g);

}  // namespace optc
