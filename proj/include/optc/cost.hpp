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

#include <boost/multiprecision/cpp_int.hpp>

#include "optc/graph.hpp"

namespace optc {

struct CostReport {
  std::int64_t param_count = 0;
  std::int64_t param_bytes = 0;
  std::int64_t flops = 0;
  std::int64_t intermediate_bytes_naive = 0;
  std::int64_t rom_estimate_bytes = 0;
  std::int64_t ram_estimate_bytes = 0;
};

/// FLOPs count a multiply and an add separately; activation, pooling, add and
/// softmax nodes cost one op per output element; flatten, pad and scatter are
/// data movement and cost nothing.
CostReport count_cost(const Graph& g);

std::int64_t node_flops(const Node& n, const Shape& in, const Shape& out);
std::int64_t node_params(const Node& n);

enum class DesignSpaceMode { Global, LayerWise };

/// |Omega|: max_i M_i for global pruning, prod_i M_i for layer-wise pruning.
boost::multiprecision::cpp_int design_space_size(const Graph& g, DesignSpaceMode mode);

}  // namespace optc
