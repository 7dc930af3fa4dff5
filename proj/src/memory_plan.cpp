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

#include <algorithm>

#include "optc/codegen.hpp"
#include "optc/error.hpp"

namespace optc {

MemoryPlan plan_memory(const Graph& g) {
  if (!g.has_shapes()) throw ValidationError("plan_memory requires inferred shapes");
  MemoryPlan plan;
  const auto n = g.nodes.size();
  plan.node_input.resize(n);
  plan.node_output.resize(n);
  plan.emits_code.resize(n);

  std::size_t last_compute = n;
  for (std::size_t i = 0; i < n; ++i) {
    plan.emits_code[i] = g.nodes[i].op != OpKind::Flatten;
    if (plan.emits_code[i]) last_compute = i;
  }

  BufferRef current{BufferRef::Kind::GraphInput, 0};
  for (std::size_t i = 0; i < n; ++i) {
    plan.node_input[i] = current;
    if (!plan.emits_code[i]) {
      plan.node_output[i] = current;
      continue;
    }
    if (current.kind == BufferRef::Kind::Arena) plan.tensors.back().last_use = i;
    if (i == last_compute) {
      current = {BufferRef::Kind::GraphOutput, 0};
    } else {
      PlannedTensor t;
      t.node = i;
      t.name = g.nodes[i].id;
      t.byte_size = 4 * num_elements(g.edge_shapes[i + 1]);
      t.first_def = i;
      t.last_use = i;
      plan.tensors.push_back(std::move(t));
      current = {BufferRef::Kind::Arena, 0};
    }
    plan.node_output[i] = current;
  }

  std::int64_t arena = 0;
  for (std::size_t k = 0; k < plan.tensors.size(); ++k) {
    arena = std::max(arena, plan.tensors[k].byte_size);
    if (k + 1 < plan.tensors.size()) {
      arena = std::max(arena, plan.tensors[k].byte_size + plan.tensors[k + 1].byte_size);
    }
  }
  for (std::size_t k = 0; k < plan.tensors.size(); ++k) {
    auto& t = plan.tensors[k];
    t.offset = (k % 2 == 0) ? 0 : arena - t.byte_size;
  }
  plan.arena_total_bytes = arena;

  // Resolve arena references to their offsets.
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (plan.emits_code[i] && plan.node_output[i].kind == BufferRef::Kind::Arena) {
      plan.node_output[i].offset = plan.tensors[k++].offset;
    } else if (!plan.emits_code[i]) {
      plan.node_output[i] = i ? plan.node_output[i - 1] : BufferRef{};
    }
    plan.node_input[i] = i ? plan.node_output[i - 1] : BufferRef{};
  }
  return plan;
}

}  // namespace optc
