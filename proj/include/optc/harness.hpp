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
#include <map>
#include <string>
#include <string_view>

namespace optc {

enum class HarnessKind { Bench, Conform };

struct HarnessParams {
  std::int64_t input_len = 0;
  std::int64_t output_len = 0;
  std::int64_t reps = 5;
  std::int64_t inner_iters = 1;
};

/// Replaces every @NAME@ placeholder. Throws ValidationError naming the first
/// placeholder without a value.
std::string substitute_placeholders(std::string_view text,
                                    const std::map<std::string, std::string>& values);

/// C source of the measurement (bench) or conformance (conform) main program
/// that links against the emitted nn.c / weights.c.
///
/// bench: INNER_ITERS inferences per timed rep, REPS reps, on an input filled
/// by xorshift32 from seed 2463534242; prints one microseconds-per-inference
/// decimal per line and nothing else.
/// conform: reads raw little-endian float32 input vectors from stdin until EOF
/// and writes the raw float32 outputs to stdout.
std::string instantiate_harness(HarnessKind kind, const HarnessParams& params);

std::string_view harness_template(HarnessKind kind);

}  // namespace optc
