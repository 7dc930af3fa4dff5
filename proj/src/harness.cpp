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

#include "optc/harness.hpp"

#include "optc/error.hpp"

namespace optc {
namespace {

constexpr std::string_view kBench = R"(/* Generated by optc: timing harness. */
#define _POSIX_C_SOURCE 199309L
#include <stdio.h>
#include <time.h>

#include "nn.h"

#define INPUT_LEN @INPUT_LEN@
#define OUTPUT_LEN @OUTPUT_LEN@
#define REPS @REPS@
#define INNER_ITERS @INNER_ITERS@

#if INPUT_LEN != NN_INPUT_LEN || OUTPUT_LEN != NN_OUTPUT_LEN
#error "harness instantiated for a different model"
#endif

static float bench_input[INPUT_LEN];
static float bench_output[OUTPUT_LEN];
static unsigned int bench_state = 2463534242u;

/* xorshift32 mapped to [-1, 1) */
static float bench_next(void) {
  bench_state ^= bench_state << 13;
  bench_state ^= bench_state >> 17;
  bench_state ^= bench_state << 5;
  return (float)(bench_state >> 8) / 8388608.0f - 1.0f;
}

int main(void) {
  volatile float sink = 0.0f;
  long i;
  int r;
  for (i = 0; i < INPUT_LEN; ++i) bench_input[i] = bench_next();
  for (r = 0; r < REPS; ++r) {
    struct timespec t0, t1;
    double us;
    clock_gettime(CLOCK_MONOTONIC, &t0);
    for (i = 0; i < INNER_ITERS; ++i) {
      if (nn_inference(bench_input, bench_output) != 0) return 1;
      sink += bench_output[0];
    }
    clock_gettime(CLOCK_MONOTONIC, &t1);
    us = (double)(t1.tv_sec - t0.tv_sec) * 1e6 + (double)(t1.tv_nsec - t0.tv_nsec) / 1e3;
    printf("%.4f\n", us / (double)INNER_ITERS);
  }
  (void)sink;
  return 0;
}
)";

constexpr std::string_view kConform = R"(/* Generated by optc: conformance harness. */
#include <stdio.h>

#include "nn.h"

#define INPUT_LEN @INPUT_LEN@
#define OUTPUT_LEN @OUTPUT_LEN@

#if INPUT_LEN != NN_INPUT_LEN || OUTPUT_LEN != NN_OUTPUT_LEN
#error "harness instantiated for a different model"
#endif

static float conform_input[INPUT_LEN];
static float conform_output[OUTPUT_LEN];

int main(void) {
  for (;;) {
    size_t got = fread(conform_input, sizeof(float), (size_t)INPUT_LEN, stdin);
    if (got == 0) break;
    if (got != (size_t)INPUT_LEN) return 2;
    if (nn_inference(conform_input, conform_output) != 0) return 1;
    if (fwrite(conform_output, sizeof(float), (size_t)OUTPUT_LEN, stdout) != (size_t)OUTPUT_LEN) {
      return 3;
    }
  }
  return 0;
}
)";

}  // namespace

std::string substitute_placeholders(std::string_view text,
                                    const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find('@', pos);
    if (open == std::string_view::npos) break;
    auto close = text.find('@', open + 1);
    if (close == std::string_view::npos) break;
    std::string name(text.substr(open + 1, close - open - 1));
    const bool is_name = !name.empty() && name.find_first_not_of(
                                              "ABCDEFGHIJKLMNOPQRSTUVWXYZ_") == std::string::npos;
    out.append(text.substr(pos, open - pos));
    if (!is_name) {
      out.push_back('@');
      pos = open + 1;
      continue;
    }
    auto it = values.find(name);
    if (it == values.end()) throw ValidationError("missing harness placeholder " + name);
    out += it->second;
    pos = close + 1;
  }
  out.append(text.substr(pos));
  return out;
}

std::string_view harness_template(HarnessKind kind) {
  return kind == HarnessKind::Bench ? kBench : kConform;
}

std::string instantiate_harness(HarnessKind kind, const HarnessParams& params) {
  std::map<std::string, std::string> values{
      {"INPUT_LEN", std::to_string(params.input_len)},
      {"OUTPUT_LEN", std::to_string(params.output_len)},
  };
  if (kind == HarnessKind::Bench) {
    if (params.reps < 1 || params.inner_iters < 1) {
      throw ValidationError("bench harness needs REPS >= 1 and INNER_ITERS >= 1");
    }
    values["REPS"] = std::to_string(params.reps);
    values["INNER_ITERS"] = std::to_string(params.inner_iters);
  }
  return substitute_placeholders(harness_template(kind), values);
}

}  // namespace optc
