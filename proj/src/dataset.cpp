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

#include "optc/dataset.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "optc/error.hpp"

namespace optc {
namespace {

constexpr std::array<char, 8> kMagic{'O', 'P', 'T', 'C', 'D', 'S', '1', '\0'};

class Reader {
 public:
  explicit Reader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) {
      v = (v << 8) | static_cast<unsigned char>(bytes_[pos_ + static_cast<std::size_t>(b)]);
    }
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw ValidationError("dataset file is truncated");
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const char* data() const { return bytes_.data(); }

 private:
  std::vector<char> bytes_;
  std::size_t pos_ = kMagic.size();
};

void put_u32(std::ofstream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b, 4);
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dataset " + path.string());
  std::vector<char> bytes{std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>()};
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ValidationError(path.string() + ": bad dataset header");
  }
  Reader r(std::move(bytes));
  const auto n = r.u32();
  Dataset d;
  d.input_len = r.u32();
  d.target_len = r.u32();
  const auto kind = r.u32();
  if (kind > 2) throw ValidationError("unknown dataset task_kind " + std::to_string(kind));
  d.task = static_cast<TaskKind>(kind);
  if (n == 0 || d.input_len == 0) throw ValidationError("dataset must hold at least one row");
  if (d.task != TaskKind::Regression && d.target_len != 1) {
    throw ValidationError("label datasets must have target_len 1");
  }
  const std::size_t rows = n;
  r.need(rows * d.input_len * 4);
  d.inputs.resize(rows * d.input_len);
  for (auto& v : d.inputs) v = r.f32();
  if (d.task == TaskKind::Regression) {
    r.need(rows * d.target_len * 4);
    d.targets.resize(rows * d.target_len);
    for (auto& v : d.targets) v = r.f32();
  } else {
    r.need(rows * 4);
    d.labels.resize(rows);
    for (auto& v : d.labels) v = r.u32();
  }
  if (r.remaining() != 0) throw ValidationError("dataset file has trailing bytes");
  return d;
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PipelineError("cannot write dataset " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(d.size()));
  put_u32(out, static_cast<std::uint32_t>(d.input_len));
  put_u32(out, static_cast<std::uint32_t>(d.task == TaskKind::Regression ? d.target_len : 1));
  put_u32(out, static_cast<std::uint32_t>(d.task));
  for (float v : d.inputs) put_u32(out, std::bit_cast<std::uint32_t>(v));
  if (d.task == TaskKind::Regression) {
    for (float v : d.targets) put_u32(out, std::bit_cast<std::uint32_t>(v));
  } else {
    for (auto v : d.labels) put_u32(out, v);
  }
}

void check_compatible(const Graph& g, const Dataset& d) {
  if (d.size() == 0) throw ValidationError("dataset is empty");
  const auto in_len = static_cast<std::size_t>(num_elements(g.input_shape));
  if (d.input_len != in_len) {
    throw ValidationError("dataset rows have " + std::to_string(d.input_len) +
                          " inputs, model expects " + std::to_string(in_len));
  }
  const auto out_len = static_cast<std::size_t>(num_elements(g.output_shape()));
  switch (d.task) {
    case TaskKind::Regression:
      if (d.target_len != out_len || d.targets.size() != d.size() * d.target_len) {
        throw ValidationError("regression targets do not match model output " +
                              to_string(g.output_shape()));
      }
      break;
    case TaskKind::Classification:
      if (d.labels.size() != d.size()) throw ValidationError("label count mismatch");
      for (auto l : d.labels) {
        if (l >= out_len) throw ValidationError("class label exceeds model output width");
      }
      break;
    case TaskKind::Anomaly:
      if (d.labels.size() != d.size()) throw ValidationError("label count mismatch");
      if (out_len != in_len) {
        throw ValidationError("anomaly scoring needs a reconstruction model "
                              "(output width == input width)");
      }
      break;
  }
}

}  // namespace optc
