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

#include "optc/codegen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "optc/error.hpp"

namespace optc {
namespace {

// Rational minimax fit of tanh on [-7.905, 7.905]; odd numerator of degree
// 13, even denominator of degree 6. Beyond the clamp tanh is 1 to float
// precision.
constexpr float kTanhClamp = 7.90531110763549805f;
constexpr float kTanhNum[] = {-2.76076847742355e-16f, 2.00018790482477e-13f,
                              -8.60467152213735e-11f, 5.12229709037114e-08f,
                              1.48572235717979e-05f,  6.37261928875436e-04f,
                              4.89352455891786e-03f};
constexpr float kTanhDen[] = {1.19825839466702e-06f, 1.18534705686654e-04f,
                              2.26843463243900e-03f, 4.89352518554385e-03f};

std::string flit(float v) {
  if (!std::isfinite(v)) throw PipelineError("cannot emit non-finite constant");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9ef", static_cast<double>(v));
  return buf;
}

// Node ids end up inside C comments.
std::string comment_safe(std::string s) {
  for (std::size_t at = s.find("*/"); at != std::string::npos; at = s.find("*/", at)) {
    s[at] = '_';
  }
  return s;
}

std::string ref(const BufferRef& b, bool is_const) {
  switch (b.kind) {
    case BufferRef::Kind::GraphInput:
      return "input";
    case BufferRef::Kind::GraphOutput:
      return "output";
    case BufferRef::Kind::Arena:
      return std::string(is_const ? "(const float *)" : "") + "(nn_arena + " +
             std::to_string(b.offset / 4) + ")";
  }
  return "input";
}

class Emitter {
 public:
  Emitter(const Graph& g, const MemoryPlan& plan, const CodegenOptions& opts)
      : g_(g), plan_(plan), opts_(opts) {}

  EmittedProgram run() {
    EmittedProgram p;
    p.input_len = num_elements(g_.input_shape);
    p.output_len = num_elements(g_.output_shape());
    p.arena_bytes = plan_.arena_total_bytes;

    bool any_code = false;
    for (std::size_t i = 0; i < g_.nodes.size(); ++i) {
      if (!plan_.emits_code[i]) continue;
      any_code = true;
      emit_node(i);
      p.emitted_ops.push_back(g_.nodes[i].op);
    }
    if (!any_code) {
      body_ << "  for (int i = 0; i < NN_INPUT_LEN; ++i) output[i] = input[i];\n";
    }
    p.weight_bytes = weight_bytes_;

    std::ostringstream h;
    h << "/* Generated by optc. Do not edit. */\n"
      << "#ifndef NN_H_\n#define NN_H_\n\n"
      << "#define NN_INPUT_LEN " << p.input_len << "\n"
      << "#define NN_OUTPUT_LEN " << p.output_len << "\n"
      << "#define NN_ARENA_BYTES " << p.arena_bytes << "\n\n"
      << "/* Runs one inference. Intermediate activations live in a single static\n"
      << " * arena, so only one inference may run at a time per process.\n"
      << " * Returns 0 on success. */\n"
      << "int nn_inference(const float *input, float *output);\n\n"
      << "#endif /* NN_H_ */\n";
    p.sources["nn.h"] = h.str();

    std::ostringstream wh;
    wh << "/* Generated by optc. Do not edit. */\n"
       << "#ifndef NN_WEIGHTS_H_\n#define NN_WEIGHTS_H_\n\n"
       << weight_decls_.str() << "\n#endif /* NN_WEIGHTS_H_ */\n";
    p.sources["weights.h"] = wh.str();

    std::ostringstream wc;
    wc << "/* Generated by optc. Do not edit. */\n#include \"weights.h\"\n"
       << weight_defs_.str();
    if (weight_bytes_ == 0) wc << "typedef int nn_no_weights;\n";
    p.sources["weights.c"] = wc.str();

    std::ostringstream c;
    c << "/* Generated by optc. Do not edit. */\n"
      << "#include \"nn.h\"\n#include \"weights.h\"\n\n";
    if (needs_math_) c << "#include <math.h>\n\n";
    if (p.arena_bytes > 0) {
      c << "static float nn_arena[" << p.arena_bytes / 4 << "];\n\n";
    }
    if (needs_tanh_approx_ || needs_sigmoid_approx_) c << tanh_approx_source();
    if (needs_sigmoid_approx_) {
      c << "static float nn_sigmoid_approx(float x) {\n"
        << "  return 0.5f * nn_tanh_approx(0.5f * x) + 0.5f;\n}\n\n";
    }
    c << "int nn_inference(const float *input, float *output) {\n"
      << body_.str() << "  return 0;\n}\n";
    p.sources["nn.c"] = c.str();
    return p;
  }

 private:
  std::string weight_array(const Tensor& t, const std::string& name) {
    weight_decls_ << "extern const float " << name << "[" << t.data.size() << "];\n";
    weight_defs_ << "\nconst float " << name << "[" << t.data.size() << "] = {";
    for (std::size_t i = 0; i < t.data.size(); ++i) {
      if (i % 6 == 0) weight_defs_ << "\n ";
      weight_defs_ << ' ' << flit(t.data[i]) << ',';
    }
    weight_defs_ << "\n};\n";
    weight_bytes_ += static_cast<std::int64_t>(4 * t.data.size());
    return name;
  }

  std::string epilogue(Activation act) {
    switch (act) {
      case Activation::None:
        return "";
      case Activation::ReLU:
        return "      acc = acc > 0.0f ? acc : 0.0f;\n";
      case Activation::Tanh:
        if (opts_.approximate_activations) {
          needs_tanh_approx_ = true;
          return "      acc = nn_tanh_approx(acc);\n";
        }
        needs_math_ = true;
        return "      acc = tanhf(acc);\n";
      case Activation::Sigmoid:
        if (opts_.approximate_activations) {
          needs_sigmoid_approx_ = true;
          return "      acc = nn_sigmoid_approx(acc);\n";
        }
        needs_math_ = true;
        return "      acc = 1.0f / (1.0f + expf(-acc));\n";
    }
    return "";
  }

  void emit_node(std::size_t i) {
    const auto& n = g_.nodes[i];
    const auto& in = g_.edge_shapes[i];
    const auto& out = g_.edge_shapes[i + 1];
    const auto x = ref(plan_.node_input[i], true);
    const auto y = ref(plan_.node_output[i], false);
    const auto tag = "n" + std::to_string(i);
    body_ << "  /* " << comment_safe(n.id) << ": " << to_string(n.op);
    if (n.attrs.activation != Activation::None) body_ << "+" << to_string(n.attrs.activation);
    body_ << " " << to_string(in) << " -> " << to_string(out) << " */\n  {\n"
          << "    const float *x = " << x << ";\n"
          << "    float *y = " << y << ";\n";
    const auto in_count = num_elements(in);
    const auto out_count = num_elements(out);

    switch (n.op) {
      case OpKind::FullyConnected:
      case OpKind::MatMul: {
        const auto w = weight_array(*n.weights, "nn_w_" + tag);
        const auto rows = n.output_units();
        const auto cols = n.input_units();
        body_ << "    for (int o = 0; o < " << rows << "; ++o) {\n"
              << "      const float *w = " << w << " + o * " << cols << ";\n"
              << "      float acc = 0.0f;\n"
              << "      for (int i = 0; i < " << cols << "; ++i) acc += w[i] * x[i];\n";
        if (n.bias) body_ << "      acc += " << weight_array(*n.bias, "nn_b_" + tag) << "[o];\n";
        body_ << epilogue(n.attrs.activation) << "      y[o] = acc;\n    }\n";
        break;
      }
      case OpKind::Conv1D: {
        const auto w = weight_array(*n.weights, "nn_w_" + tag);
        const auto oc = n.output_units();
        const auto ic = n.input_units();
        const auto k = n.kernel_size();
        const auto len = in[1];
        const auto out_len = out[1];
        const bool padded = n.attrs.pad_begin > 0 || n.attrs.pad_end > 0;
        body_ << "    for (int oc = 0; oc < " << oc << "; ++oc) {\n"
              << "      for (int t = 0; t < " << out_len << "; ++t) {\n"
              << "        const int start = t * " << n.attrs.stride << " - " << n.attrs.pad_begin
              << ";\n"
              << "        float acc = 0.0f;\n"
              << "        for (int ic = 0; ic < " << ic << "; ++ic) {\n"
              << "          const float *wk = " << w << " + (oc * " << ic << " + ic) * " << k
              << ";\n"
              << "          const float *xc = x + ic * " << len << ";\n"
              << "          for (int kk = 0; kk < " << k << "; ++kk) {\n";
        if (padded) {
          body_ << "            const int pos = start + kk;\n"
                << "            const float v = (pos >= 0 && pos < " << len
                << ") ? xc[pos] : 0.0f;\n"
                << "            acc += wk[kk] * v;\n";
        } else {
          body_ << "            acc += wk[kk] * xc[start + kk];\n";
        }
        body_ << "          }\n        }\n";
        if (n.bias) {
          body_ << "        acc += " << weight_array(*n.bias, "nn_b_" + tag) << "[oc];\n";
        }
        auto epi = epilogue(n.attrs.activation);
        if (!epi.empty()) body_ << "  " << epi;
        body_ << "        y[oc * " << out_len << " + t] = acc;\n      }\n    }\n";
        break;
      }
      case OpKind::Add: {
        const auto b = weight_array(*n.bias, "nn_b_" + tag);
        const auto ch = in[0];
        const auto inner = in_count / ch;
        body_ << "    for (int c = 0; c < " << ch << "; ++c) {\n"
              << "      for (int i = 0; i < " << inner << "; ++i) {\n"
              << "        y[c * " << inner << " + i] = x[c * " << inner << " + i] + " << b
              << "[c];\n      }\n    }\n";
        break;
      }
      case OpKind::ReLU:
      case OpKind::Tanh:
      case OpKind::Sigmoid: {
        const auto act = n.op == OpKind::ReLU   ? Activation::ReLU
                         : n.op == OpKind::Tanh ? Activation::Tanh
                                                : Activation::Sigmoid;
        body_ << "    for (int i = 0; i < " << in_count << "; ++i) {\n"
              << "      float acc = x[i];\n"
              << epilogue(act) << "      y[i] = acc;\n    }\n";
        break;
      }
      case OpKind::MaxPool1D:
      case OpKind::AvgPool1D: {
        const bool is_max = n.op == OpKind::MaxPool1D;
        const auto w = n.attrs.pool_size;
        body_ << "    for (int c = 0; c < " << in[0] << "; ++c) {\n"
              << "      for (int t = 0; t < " << out[1] << "; ++t) {\n"
              << "        const float *src = x + c * " << in[1] << " + t * " << n.attrs.stride
              << ";\n"
              << "        float acc = src[0];\n"
              << "        for (int i = 1; i < " << w << "; ++i) ";
        if (is_max) {
          body_ << "acc = src[i] > acc ? src[i] : acc;\n"
                << "        y[c * " << out[1] << " + t] = acc;\n";
        } else {
          body_ << "acc += src[i];\n"
                << "        y[c * " << out[1] << " + t] = acc / " << flit(static_cast<float>(w))
                << ";\n";
        }
        body_ << "      }\n    }\n";
        break;
      }
      case OpKind::Pad: {
        const auto len = in.back();
        const auto out_len = out.back();
        const auto rows = in_count / len;
        body_ << "    for (int r = 0; r < " << rows << "; ++r) {\n"
              << "      for (int i = 0; i < " << out_len << "; ++i) y[r * " << out_len
              << " + i] = 0.0f;\n"
              << "      for (int i = 0; i < " << len << "; ++i) y[r * " << out_len << " + "
              << n.attrs.pad_begin << " + i] = x[r * " << len << " + i];\n"
              << "    }\n";
        break;
      }
      case OpKind::Softmax: {
        needs_math_ = true;
        body_ << "    float mx = x[0];\n"
              << "    float sum = 0.0f;\n"
              << "    for (int i = 1; i < " << in_count << "; ++i) mx = x[i] > mx ? x[i] : mx;\n"
              << "    for (int i = 0; i < " << in_count << "; ++i) {\n"
              << "      y[i] = expf(x[i] - mx);\n"
              << "      sum += y[i];\n    }\n"
              << "    for (int i = 0; i < " << in_count << "; ++i) y[i] = y[i] / sum;\n";
        break;
      }
      case OpKind::Scatter: {
        const auto inner = in_count / in[0];
        body_ << "    static const int dst[" << n.attrs.indices.size() << "] = {";
        for (std::size_t c = 0; c < n.attrs.indices.size(); ++c) {
          body_ << (c ? ", " : "") << n.attrs.indices[c];
        }
        body_ << "};\n"
              << "    for (int i = 0; i < " << out_count << "; ++i) y[i] = "
              << flit(n.attrs.fill) << ";\n"
              << "    for (int c = 0; c < " << in[0] << "; ++c) {\n"
              << "      for (int i = 0; i < " << inner << "; ++i) y[dst[c] * " << inner
              << " + i] = x[c * " << inner << " + i];\n    }\n";
        break;
      }
      case OpKind::Flatten:
        break;
    }
    body_ << "  }\n";
  }

  static std::string tanh_approx_source() {
    std::ostringstream s;
    s << "static float nn_tanh_approx(float x) {\n"
      << "  const float c = x > " << flit(kTanhClamp) << " ? " << flit(kTanhClamp)
      << " : (x < -" << flit(kTanhClamp) << " ? -" << flit(kTanhClamp) << " : x);\n"
      << "  const float x2 = c * c;\n"
      << "  float p = " << flit(kTanhNum[0]) << ";\n";
    for (std::size_t i = 1; i < std::size(kTanhNum); ++i) {
      s << "  p = p * x2 + " << flit(kTanhNum[i]) << ";\n";
    }
    s << "  p = p * c;\n"
      << "  float q = " << flit(kTanhDen[0]) << ";\n";
    for (std::size_t i = 1; i < std::size(kTanhDen); ++i) {
      s << "  q = q * x2 + " << flit(kTanhDen[i]) << ";\n";
    }
    s << "  return p / q;\n}\n\n";
    return s.str();
  }

  const Graph& g_;
  const MemoryPlan& plan_;
  const CodegenOptions& opts_;
  std::ostringstream body_;
  std::ostringstream weight_decls_;
  std::ostringstream weight_defs_;
  std::int64_t weight_bytes_ = 0;
  bool needs_math_ = false;
  bool needs_tanh_approx_ = false;
  bool needs_sigmoid_approx_ = false;
};

}  // namespace

float tanh_approx(float x) {
  const float c = x > kTanhClamp ? kTanhClamp : (x < -kTanhClamp ? -kTanhClamp : x);
  const float x2 = c * c;
  float p = kTanhNum[0];
  for (std::size_t i = 1; i < std::size(kTanhNum); ++i) p = p * x2 + kTanhNum[i];
  p = p * c;
  float q = kTanhDen[0];
  for (std::size_t i = 1; i < std::size(kTanhDen); ++i) q = q * x2 + kTanhDen[i];
  return p / q;
}

EmittedProgram emit(const Graph& g, const MemoryPlan& plan, const CodegenOptions& opts) {
  if (!g.has_shapes() || plan.node_input.size() != g.nodes.size()) {
    throw PipelineError("emit needs a shaped graph and its memory plan");
  }
  auto p = Emitter(g, plan, opts).run();
  const auto fp = estimate_footprint(p);
  p.rom_estimate_bytes = fp.rom_bytes;
  p.ram_estimate_bytes = fp.ram_bytes;
  return p;
}

void write_sources(const EmittedProgram& p, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : p.sources) {
    std::ofstream out(dir / name);
    if (!out) throw PipelineError("cannot write " + (dir / name).string());
    out << text;
  }
}

Footprint estimate_footprint(const EmittedProgram& p, const FootprintModel& model) {
  Footprint f;
  f.rom_bytes = p.weight_bytes + model.base_code_bytes;
  for (auto op : p.emitted_ops) {
    auto it = model.code_bytes_per_op.find(op);
    if (it != model.code_bytes_per_op.end()) f.rom_bytes += it->second;
  }
  f.ram_bytes = p.arena_bytes + 4 * (p.input_len + p.output_len) + model.stack_bytes;
  return f;
}

}  // namespace optc
