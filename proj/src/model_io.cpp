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

#include "optc/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "optc/error.hpp"

namespace optc {
namespace {

using nlohmann::json;

constexpr const char* kDefaultWeightsFile = "weights.bin";

const std::set<std::string> kNodeKeys{"id", "op", "attrs", "weights", "bias", "input"};
const std::set<std::string> kAttrKeys{"stride",      "pad_begin",    "pad_end",
                                      "pads",        "pool_size",    "in_channels",
                                      "out_channels", "activation",  "indices",
                                      "length",      "fill",         "kernel_size"};

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

float load_le_float(const char* p) {
  std::uint32_t bits = 0;
  for (int b = 3; b >= 0; --b) {
    bits = (bits << 8) | static_cast<unsigned char>(p[b]);
  }
  return std::bit_cast<float>(bits);
}

void store_le_float(std::string& out, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  for (int b = 0; b < 4; ++b) {
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
  }
}

Shape parse_shape(const json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array");
  Shape s;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<std::int64_t>() < 1) {
      throw ValidationError(what + " must hold positive integers");
    }
    s.push_back(d.get<std::int64_t>());
  }
  return s;
}

struct Blob {
  std::int64_t offset = 0;
  Shape shape;
};

Tensor read_blob(const std::string& node_id, const std::string& name,
                 const std::map<std::string, Blob>& blobs,
                 const std::vector<char>& bytes) {
  auto it = blobs.find(name);
  if (it == blobs.end()) {
    throw ValidationError(node_id, "blob '" + name + "' missing from manifest");
  }
  Tensor t;
  t.name = name;
  t.shape = it->second.shape;
  const auto count = t.size();
  const auto offset = it->second.offset;
  if (offset < 0 || offset + count * 4 > static_cast<std::int64_t>(bytes.size())) {
    throw ValidationError(node_id, "blob '" + name + "' exceeds weight file");
  }
  t.data.resize(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    t.data[static_cast<std::size_t>(i)] =
        load_le_float(bytes.data() + offset + 4 * i);
  }
  return t;
}

std::int64_t get_int(const json& attrs, const char* key, const std::string& id) {
  const auto& v = attrs.at(key);
  if (!v.is_number_integer()) {
    throw ValidationError(id, std::string("attribute '") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

void parse_attrs(Node& n, const json& attrs) {
  if (!attrs.is_object()) throw ValidationError(n.id, "attrs must be an object");
  for (const auto& [key, _] : attrs.items()) {
    if (!kAttrKeys.count(key)) {
      throw ValidationError(n.id, "unknown attribute '" + key + "'");
    }
  }
  auto& a = n.attrs;
  bool stride_given = attrs.contains("stride");
  if (stride_given) a.stride = get_int(attrs, "stride", n.id);
  if (attrs.contains("pads")) {
    const auto& p = attrs["pads"];
    if (!p.is_array() || p.size() != 2) {
      throw ValidationError(n.id, "pads must be [begin, end]");
    }
    a.pad_begin = p[0].get<std::int64_t>();
    a.pad_end = p[1].get<std::int64_t>();
  }
  if (attrs.contains("pad_begin")) a.pad_begin = get_int(attrs, "pad_begin", n.id);
  if (attrs.contains("pad_end")) a.pad_end = get_int(attrs, "pad_end", n.id);
  if (attrs.contains("pool_size")) a.pool_size = get_int(attrs, "pool_size", n.id);
  if (attrs.contains("in_channels")) a.in_channels = get_int(attrs, "in_channels", n.id);
  if (attrs.contains("out_channels")) a.out_channels = get_int(attrs, "out_channels", n.id);
  if (attrs.contains("activation")) {
    auto act = parse_activation(attrs["activation"].get<std::string>());
    if (!act) throw ValidationError(n.id, "unknown fused activation");
    a.activation = *act;
  }
  if (attrs.contains("indices")) a.indices = attrs["indices"].get<std::vector<std::int64_t>>();
  if (attrs.contains("length")) a.length = get_int(attrs, "length", n.id);
  if (attrs.contains("fill")) a.fill = attrs["fill"].get<float>();
  if (!stride_given && (n.op == OpKind::MaxPool1D || n.op == OpKind::AvgPool1D)) {
    a.stride = a.pool_size;
  }
  if (attrs.contains("kernel_size") && n.weights &&
      get_int(attrs, "kernel_size", n.id) != n.kernel_size()) {
    throw ValidationError(n.id, "shape mismatch: kernel_size attribute disagrees "
                                "with weight shape " + to_string(n.weights->shape));
  }
  for (auto v : {a.stride, a.pad_begin, a.pad_end, a.pool_size}) {
    if (v < 0) throw ValidationError(n.id, "attribute values must be non-negative");
  }
}

json attrs_to_json(const Node& n) {
  json a = json::object();
  const auto& at = n.attrs;
  const Attributes def;
  switch (n.op) {
    case OpKind::Conv1D:
      a["stride"] = at.stride;
      a["pad_begin"] = at.pad_begin;
      a["pad_end"] = at.pad_end;
      break;
    case OpKind::MaxPool1D:
    case OpKind::AvgPool1D:
      a["pool_size"] = at.pool_size;
      a["stride"] = at.stride;
      break;
    case OpKind::Pad:
      a["pad_begin"] = at.pad_begin;
      a["pad_end"] = at.pad_end;
      break;
    case OpKind::Scatter:
      a["indices"] = at.indices;
      a["length"] = at.length;
      a["fill"] = at.fill;
      break;
    default:
      if (at.stride != def.stride) a["stride"] = at.stride;
      break;
  }
  if (at.in_channels) a["in_channels"] = *at.in_channels;
  if (at.out_channels) a["out_channels"] = *at.out_channels;
  if (at.activation != Activation::None) a["activation"] = to_string(at.activation);
  return a;
}

}  // namespace

Graph load_graph(const std::filesystem::path& model_json) {
  json doc;
  {
    std::ifstream in(model_json);
    if (!in) throw ValidationError("cannot open " + model_json.string());
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ValidationError(model_json.string() + ": " + e.what());
    }
  }
  try {
    if (!doc.is_object()) throw ValidationError("model root must be an object");
    if (!doc.contains("input_shape")) throw ValidationError("missing input_shape");
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
      throw ValidationError("missing nodes array");
    }

    std::map<std::string, Blob> blobs;
    if (doc.contains("blobs")) {
      for (const auto& [name, b] : doc["blobs"].items()) {
        Blob blob;
        blob.offset = b.at("offset").get<std::int64_t>();
        blob.shape = parse_shape(b.at("shape"), "blob '" + name + "' shape");
        blobs.emplace(name, std::move(blob));
      }
    }
    std::vector<char> bytes;
    if (!blobs.empty()) {
      auto file = doc.value("weights_file", std::string(kDefaultWeightsFile));
      bytes = read_file(model_json.parent_path() / file);
    }

    Graph g;
    g.input_shape = parse_shape(doc["input_shape"], "input_shape");
    std::string prev = "input";
    for (const auto& jn : doc["nodes"]) {
      if (!jn.is_object() || !jn.contains("id") || !jn.contains("op")) {
        throw ValidationError("every node needs 'id' and 'op'");
      }
      Node n;
      n.id = jn["id"].get<std::string>();
      for (const auto& [key, _] : jn.items()) {
        if (!kNodeKeys.count(key)) {
          throw ValidationError(n.id, "unknown node field '" + key + "'");
        }
      }
      auto op_name = jn["op"].get<std::string>();
      auto op = parse_op_kind(op_name);
      if (!op) throw ValidationError(n.id, "unsupported op_kind '" + op_name + "'");
      n.op = *op;
      if (jn.contains("input")) {
        const auto& src = jn["input"];
        if (src.is_array() && src.size() != 1) {
          throw ValidationError(n.id, "non-linear topology: node has " +
                                          std::to_string(src.size()) + " inputs");
        }
        auto name = src.is_array() ? src[0].get<std::string>() : src.get<std::string>();
        if (name != prev) {
          throw ValidationError(n.id, "non-linear topology: consumes '" + name +
                                          "' but the chain predecessor is '" + prev +
                                          "'");
        }
      }
      if (jn.contains("weights")) {
        n.weights = read_blob(n.id, jn["weights"].get<std::string>(), blobs, bytes);
      }
      if (jn.contains("bias")) {
        n.bias = read_blob(n.id, jn["bias"].get<std::string>(), blobs, bytes);
      }
      if (jn.contains("attrs")) parse_attrs(n, jn["attrs"]);
      prev = n.id;
      g.nodes.push_back(std::move(n));
    }
    return validate(std::move(g));
  } catch (const json::exception& e) {
    throw ValidationError(model_json.string() + ": schema violation: " + e.what());
  }
}

std::filesystem::path save_graph(const Graph& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json doc;
  doc["input_shape"] = g.input_shape;
  doc["weights_file"] = kDefaultWeightsFile;
  json blobs = json::object();
  json nodes = json::array();
  std::string bytes;
  std::set<std::string> used;

  auto add_blob = [&](const Tensor& t, const std::string& fallback) {
    std::string name = t.name.empty() || used.count(t.name) ? fallback : t.name;
    while (used.count(name)) name += "_";
    used.insert(name);
    blobs[name] = {{"offset", bytes.size()}, {"shape", t.shape}};
    for (float v : t.data) store_le_float(bytes, v);
    return name;
  };

  for (const auto& n : g.nodes) {
    json jn;
    jn["id"] = n.id;
    jn["op"] = to_string(n.op);
    auto attrs = attrs_to_json(n);
    if (!attrs.empty()) jn["attrs"] = attrs;
    if (n.weights) jn["weights"] = add_blob(*n.weights, n.id + ".weight");
    if (n.bias) jn["bias"] = add_blob(*n.bias, n.id + ".bias");
    nodes.push_back(std::move(jn));
  }
  doc["blobs"] = blobs;
  doc["nodes"] = nodes;

  auto json_path = dir / "model.json";
  {
    std::ofstream out(json_path);
    if (!out) throw PipelineError("cannot write " + json_path.string());
    out << doc.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / kDefaultWeightsFile, std::ios::binary);
    if (!out) throw PipelineError("cannot write weights to " + dir.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  return json_path;
}

std::string shape_summary(const Graph& g) {
  std::ostringstream os;
  os << "input " << to_string(g.input_shape) << '\n';
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    os << "  " << n.id << " " << to_string(n.op);
    if (n.attrs.activation != Activation::None) {
      os << "+" << to_string(n.attrs.activation);
    }
    if (g.has_shapes()) os << " -> " << to_string(g.edge_shapes[i + 1]);
    os << '\n';
  }
  os << "output " << to_string(g.output_shape()) << '\n';
  return os.str();
}

}  // namespace optc
