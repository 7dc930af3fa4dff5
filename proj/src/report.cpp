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

#include "optc/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "optc/error.hpp"

namespace optc {
namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::int64_t parse_size(const std::string& text) {
  if (text.empty() || text == "-") return -1;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("bad size '" + text + "'");
  }
  const auto suffix = text.substr(used);
  double scale = 1;
  if (suffix == "k" || suffix == "K" || suffix == "kB" || suffix == "KiB") {
    scale = 1024;
  } else if (suffix == "M" || suffix == "MB" || suffix == "MiB") {
    scale = 1024.0 * 1024.0;
  } else if (!suffix.empty() && suffix != "B") {
    throw ValidationError("bad size suffix in '" + text + "'");
  }
  if (!(v >= 0)) throw ValidationError("negative size '" + text + "'");
  return static_cast<std::int64_t>(std::llround(v * scale));
}

}  // namespace

std::string report_csv(const std::vector<ConfigRecord>& records,
                       const std::vector<MemoryTarget>& targets) {
  std::ostringstream out;
  out << "j,quality,error,exec_time_us,rom_bytes,ram_bytes,flops,params,pareto";
  for (const auto& t : targets) out << ",fits_" << t.name;
  out << "\n";
  for (const auto& r : records) {
    out << r.j << ',' << fmt_double(r.quality.value) << ',' << fmt_double(r.error) << ','
        << fmt_double(r.exec_time_us) << ',' << r.rom_bytes << ',' << r.ram_bytes << ','
        << r.flops << ',' << r.params << ',' << (r.pareto ? 1 : 0);
    for (const auto& t : targets) out << ',' << (fits(r, t) ? 1 : 0);
    out << "\n";
  }
  return out.str();
}

ParsedReport parse_report_csv(const std::string& text, MetricKind metric) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("report is empty");
  const auto header = split(line, ',');
  static const std::vector<std::string> fixed{"j",        "quality",   "error",
                                              "exec_time_us", "rom_bytes", "ram_bytes",
                                              "flops",    "params",    "pareto"};
  if (header.size() < fixed.size() ||
      !std::equal(fixed.begin(), fixed.end(), header.begin())) {
    throw ValidationError("report header does not match the expected columns");
  }
  ParsedReport rep;
  for (std::size_t c = fixed.size(); c < header.size(); ++c) {
    if (header[c].rfind("fits_", 0) != 0) {
      throw ValidationError("unexpected report column '" + header[c] + "'");
    }
    rep.fit_columns.push_back(header[c].substr(5));
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) {
      throw ValidationError("report line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " fields");
    }
    try {
      ConfigRecord r;
      r.j = std::stoi(f[0]);
      r.quality.kind = metric;
      r.quality.direction = direction_of(metric);
      r.quality.value = std::stod(f[1]);
      r.error = std::stod(f[2]);
      if (!f[3].empty()) r.exec_time_us = std::stod(f[3]);
      r.rom_bytes = std::stoll(f[4]);
      r.ram_bytes = std::stoll(f[5]);
      r.flops = std::stoll(f[6]);
      r.params = std::stoll(f[7]);
      r.pareto = f[8] == "1";
      std::vector<bool> row;
      for (std::size_t c = fixed.size(); c < f.size(); ++c) row.push_back(f[c] == "1");
      rep.records.push_back(std::move(r));
      rep.fits.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ValidationError("report line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rep;
}

nlohmann::json sensitivity_to_json(const std::vector<LayerSensitivity>& sens, double threshold,
                                   MetricKind metric) {
  nlohmann::json doc;
  doc["threshold"] = threshold;
  doc["metric"] = std::string(to_string(metric));
  doc["direction"] = std::string(to_string(direction_of(metric)));
  doc["layers"] = nlohmann::json::array();
  for (const auto& s : sens) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& [p, q] : s.probe_curve) curve.push_back({p, q});
    doc["layers"].push_back(
        {{"layer_id", s.layer_id}, {"s", s.s}, {"p_max", s.p_max}, {"probe_curve", curve}});
  }
  return doc;
}

std::vector<LayerSensitivity> sensitivity_from_json(const nlohmann::json& doc) {
  std::vector<LayerSensitivity> out;
  try {
    for (const auto& l : doc.at("layers")) {
      LayerSensitivity s;
      s.layer_id = l.at("layer_id").get<std::string>();
      s.p_max = l.at("p_max").get<double>();
      s.s = l.contains("s") ? l.at("s").get<double>() : 1.0 - s.p_max;
      if (l.contains("probe_curve")) {
        for (const auto& pt : l.at("probe_curve")) {
          s.probe_curve.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        }
      }
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("sensitivity report: ") + e.what());
  }
  return out;
}

nlohmann::json run_manifest(const ExplorationConfig& cfg, const ExplorationResult& res,
                            const std::vector<MemoryTarget>& targets) {
  nlohmann::json m;
  m["tool_version"] = kToolVersion;
  m["seed"] = cfg.seed;
  m["config"] = {{"J", cfg.steps},
                 {"probes", cfg.probes},
                 {"threshold_mode", cfg.threshold ? "explicit" : "baseline_quality"},
                 {"metric", std::string(to_string(cfg.metric))},
                 {"direction", std::string(to_string(direction_of(cfg.metric)))},
                 {"measure", cfg.measure},
                 {"cc", cfg.compiler.command},
                 {"cc_flags", cfg.compiler.extra_flags},
                 {"timing_reps", cfg.timing_reps},
                 {"min_rep_ms", cfg.min_rep_ms},
                 {"verify_inputs", cfg.verify_inputs},
                 {"verify_rel_tol", cfg.verify_rel_tol},
                 {"verify_abs_tol", cfg.verify_abs_tol},
                 {"jobs", cfg.jobs},
                 {"approximate_activations", cfg.codegen.approximate_activations},
                 {"retrain_command", cfg.retrain_command}};
  m["baseline_quality"] = res.baseline.value;
  m["threshold"] = res.threshold;
  m["initial_rates"] = res.schedule.initial_rates;
  m["widths"] = res.schedule.widths;
  m["targets"] = nlohmann::json::array();
  for (const auto& t : targets) {
    m["targets"].push_back({{"name", t.name},
                            {"rom_limit", t.rom_limit ? nlohmann::json(*t.rom_limit) : nullptr},
                            {"ram_limit", t.ram_limit ? nlohmann::json(*t.ram_limit) : nullptr}});
  }
  m["records"] = nlohmann::json::array();
  for (const auto& r : res.records) {
    m["records"].push_back({{"j", r.j},
                            {"valid", r.valid},
                            {"diagnostic", r.diagnostic},
                            {"remaining", r.remaining},
                            {"arena_bytes", r.arena_bytes}});
  }
  return m;
}

MemoryTarget parse_target(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3 || parts[0].empty()) {
    throw ValidationError("target must look like name:rom_limit:ram_limit, got '" + text + "'");
  }
  MemoryTarget t;
  t.name = parts[0];
  if (auto rom = parse_size(parts[1]); rom >= 0) t.rom_limit = rom;
  if (auto ram = parse_size(parts[2]); ram >= 0) t.ram_limit = ram;
  return t;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PipelineError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace optc
