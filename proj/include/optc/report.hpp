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
#include <vector>

#include <json.hpp>

#include "optc/explorer.hpp"
#include "optc/pruner.hpp"

namespace optc {

/// Columns: j, quality, error, exec_time_us, rom_bytes, ram_bytes, flops,
/// params, pareto, then one fits_<target> column per target. A missing time
/// is an empty field.
std::string report_csv(const std::vector<ConfigRecord>& records,
                       const std::vector<MemoryTarget>& targets);

struct ParsedReport {
  std::vector<ConfigRecord> records;
  std::vector<std::string> fit_columns;  // target names in column order
  std::vector<std::vector<bool>> fits;   // per record, per fit column
};

/// Reads a CSV written by report_csv. The quality kind is not stored, so
/// records carry `metric` as their kind.
ParsedReport parse_report_csv(const std::string& text, MetricKind metric);

nlohmann::json sensitivity_to_json(const std::vector<LayerSensitivity>& sens, double threshold,
                                   MetricKind metric);
std::vector<LayerSensitivity> sensitivity_from_json(const nlohmann::json& doc);

/// Config, seed, tool version, baseline, schedule and per-record status.
nlohmann::json run_manifest(const ExplorationConfig& cfg, const ExplorationResult& res,
                            const std::vector<MemoryTarget>& targets);

MemoryTarget parse_target(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

inline constexpr const char* kToolVersion = "optc 0.1.0";

}  // namespace optc
