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

#include "optc/host.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "optc/error.hpp"

namespace optc {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs `cmd` through the shell with stdout+stderr captured into `log`.
bool run_logged(const std::string& cmd, const std::filesystem::path& log, std::string& text) {
  const int rc = std::system((cmd + " > " + shell_quote(log.string()) + " 2>&1").c_str());
  text += "$ " + cmd + "\n" + slurp(log);
  return rc == 0;
}

std::string compile_prefix(const HostCompiler& cc) {
  return cc.extra_flags.empty() ? cc.command : cc.command + " " + cc.extra_flags;
}

}  // namespace

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

bool host_compiler_available(const HostCompiler& cc) {
  const std::string cmd = cc.command + " --version > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

BuildResult compile_model_objects(const HostCompiler& cc, const std::filesystem::path& dir) {
  BuildResult r;
  const auto d = std::filesystem::absolute(dir);
  const auto log = d / "compile.log";
  r.ok = true;
  for (const char* unit : {"nn", "weights"}) {
    const auto src = d / (std::string(unit) + ".c");
    const auto obj = d / (std::string(unit) + ".o");
    const std::string cmd = compile_prefix(cc) + " -c " + shell_quote(src.string()) + " -o " +
                            shell_quote(obj.string());
    if (!run_logged(cmd, log, r.log)) {
      r.ok = false;
      break;
    }
  }
  return r;
}

BuildResult build_harness(const HostCompiler& cc, const std::filesystem::path& dir,
                          HarnessKind kind, const HarnessParams& params) {
  BuildResult r;
  const auto d = std::filesystem::absolute(dir);
  const std::string name = kind == HarnessKind::Bench ? "bench" : "conform";
  {
    std::ofstream out(d / (name + ".c"));
    if (!out) throw PipelineError("cannot write harness into " + d.string());
    out << instantiate_harness(kind, params);
  }
  r.executable = d / name;
  const std::string cmd = compile_prefix(cc) + " -I" + shell_quote(d.string()) + " " +
                          shell_quote((d / (name + ".c")).string()) + " " +
                          shell_quote((d / "nn.o").string()) + " " +
                          shell_quote((d / "weights.o").string()) + " -o " +
                          shell_quote(r.executable.string()) + " -lm";
  r.ok = run_logged(cmd, d / (name + ".log"), r.log);
  return r;
}

std::vector<double> run_bench(const std::filesystem::path& exe) {
  const auto out_file = std::filesystem::path(exe.string() + ".out");
  const std::string cmd = shell_quote(exe.string()) + " > " + shell_quote(out_file.string());
  if (std::system(cmd.c_str()) != 0) throw PipelineError("bench run failed: " + exe.string());
  std::istringstream in(slurp(out_file));
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != line.size()) throw PipelineError("unparseable bench line: " + line);
    values.push_back(v);
  }
  return values;
}

std::vector<float> run_conform(const std::filesystem::path& exe, std::span<const float> inputs,
                               std::size_t output_len) {
  const auto in_file = std::filesystem::path(exe.string() + ".in");
  const auto out_file = std::filesystem::path(exe.string() + ".out");
  {
    std::ofstream out(in_file, std::ios::binary);
    out.write(reinterpret_cast<const char*>(inputs.data()),
              static_cast<std::streamsize>(inputs.size_bytes()));
  }
  const std::string cmd = shell_quote(exe.string()) + " < " + shell_quote(in_file.string()) +
                          " > " + shell_quote(out_file.string());
  if (std::system(cmd.c_str()) != 0) throw PipelineError("conform run failed: " + exe.string());
  const auto bytes = slurp(out_file);
  if (bytes.size() % (4 * output_len) != 0) {
    throw PipelineError("conform output is not a whole number of output vectors");
  }
  std::vector<float> values(bytes.size() / 4);
  std::memcpy(values.data(), bytes.data(), bytes.size());
  return values;
}

}  // namespace optc
