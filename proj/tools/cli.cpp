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

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "optc/codegen.hpp"
#include "optc/cost.hpp"
#include "optc/dataset.hpp"
#include "optc/error.hpp"
#include "optc/explorer.hpp"
#include "optc/graph_opt.hpp"
#include "optc/host.hpp"
#include "optc/model_io.hpp"
#include "optc/pruner.hpp"
#include "optc/report.hpp"

namespace optc::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string model;
  std::string dataset;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool json_out = false;
  std::string config;

  std::string metric = "auc";
  std::optional<double> threshold;
  std::string probes;
  std::string rates;
  std::string sensitivity;
  int steps = 10;
  int j = -1;
  bool approx = false;
  bool harness = false;
  int verify = 0;
  std::string cc;
  std::string cc_flags;
  int reps = 5;
  std::int64_t inner = 1;
  double min_rep_ms = 50.0;
  int jobs = 1;
  bool no_timing = false;
  std::vector<std::string> targets;
  std::string work_dir;
  std::string retrain_cmd;
  std::string in;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValidationError(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string(what) + " list is empty");
  return out;
}

MetricKind metric_of(const std::string& name) {
  auto k = parse_metric_kind(name);
  if (!k) throw ValidationError("unknown metric '" + name + "' (auc, error_rate, mse)");
  return *k;
}

std::vector<MemoryTarget> targets_of(const Options& o) {
  std::vector<MemoryTarget> t;
  for (const auto& s : o.targets) t.push_back(parse_target(s));
  return t;
}

Graph require_model(const Options& o) {
  if (o.model.empty()) throw CLI::RequiredError("--model");
  return load_graph(o.model);
}

Dataset require_dataset(const Options& o) {
  if (o.dataset.empty()) throw CLI::RequiredError("--dataset");
  return load_dataset(o.dataset);
}

std::filesystem::path require_out_dir(const Options& o) {
  if (o.out_dir.empty()) throw CLI::RequiredError("--out-dir");
  return o.out_dir;
}

HostCompiler compiler_of(const Options& o) {
  HostCompiler cc;
  if (!o.cc.empty()) {
    cc.command = o.cc;
  } else if (const char* env = std::getenv("OPTC_CC"); env && *env) {
    cc.command = env;
  }
  cc.extra_flags = o.cc_flags;
  return cc;
}

json shapes_json(const Graph& g) {
  json nodes = json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    nodes.push_back({{"id", g.nodes[i].id},
                     {"op", std::string(to_string(g.nodes[i].op))},
                     {"output_shape", g.edge_shapes[i + 1]}});
  }
  return {{"input_shape", g.input_shape}, {"output_shape", g.output_shape()}, {"nodes", nodes}};
}

json records_json(const std::vector<ConfigRecord>& records,
                  const std::vector<MemoryTarget>& targets) {
  json arr = json::array();
  for (const auto& r : records) {
    json fit = json::object();
    for (const auto& t : targets) fit[t.name] = fits(r, t);
    arr.push_back({{"j", r.j},
                   {"quality", r.quality.value},
                   {"error", r.error},
                   {"exec_time_us", std::isnan(r.exec_time_us) ? json(nullptr)
                                                               : json(r.exec_time_us)},
                   {"rom_bytes", r.rom_bytes},
                   {"ram_bytes", r.ram_bytes},
                   {"flops", r.flops},
                   {"params", r.params},
                   {"pareto", r.pareto},
                   {"valid", r.valid},
                   {"fits", fit}});
  }
  return arr;
}

void print_table(std::ostream& out, const std::vector<ConfigRecord>& records,
                 const std::vector<MemoryTarget>& targets) {
  out << std::left << std::setw(4) << "j" << std::setw(12) << "quality" << std::setw(12)
      << "error" << std::setw(14) << "time_us" << std::setw(12) << "rom" << std::setw(10)
      << "ram" << std::setw(12) << "flops" << "pareto";
  for (const auto& t : targets) out << "  " << t.name;
  out << "\n";
  for (const auto& r : records) {
    std::ostringstream time;
    if (std::isnan(r.exec_time_us)) {
      time << "-";
    } else {
      time << std::fixed << std::setprecision(3) << r.exec_time_us;
    }
    out << std::left << std::setw(4) << r.j << std::setw(12) << r.quality.value
        << std::setw(12) << r.error << std::setw(14) << time.str() << std::setw(12)
        << r.rom_bytes << std::setw(10) << r.ram_bytes << std::setw(12) << r.flops
        << (r.pareto ? "*" : " ");
    for (const auto& t : targets) {
      out << "  " << std::setw(static_cast<int>(t.name.size())) << (fits(r, t) ? "yes" : "no");
    }
    if (!r.valid) out << "  INVALID";
    out << "\n";
  }
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto g = require_model(o);
  if (o.json_out) {
    out << shapes_json(g).dump(2) << "\n";
  } else {
    out << shape_summary(g);
  }
  return 0;
}

int cmd_cost(const Options& o, std::ostream& out) {
  const auto g = require_model(o);
  const auto c = count_cost(g);
  const auto global = design_space_size(g, DesignSpaceMode::Global);
  const auto layer_wise = design_space_size(g, DesignSpaceMode::LayerWise);
  if (o.json_out) {
    out << json{{"param_count", c.param_count},
                {"param_bytes", c.param_bytes},
                {"flops", c.flops},
                {"intermediate_bytes_naive", c.intermediate_bytes_naive},
                {"rom_estimate_bytes", c.rom_estimate_bytes},
                {"ram_estimate_bytes", c.ram_estimate_bytes},
                {"widths", layer_widths(g)},
                {"design_space_global", global.str()},
                {"design_space_layer_wise", layer_wise.str()}}
               .dump(2)
        << "\n";
  } else {
    out << "params                  " << c.param_count << "\n"
        << "param_bytes             " << c.param_bytes << "\n"
        << "flops                   " << c.flops << "\n"
        << "intermediate_bytes      " << c.intermediate_bytes_naive << "\n"
        << "rom_estimate_bytes      " << c.rom_estimate_bytes << "\n"
        << "ram_estimate_bytes      " << c.ram_estimate_bytes << "\n"
        << "design_space_global     " << global.str() << "\n"
        << "design_space_layer_wise " << layer_wise.str() << "\n";
  }
  return 0;
}

int cmd_sensitivity(const Options& o, std::ostream& out) {
  const auto g = require_model(o);
  const auto d = require_dataset(o);
  const auto kind = metric_of(o.metric);
  SensitivityOptions opts;
  if (!o.probes.empty()) opts.probes = parse_list(o.probes, "probe");
  opts.direction = direction_of(kind);
  opts.threshold = o.threshold ? *o.threshold : evaluate(g, d, kind).value;
  const auto sens = sensitivity_analysis(g, d, kind, opts);
  const auto doc = sensitivity_to_json(sens, opts.threshold, kind);
  if (!o.out_dir.empty()) write_text(std::filesystem::path(o.out_dir) / "sensitivity.json",
                                     doc.dump(2) + "\n");
  if (o.json_out || o.out_dir.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    for (const auto& s : sens) {
      out << std::left << std::setw(20) << s.layer_id << " s=" << s.s << " p_max=" << s.p_max
          << "\n";
    }
  }
  return 0;
}

int cmd_prune(const Options& o, std::ostream& out) {
  const auto g = require_model(o);
  const auto dir = require_out_dir(o);
  PrunedVariant v;
  if (!o.rates.empty()) {
    if (!o.sensitivity.empty()) throw CLI::ValidationError("--rates excludes --sensitivity");
    v = prune_structural(g, parse_list(o.rates, "rate"));
  } else {
    if (o.sensitivity.empty() || o.j < 0) {
      throw CLI::ValidationError("prune needs --rates, or --sensitivity with --j");
    }
    const auto sens = sensitivity_from_json(json::parse(read_text(o.sensitivity)));
    const auto sched = make_schedule(g, sens, o.steps);
    v = gwp_variant(g, sched, o.j);
  }
  save_graph(v.graph, dir);
  if (o.json_out) {
    out << json{{"remaining", v.remaining}, {"kept_indices", v.kept_indices}}.dump(2) << "\n";
  } else {
    const auto layers = trainable_layers(g);
    for (std::size_t i = 0; i < layers.size(); ++i) {
      out << g.nodes[layers[i]].id << ": " << g.nodes[layers[i]].output_units() << " -> "
          << v.remaining[i] << "\n";
    }
  }
  return 0;
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = require_model(o);
  const auto dir = require_out_dir(o);
  PassDiagnostics diag;
  const auto opt = optimize(g, &diag);
  for (const auto& w : diag.warnings) err << "warning: " << w << "\n";
  save_graph(opt, dir);
  if (o.json_out) {
    out << json{{"nodes_before", g.nodes.size()},
                {"nodes_after", opt.nodes.size()},
                {"warnings", diag.warnings}}
               .dump(2)
        << "\n";
  } else {
    out << shape_summary(opt);
  }
  return 0;
}

int cmd_codegen(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = require_model(o);
  const auto dir = require_out_dir(o);
  PassDiagnostics diag;
  const auto opt = optimize(g, &diag);
  for (const auto& w : diag.warnings) err << "warning: " << w << "\n";
  CodegenOptions copts;
  copts.approximate_activations = o.approx;
  const auto plan = plan_memory(opt);
  const auto prog = emit(opt, plan, copts);
  write_sources(prog, dir);
  if (o.harness) {
    const HarnessParams params{prog.input_len, prog.output_len, o.reps, o.inner};
    write_text(dir / "bench.c", instantiate_harness(HarnessKind::Bench, params));
    write_text(dir / "conform.c", instantiate_harness(HarnessKind::Conform, params));
  }
  std::optional<ConformanceResult> conf;
  if (o.verify > 0) {
    conf = check_conformance(g, prog, dir, compiler_of(o), o.verify, o.seed, 1e-5, 1e-6);
  }
  const auto fp = estimate_footprint(prog);
  if (o.json_out) {
    json doc{{"input_len", prog.input_len},   {"output_len", prog.output_len},
             {"weight_bytes", prog.weight_bytes}, {"arena_bytes", prog.arena_bytes},
             {"rom_bytes", fp.rom_bytes},     {"ram_bytes", fp.ram_bytes}};
    if (conf) {
      doc["conformance"] = {{"ok", conf->ok},
                            {"max_abs_diff", conf->max_abs_diff},
                            {"max_rel_diff", conf->max_rel_diff}};
    }
    out << doc.dump(2) << "\n";
  } else {
    out << "wrote " << dir.string() << "\n"
        << "weights " << prog.weight_bytes << " B, arena " << prog.arena_bytes << " B, rom "
        << fp.rom_bytes << " B, ram " << fp.ram_bytes << " B\n";
    if (conf) {
      out << "conformance " << (conf->ok ? "ok" : "FAILED") << " (max abs diff "
          << conf->max_abs_diff << ")\n";
    }
  }
  if (conf && !conf->ok) throw PipelineError("emitted program diverges: " + conf->log);
  return 0;
}

int cmd_explore(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = require_model(o);
  const auto d = require_dataset(o);
  const auto dir = require_out_dir(o);
  const auto targets = targets_of(o);
  ExplorationConfig cfg;
  cfg.steps = o.steps;
  if (!o.probes.empty()) cfg.probes = parse_list(o.probes, "probe");
  cfg.threshold = o.threshold;
  cfg.metric = metric_of(o.metric);
  if (!o.sensitivity.empty()) {
    cfg.sensitivities = sensitivity_from_json(json::parse(read_text(o.sensitivity)));
  }
  cfg.measure = !o.no_timing;
  cfg.compiler = compiler_of(o);
  cfg.timing_reps = o.reps;
  cfg.min_rep_ms = o.min_rep_ms;
  cfg.jobs = o.jobs;
  cfg.seed = o.seed;
  cfg.codegen.approximate_activations = o.approx;
  cfg.retrain_command = o.retrain_cmd;
  cfg.work_dir = o.work_dir.empty() ? dir / "variants" : std::filesystem::path(o.work_dir);
  if (cfg.measure && !host_compiler_available(cfg.compiler)) {
    throw PipelineError("host compiler '" + cfg.compiler.command +
                        "' is not usable; pass --cc or --no-timing");
  }

  const auto res = explore(g, d, cfg);
  write_text(dir / "report.csv", report_csv(res.records, targets));
  write_text(dir / "manifest.json", run_manifest(cfg, res, targets).dump(2) + "\n");
  write_text(dir / "sensitivity.json",
             sensitivity_to_json(res.sensitivities, res.threshold, cfg.metric).dump(2) + "\n");
  for (const auto& r : res.records) {
    if (!r.valid) err << "j=" << r.j << " flagged invalid: " << r.diagnostic << "\n";
  }
  if (o.json_out) {
    out << records_json(res.records, targets).dump(2) << "\n";
  } else {
    print_table(out, res.records, targets);
  }
  return 0;
}

int cmd_report(const Options& o, std::ostream& out) {
  if (o.in.empty()) throw CLI::RequiredError("--in");
  auto rep = parse_report_csv(read_text(o.in), metric_of(o.metric));
  auto targets = targets_of(o);
  const auto records = pareto_front(rep.records);
  if (!o.out_dir.empty()) {
    write_text(std::filesystem::path(o.out_dir) / "report.csv", report_csv(records, targets));
  }
  if (o.json_out) {
    json doc{{"records", records_json(records, targets)}};
    if (!targets.empty()) {
      json rows = json::array();
      for (const auto& row : feasibility_report(records, targets)) {
        rows.push_back({{"j", row.j}, {"target", row.target}, {"fits", row.fits}});
      }
      doc["feasibility"] = rows;
    }
    out << doc.dump(2) << "\n";
  } else {
    print_table(out, records, targets);
  }
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model, "model.json path");
  sub->add_option("--dataset", o.dataset, "dataset file");
  sub->add_option("--out-dir", o.out_dir, "output directory");
  sub->add_option("--seed", o.seed, "seed for generated test inputs");
  sub->add_flag("--json", o.json_out, "machine-readable output on stdout");
  sub->add_option("--config", o.config, "JSON file supplying flag values");
}

// Turns the JSON config into command-line arguments for the options of `sub`
// that were not given explicitly.
std::vector<std::string> config_args(const std::string& path, const CLI::App* sub,
                                     const std::vector<std::string>& given) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ValidationError("config '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config '" + path + "' must be a JSON object");
  json merged = json::object();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_object()) merged[it.key()] = it.value();
  }
  if (doc.contains(sub->get_name()) && doc[sub->get_name()].is_object()) {
    for (auto it = doc[sub->get_name()].begin(); it != doc[sub->get_name()].end(); ++it) {
      merged[it.key()] = it.value();
    }
  }
  auto is_given = [&](const std::string& flag) {
    return std::any_of(given.begin(), given.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> args;
  for (auto it = merged.begin(); it != merged.end(); ++it) {
    const auto flag = "--" + it.key();
    if (flag == "--config" || is_given(flag)) continue;
    const auto* opt = sub->get_option_no_throw(flag);
    if (!opt) continue;
    const auto& v = it.value();
    auto scalar = [&](const json& x) {
      if (x.is_string()) return x.get<std::string>();
      if (x.is_array()) {
        std::string joined;
        for (const auto& e : x) joined += (joined.empty() ? "" : ",") + e.dump();
        return joined;
      }
      return x.dump();
    };
    if (opt->get_expected_max() == 0) {
      if (v.is_boolean() ? v.get<bool>() : !v.is_null()) args.push_back(flag);
    } else if (flag == "--target" && v.is_array()) {
      for (const auto& t : v) {
        args.push_back(flag);
        args.push_back(scalar(t));
      }
    } else {
      args.push_back(flag);
      args.push_back(scalar(v));
    }
  }
  return args;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"optc: prune, optimize and emit C for neural network chains", "optc"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "load a model and print inferred shapes");
  auto* cost = app.add_subcommand("cost", "parameters, FLOPs and design-space size");
  auto* sens = app.add_subcommand("sensitivity", "per-layer sensitivity analysis");
  auto* prune = app.add_subcommand("prune", "structural pruning to a new model");
  auto* opt = app.add_subcommand("optimize", "apply the graph rewrite passes");
  auto* codegen = app.add_subcommand("codegen", "emit C sources");
  auto* explore_cmd = app.add_subcommand("explore", "full exploration with report");
  auto* report = app.add_subcommand("report", "recompute Pareto flags and fit checks");
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    add_common(sub, o);
  }

  for (auto* sub : {sens, explore_cmd, report}) {
    sub->add_option("--metric", o.metric, "auc, error_rate or mse");
  }
  for (auto* sub : {sens, explore_cmd}) {
    sub->add_option("--threshold", o.threshold, "quality threshold (default: baseline)");
    sub->add_option("--probes", o.probes, "comma-separated ascending probe rates");
  }
  prune->add_option("--rates", o.rates, "comma-separated rate per trainable layer");
  for (auto* sub : {prune, explore_cmd}) {
    sub->add_option("--sensitivity", o.sensitivity, "sensitivity report JSON");
    sub->add_option("--J", o.steps, "number of pruning steps")->check(CLI::PositiveNumber);
  }
  prune->add_option("--j", o.j, "step index in [0, J]");
  for (auto* sub : {codegen, explore_cmd}) {
    sub->add_flag("--approx-activations", o.approx, "rational tanh/sigmoid approximations");
    sub->add_option("--cc", o.cc, "host C compiler command (default $OPTC_CC or 'cc -O3')");
    sub->add_option("--cc-flags", o.cc_flags, "extra host compiler flags");
    sub->add_option("--reps", o.reps, "timing repetitions");
  }
  codegen->add_flag("--harness", o.harness, "also write bench.c and conform.c");
  codegen->add_option("--inner", o.inner, "inferences per timed repetition");
  codegen->add_option("--verify", o.verify, "check N seeded inputs against the interpreter");
  explore_cmd->add_option("--min-rep-ms", o.min_rep_ms, "minimum duration of one repetition");
  explore_cmd->add_option("--jobs", o.jobs, "parallel compile jobs")->check(CLI::PositiveNumber);
  explore_cmd->add_flag("--no-timing", o.no_timing, "skip host compilation and timing");
  explore_cmd->add_option("--work-dir", o.work_dir, "directory for per-variant builds");
  explore_cmd->add_option("--retrain-cmd", o.retrain_cmd, "command run per pruned model");
  for (auto* sub : {explore_cmd, report}) {
    sub->add_option("--target", o.targets, "memory target name:rom_limit:ram_limit");
  }
  report->add_option("--in", o.in, "report.csv to read");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // Splice config-file values in after the subcommand, skipping flags the
    // command line already sets.
    auto cfg_it = std::find_if(args.begin(), args.end(), [](const std::string& a) {
      return a == "--config" || a.rfind("--config=", 0) == 0;
    });
    if (cfg_it != args.end() && !args.empty()) {
      std::string path = *cfg_it == "--config" ? (cfg_it + 1 != args.end() ? *(cfg_it + 1) : "")
                                               : cfg_it->substr(9);
      auto* sub = app.get_subcommand_no_throw(args.front());
      if (sub && !path.empty()) {
        auto extra = config_args(path, sub, args);
        args.insert(args.begin() + 1, extra.begin(), extra.end());
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*cost) return cmd_cost(o, out);
    if (*sens) return cmd_sensitivity(o, out);
    if (*prune) return cmd_prune(o, out);
    if (*opt) return cmd_optimize(o, out, err);
    if (*codegen) return cmd_codegen(o, out, err);
    if (*explore_cmd) return cmd_explore(o, out, err);
    if (*report) return cmd_report(o, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace optc::cli
