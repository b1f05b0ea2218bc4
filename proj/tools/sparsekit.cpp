// Copyright 2026 The sparsekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sparsekit command-line front end:
//   stats | sparsify | report | eval | sweep | finetune
//
// Exit codes: 0 success, 1 runtime or validation failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sparsekit/container.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/infer.hpp"
#include "sparsekit/kernels.hpp"
#include "sparsekit/report_io.hpp"
#include "sparsekit/sparsifier.hpp"
#include "sparsekit/stats.hpp"
#include "sparsekit/sweep.hpp"

namespace fs = std::filesystem;
using namespace sparsekit;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string model;
  std::string manifest;
  std::string data;
  std::string baseline;
  std::string format = "json";
  std::string out;
  std::string plan_out;
  std::string report_out;
  std::string hist_csv;
  std::string plan_in;
  std::string save_model;
  std::string method;
  std::string mode;
  std::string grid;
  std::string deltas;
  std::optional<double> delta;
  std::optional<double> delta_conv;
  std::optional<double> delta_fc;
  std::size_t bins = kDefaultHistogramBins;
  double gate = kDefaultGate;
  double base = 0.7;
  double step = kDefaultFinetuneStep;
  double cap = kDefaultFinetuneCap;
};

/// Outputs are staged and only written once the whole command has succeeded.
class Outputs {
 public:
  void add(std::string path, std::string content) {
    if (path.empty() || path == "-") {
      stdout_ += content;
    } else {
      files_.emplace_back(std::move(path), std::move(content));
    }
  }
  void commit() {
    for (const auto& [path, content] : files_) write_file_atomic(path, content);
    std::fwrite(stdout_.data(), 1, stdout_.size(), stdout);
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
  std::string stdout_;
};

void check_format(const Config& c) {
  if (c.format != "json" && c.format != "csv") {
    throw UsageError(fmt::format("--format must be json or csv, got '{}'", c.format));
  }
}

std::vector<double> parse_delta_list(const std::string& text) {
  try {
    return parse_grid(text);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
}

PlanParams params_from_flags(const Config& c, std::size_t layers) {
  const Method method = [&] {
    try {
      return parse_method(c.method);
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
  }();
  switch (method) {
    case Method::Flat:
      if (!c.delta) throw UsageError("flat method needs --delta");
      return FlatParams{*c.delta};
    case Method::Triangular: {
      const auto dc = c.delta_conv ? c.delta_conv : c.delta;
      const auto df = c.delta_fc ? c.delta_fc : c.delta;
      if (!dc || !df) throw UsageError("triangular method needs --delta-conv and --delta-fc");
      TriangularMode mode = TriangularMode::Paper;
      if (!c.mode.empty()) {
        try {
          mode = parse_triangular_mode(c.mode);
        } catch (const ValidationError& e) {
          throw UsageError(e.what());
        }
      }
      return TriangularParams{*dc, *df, mode};
    }
    case Method::Relative: {
      RelativeMode mode = RelativeMode::Percentile;
      if (!c.mode.empty()) {
        try {
          mode = parse_relative_mode(c.mode);
        } catch (const ValidationError& e) {
          throw UsageError(e.what());
        }
      }
      if (!c.deltas.empty()) {
        auto ds = parse_delta_list(c.deltas);
        if (ds.size() != layers && ds.size() != 1) {
          throw UsageError(fmt::format("--deltas has {} values for {} layers", ds.size(), layers));
        }
        return RelativeParams{std::move(ds), mode};
      }
      if (!c.delta) throw UsageError("relative method needs --delta or --deltas");
      return RelativeParams{{*c.delta}, mode};
    }
  }
  throw UsageError("unknown method");
}

int cmd_stats(const Config& c) {
  check_format(c);
  const Model model = read_model(c.model);
  Outputs out;
  out.add(c.out, c.format == "json" ? stats_to_json(model, c.bins) + "\n" : stats_to_csv(model));
  if (!c.hist_csv.empty()) out.add(c.hist_csv, histograms_to_csv(model, c.bins));
  out.commit();
  return 0;
}

std::string render_report(const Config& c, const SparsityReport& r) {
  return c.format == "json" ? report_to_json(r) + "\n" : report_to_csv(r);
}

int cmd_sparsify(const Config& c) {
  check_format(c);
  if (c.plan_in.empty() && c.method.empty()) throw UsageError("sparsify needs --method or --plan");
  const Model model = read_model(c.model);

  SparsifyPlan plan;
  if (!c.plan_in.empty()) {
    plan = plan_from_json(read_file_bytes(c.plan_in));
  } else {
    plan = make_plan(model, params_from_flags(c, model.layers.size()));
  }
  const Model sparse = apply_plan(model, plan);
  const auto report = sparsity_report(sparse);

  Outputs out;
  out.add(c.out, serialize_model(sparse));
  out.add(c.plan_out.empty() ? c.out + ".plan.json" : c.plan_out, plan_to_json(plan, model) + "\n");
  out.add(c.report_out, render_report(c, report));
  out.commit();
  return 0;
}

int cmd_report(const Config& c) {
  check_format(c);
  Outputs out;
  out.add(c.out, render_report(c, sparsity_report(read_model(c.model))));
  out.commit();
  return 0;
}

int cmd_eval(const Config& c) {
  check_format(c);
  const Model model = read_model(c.model);
  const auto manifest = read_manifest(c.manifest);
  const auto data = read_dataset(c.data);
  const double acc = evaluate(model, manifest, data);
  const double base = c.baseline.empty() ? acc : evaluate(read_model(c.baseline), manifest, data);
  const double norm = normalized_accuracy(acc, base);
  const auto report = sparsity_report(model);

  Outputs out;
  if (c.format == "json") {
    out.add(c.out, fmt::format("{{\n  \"accuracy\": {},\n  \"baseline_accuracy\": {},\n"
                               "  \"normalized_accuracy\": {},\n  \"model_sparsity\": {},\n"
                               "  \"samples\": {}\n}}\n",
                               acc, base, norm, report.model_ratio, data.size()));
  } else {
    out.add(c.out, fmt::format("accuracy,baseline_accuracy,normalized_accuracy,s_m,samples\n"
                               "{},{},{},{},{}\n",
                               acc, base, norm, report.model_ratio, data.size()));
  }
  out.commit();
  return 0;
}

int cmd_sweep(const Config& c) {
  SweepOptions opt;
  try {
    opt.method = parse_method(c.method);
    if (!c.mode.empty()) {
      if (opt.method == Method::Triangular) opt.triangular_mode = parse_triangular_mode(c.mode);
      if (opt.method == Method::Relative) opt.relative_mode = parse_relative_mode(c.mode);
    }
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  opt.grid = parse_delta_list(c.grid);
  opt.gate = c.gate;
  opt.fixed_delta_conv = c.delta_conv;
  opt.fixed_delta_fc = c.delta_fc;

  const Model model = read_model(c.model);
  const auto manifest = read_manifest(c.manifest);
  const auto data = read_dataset(c.data);
  const auto curve = sweep(model, manifest, data, opt);

  Outputs out;
  out.add(c.out, curve_to_csv(curve));
  out.commit();
  if (curve.best) {
    const auto& p = curve.points[*curve.best];
    std::cerr << fmt::format("best under gate {}: delta={} s_m={} normalized_accuracy={}\n",
                             curve.gate, p.delta, p.model_sparsity, p.normalized_accuracy);
  } else {
    std::cerr << fmt::format("no grid point passes gate {}\n", curve.gate);
  }
  return 0;
}

int cmd_finetune(const Config& c) {
  FinetuneOptions opt;
  opt.base_delta = c.base;
  opt.step = c.step;
  opt.max_delta = c.cap;
  opt.gate = c.gate;

  const Model model = read_model(c.model);
  const auto manifest = read_manifest(c.manifest);
  const auto data = read_dataset(c.data);
  const auto result = finetune_layers(model, manifest, data, opt);

  Outputs out;
  out.add(c.out, finetune_to_csv(result));
  if (!c.save_model.empty()) {
    out.add(c.save_model, serialize_model(result.sparsified));
    out.add(c.plan_out.empty() ? c.save_model + ".plan.json" : c.plan_out,
            plan_to_json(result.plan, model) + "\n");
  }
  out.commit();
  std::cerr << fmt::format(
      "base s_m={} -> tuned s_m={} (normalized accuracy {}, gate {})\n",
      result.baseline_model_sparsity, result.model_sparsity, result.normalized_accuracy, opt.gate);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();

  Config c;
  CLI::App app{"sparsekit: retraining-free weight sparsification"};
  app.require_subcommand(1);

  auto add_model = [&](CLI::App* s) {
    s->add_option("-m,--model", c.model, "SPWT model file")->required()->check(CLI::ExistingFile);
  };
  auto add_eval_inputs = [&](CLI::App* s) {
    s->add_option("--manifest", c.manifest, "architecture manifest (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    s->add_option("--data", c.data, "SPDS dataset")->required()->check(CLI::ExistingFile);
  };
  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  const auto unit = CLI::Range(0.0, 1.0);

  auto* stats = app.add_subcommand("stats", "per-layer statistics and histograms");
  add_model(stats);
  add_format(stats);
  stats->add_option("--bins", c.bins, "histogram bins")->check(CLI::PositiveNumber);
  stats->add_option("-o,--out", c.out, "output file (default stdout)");
  stats->add_option("--hist-csv", c.hist_csv, "also write histograms in long CSV form");

  auto* sparsify = app.add_subcommand("sparsify", "threshold a model and save it");
  add_model(sparsify);
  add_format(sparsify);
  sparsify->add_option("--method", c.method, "flat, triangular or relative")
      ->check(CLI::IsMember({"flat", "triangular", "relative"}));
  sparsify->add_option("--delta", c.delta, "delta (flat, relative; both ends for triangular)")
      ->check(unit);
  sparsify->add_option("--delta-conv", c.delta_conv, "triangular: first-layer fraction")->check(unit);
  sparsify->add_option("--delta-fc", c.delta_fc, "triangular: last-layer fraction")->check(unit);
  sparsify->add_option("--deltas", c.deltas, "relative: comma-separated per-layer deltas");
  sparsify->add_option("--mode", c.mode, "paper|interpolated (triangular), percentile|span (relative)");
  sparsify->add_option("--plan", c.plan_in, "apply a saved plan JSON instead of --method")
      ->check(CLI::ExistingFile);
  sparsify->add_option("-o,--out", c.out, "output SPWT file")->required();
  sparsify->add_option("--plan-out", c.plan_out, "plan JSON path (default <out>.plan.json)");
  sparsify->add_option("--report-out", c.report_out, "report path (default stdout)");

  auto* report = app.add_subcommand("report", "sparsity report of a model");
  add_model(report);
  add_format(report);
  report->add_option("-o,--out", c.out, "output file (default stdout)");

  auto* eval = app.add_subcommand("eval", "top-1 accuracy on a dataset");
  add_model(eval);
  add_eval_inputs(eval);
  add_format(eval);
  eval->add_option("--baseline", c.baseline, "unsparsified model to normalize against")
      ->check(CLI::ExistingFile);
  eval->add_option("-o,--out", c.out, "output file (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "sparsity/accuracy trade-off over a delta grid");
  add_model(sweep_cmd);
  add_eval_inputs(sweep_cmd);
  sweep_cmd->add_option("--method", c.method, "flat, triangular or relative")
      ->required()
      ->check(CLI::IsMember({"flat", "triangular", "relative"}));
  sweep_cmd->add_option("--grid", c.grid, "start:end:step or comma list")->required();
  sweep_cmd->add_option("--mode", c.mode, "method mode");
  sweep_cmd->add_option("--gate", c.gate, "normalized accuracy gate")->check(unit);
  sweep_cmd->add_option("--delta-conv", c.delta_conv, "triangular: hold first-layer fraction")
      ->check(unit);
  sweep_cmd->add_option("--delta-fc", c.delta_fc, "triangular: hold last-layer fraction")
      ->check(unit);
  sweep_cmd->add_option("-o,--out", c.out, "CSV output (default stdout)");

  auto* finetune = app.add_subcommand("finetune", "per-layer relative delta search");
  add_model(finetune);
  add_eval_inputs(finetune);
  finetune->add_option("--base", c.base, "starting per-layer delta")->required()->check(unit);
  finetune->add_option("--step", c.step, "candidate grid step")
      ->check(CLI::Range(0.0, 1.0) & CLI::PositiveNumber);
  finetune->add_option("--cap", c.cap, "largest candidate delta")->check(unit);
  finetune->add_option("--gate", c.gate, "normalized accuracy gate")->check(unit);
  finetune->add_option("-o,--out", c.out, "CSV output (default stdout)");
  finetune->add_option("--save-model", c.save_model, "write the tuned model here");
  finetune->add_option("--plan-out", c.plan_out, "plan JSON path (default <save-model>.plan.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (stats->parsed()) return cmd_stats(c);
    if (sparsify->parsed()) return cmd_sparsify(c);
    if (report->parsed()) return cmd_report(c);
    if (eval->parsed()) return cmd_eval(c);
    if (sweep_cmd->parsed()) return cmd_sweep(c);
    if (finetune->parsed()) return cmd_finetune(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
