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

#include "sparsekit/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "sparsekit/errors.hpp"

namespace sparsekit {

namespace {

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(fmt::format("grid: '{}' is not a number", s));
  }
  return v;
}

void check_fraction(double v, std::string_view what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(fmt::format("{} = {} is outside [0, 1]", what, v));
  }
}

}  // namespace

double snap_fraction(double v) { return std::round(v * 1e12) / 1e12; }

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos) {
      throw ValidationError(fmt::format("grid '{}' is not start:end:step", text));
    }
    const double start = parse_number(text.substr(0, a));
    const double end = parse_number(text.substr(a + 1, b - a - 1));
    const double step = parse_number(text.substr(b + 1));
    if (!(step > 0.0)) throw ValidationError("grid step must be positive");
    if (end < start) throw ValidationError("grid end is below its start");
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      grid.push_back(snap_fraction(start + static_cast<double>(i) * step));
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = std::min(text.find(',', pos), text.size());
      grid.push_back(parse_number(text.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  if (grid.empty()) throw ValidationError("grid is empty");
  for (double d : grid) check_fraction(d, "grid value");
  return grid;
}

PlanParams sweep_params(const SweepOptions& options, double delta) {
  switch (options.method) {
    case Method::Flat:
      return FlatParams{delta};
    case Method::Triangular:
      return TriangularParams{options.fixed_delta_conv.value_or(delta),
                              options.fixed_delta_fc.value_or(delta), options.triangular_mode};
    case Method::Relative:
      return RelativeParams{{delta}, options.relative_mode};
  }
  throw ValidationError("unknown method");
}

std::optional<std::size_t> select_best(std::span<const TradeoffPoint> points, double gate) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].normalized_accuracy < gate) continue;
    if (!best || points[i].model_sparsity > points[*best].model_sparsity) best = i;
  }
  return best;
}

TradeoffCurve sweep(const Model& model, const ArchManifest& manifest, const Dataset& data,
                    const SweepOptions& options) {
  if (options.grid.empty()) throw ValidationError("sweep grid is empty");
  for (double d : options.grid) check_fraction(d, "grid value");
  check_fraction(options.gate, "gate");

  TradeoffCurve curve;
  curve.method = options.method;
  curve.gate = options.gate;
  curve.baseline_accuracy = evaluate(model, manifest, data);
  if (!(curve.baseline_accuracy > 0.0)) {
    throw ValidationError("baseline accuracy is zero; nothing to normalize against");
  }

  // plans first so parameter errors surface before any evaluation work
  std::vector<SparsifyPlan> plans;
  plans.reserve(options.grid.size());
  for (double d : options.grid) plans.push_back(make_plan(model, sweep_params(options, d)));

  for (std::size_t i = 0; i < plans.size(); ++i) {
    const Model sparse = apply_plan(model, plans[i]);
    const auto report = sparsity_report(sparse);
    TradeoffPoint p;
    p.delta = options.grid[i];
    p.plan = std::move(plans[i]);
    p.model_sparsity = report.model_ratio;
    p.accuracy = evaluate(sparse, manifest, data);
    p.normalized_accuracy = normalized_accuracy(p.accuracy, curve.baseline_accuracy);
    p.compression_factor = report.compression_factor;
    curve.points.push_back(std::move(p));
  }
  curve.best = select_best(curve.points, options.gate);
  return curve;
}

std::vector<double> finetune_candidates(double step, double cap) {
  if (!(step > 0.0 && step < 1.0)) {
    throw ValidationError(fmt::format("fine-tune step {} outside (0, 1)", step));
  }
  check_fraction(cap, "fine-tune cap");
  std::vector<double> c;
  for (std::size_t i = 0;; ++i) {
    const double d = snap_fraction(static_cast<double>(i) * step);
    if (d > cap + 1e-12) break;
    c.push_back(d);
  }
  return c;
}

std::vector<std::size_t> finetune_visit_order(const Model& model) {
  std::vector<std::size_t> order(model.layers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.layers[a].size() > model.layers[b].size();
  });
  return order;
}

FinetuneResult finetune_layers(const Model& model, const ArchManifest& manifest,
                               const Dataset& data, const FinetuneOptions& options) {
  check_fraction(options.base_delta, "base delta");
  check_fraction(options.gate, "gate");
  const auto candidates = finetune_candidates(options.step, options.max_delta);
  model.validate();

  const double baseline_accuracy = evaluate(model, manifest, data);
  if (!(baseline_accuracy > 0.0)) {
    throw ValidationError("baseline accuracy is zero; nothing to normalize against");
  }

  struct Outcome {
    SparsifyPlan plan;
    Model sparse;
    double accuracy;
    double normalized;
  };
  auto run = [&](const std::vector<double>& deltas) {
    auto plan = plan_relative(model, deltas, RelativeMode::Percentile);
    auto sparse = apply_plan(model, plan);
    const double acc = evaluate(sparse, manifest, data);
    return Outcome{std::move(plan), std::move(sparse), acc,
                   normalized_accuracy(acc, baseline_accuracy)};
  };

  const auto L = model.layers.size();
  std::vector<double> deltas(L, options.base_delta);

  FinetuneResult result;
  {
    const auto base = run(deltas);
    result.baseline_model_sparsity = sparsity_report(base.sparse).model_ratio;
    result.baseline_normalized_accuracy = base.normalized;
  }

  for (const auto layer : finetune_visit_order(model)) {
    double chosen = 0.0;
    // descending scan: the first feasible candidate is the largest one
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
      deltas[layer] = *it;
      if (run(deltas).normalized >= options.gate) {
        chosen = *it;
        break;
      }
    }
    deltas[layer] = chosen;
  }

  auto final_run = run(deltas);
  const auto report = sparsity_report(final_run.sparse);
  for (std::size_t i = 0; i < L; ++i) {
    result.layers.push_back({model.layers[i].name, model.layers[i].size(), deltas[i],
                             report.per_layer[i].ratio});
  }
  result.model_sparsity = report.model_ratio;
  result.accuracy = final_run.accuracy;
  result.normalized_accuracy = final_run.normalized;
  result.plan = std::move(final_run.plan);
  result.sparsified = std::move(final_run.sparse);
  return result;
}

}  // namespace sparsekit
