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

#include "sparsekit/report_io.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "sparsekit/errors.hpp"

namespace sparsekit {

using nlohmann::json;

namespace {

json params_to_json(const PlanParams& params) {
  if (const auto* f = std::get_if<FlatParams>(&params)) return json{{"delta", f->delta}};
  if (const auto* t = std::get_if<TriangularParams>(&params)) {
    return json{{"delta_conv", t->delta_conv},
                {"delta_fc", t->delta_fc},
                {"mode", std::string(to_string(t->mode))}};
  }
  const auto& r = std::get<RelativeParams>(params);
  return json{{"deltas", r.deltas}, {"mode", std::string(to_string(r.mode))}};
}

json compression_json(double factor) {
  if (std::isinf(factor)) return "inf";
  return std::stod(format_compression(factor));
}

}  // namespace

std::string plan_to_json(const SparsifyPlan& plan, const Model& model) {
  json names = json::array();
  for (const auto& l : model.layers) names.push_back(l.name);
  json j{{"method", std::string(to_string(plan.method()))},
         {"params", params_to_json(plan.params)},
         {"layers", names},
         {"thresholds", plan.thresholds}};
  return j.dump(2);
}

SparsifyPlan plan_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    const auto method = parse_method(j.at("method").get<std::string>());
    const auto& p = j.at("params");
    SparsifyPlan plan;
    switch (method) {
      case Method::Flat:
        plan.params = FlatParams{p.at("delta").get<double>()};
        break;
      case Method::Triangular:
        plan.params = TriangularParams{p.at("delta_conv").get<double>(),
                                       p.at("delta_fc").get<double>(),
                                       parse_triangular_mode(p.at("mode").get<std::string>())};
        break;
      case Method::Relative:
        plan.params = RelativeParams{p.at("deltas").get<std::vector<double>>(),
                                     parse_relative_mode(p.at("mode").get<std::string>())};
        break;
    }
    plan.thresholds = j.at("thresholds").get<std::vector<double>>();
    return plan;
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("plan: {}", e.what()));
  }
}

std::string report_to_json(const SparsityReport& report) {
  json layers = json::array();
  for (const auto& l : report.per_layer) {
    layers.push_back(
        {{"name", l.name}, {"weights", l.weight_count}, {"zeros", l.zero_count}, {"sparsity", l.ratio}});
  }
  json j{{"layers", layers},
         {"model_zero_count", report.model_zero_count},
         {"model_weight_count", report.model_weight_count},
         {"model_sparsity", report.model_ratio},
         {"compression_factor", compression_json(report.compression_factor)}};
  return j.dump(2);
}

std::string report_to_csv(const SparsityReport& report) {
  std::string out = "layer,weights,zeros,sparsity\n";
  for (const auto& l : report.per_layer) {
    out += fmt::format("{},{},{},{}\n", l.name, l.weight_count, l.zero_count, l.ratio);
  }
  out += fmt::format("model,{},{},{}\n", report.model_weight_count, report.model_zero_count,
                     report.model_ratio);
  return out;
}

std::string stats_to_json(const Model& model, std::size_t bins) {
  json layers = json::array();
  for (const auto& layer : model.layers) {
    const auto s = layer_stats(layer);
    const auto h = weight_histogram(layer, bins);
    layers.push_back({{"name", s.name},
                      {"kind", std::string(to_string(layer.kind))},
                      {"shape", layer.shape},
                      {"count", s.count},
                      {"min", s.min},
                      {"max", s.max},
                      {"span", s.span},
                      {"zero_count", s.zero_count},
                      {"histogram", {{"bins", h.bin_count}, {"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}}}});
  }
  const auto ms = min_span(model);
  json j{{"layers", layers},
         {"min_span", {{"layer", ms.layer}, {"name", model.layers[ms.layer - 1].name}, {"span", ms.span}}}};
  return j.dump(2);
}

std::string stats_to_csv(const Model& model) {
  std::string out = "layer,kind,count,min,max,span,zero_count\n";
  for (const auto& layer : model.layers) {
    const auto s = layer_stats(layer);
    out += fmt::format("{},{},{},{},{},{},{}\n", s.name, to_string(layer.kind), s.count, s.min,
                       s.max, s.span, s.zero_count);
  }
  return out;
}

std::string histograms_to_csv(const Model& model, std::size_t bins) {
  std::string out = "layer,bin,lo,hi,count\n";
  for (const auto& layer : model.layers) {
    const auto h = weight_histogram(layer, bins);
    const double width = (h.hi - h.lo) / static_cast<double>(h.bin_count);
    for (std::size_t b = 0; b < h.bin_count; ++b) {
      const double lo = h.lo + width * static_cast<double>(b);
      const double hi = b + 1 == h.bin_count ? h.hi : lo + width;
      out += fmt::format("{},{},{},{},{}\n", layer.name, b, lo, hi, h.counts[b]);
    }
  }
  return out;
}

std::string curve_to_csv(const TradeoffCurve& curve) {
  std::string out = "method,delta,s_m,accuracy,normalized_accuracy,compression_factor\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{},{},{},{},{},{}\n", to_string(curve.method), p.delta, p.model_sparsity,
                       p.accuracy, p.normalized_accuracy, format_compression(p.compression_factor));
  }
  return out;
}

std::string finetune_to_csv(const FinetuneResult& result) {
  std::string out = "layer,params,delta,sparsified_pct\n";
  std::size_t total = 0;
  for (const auto& l : result.layers) {
    out += fmt::format("{},{},{},{:.1f}\n", l.name, l.params, l.delta, 100.0 * l.sparsity);
    total += l.params;
  }
  out += fmt::format("Total,{},,{:.1f}\n", total, 100.0 * result.model_sparsity);
  return out;
}

}  // namespace sparsekit
