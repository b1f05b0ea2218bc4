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

#include "sparsekit/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sparsekit/errors.hpp"
#include "sparsekit/kernels.hpp"
#include "sparsekit/stats.hpp"

namespace sparsekit {

namespace {

void check_fraction(double v, std::string_view what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(fmt::format("{} = {} is outside [0, 1]", what, v));
  }
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Flat:
      return "flat";
    case Method::Triangular:
      return "triangular";
    case Method::Relative:
      return "relative";
  }
  return "unknown";
}

std::string_view to_string(TriangularMode m) {
  return m == TriangularMode::Paper ? "paper" : "interpolated";
}

std::string_view to_string(RelativeMode m) {
  return m == RelativeMode::Percentile ? "percentile" : "span";
}

Method parse_method(std::string_view s) {
  if (s == "flat") return Method::Flat;
  if (s == "triangular") return Method::Triangular;
  if (s == "relative") return Method::Relative;
  throw ValidationError(fmt::format("unknown method '{}'", s));
}

TriangularMode parse_triangular_mode(std::string_view s) {
  if (s == "paper") return TriangularMode::Paper;
  if (s == "interpolated") return TriangularMode::Interpolated;
  throw ValidationError(fmt::format("unknown triangular mode '{}'", s));
}

RelativeMode parse_relative_mode(std::string_view s) {
  if (s == "percentile") return RelativeMode::Percentile;
  if (s == "span") return RelativeMode::Span;
  throw ValidationError(fmt::format("unknown relative mode '{}'", s));
}

Method SparsifyPlan::method() const {
  return std::visit(overloaded{[](const FlatParams&) { return Method::Flat; },
                               [](const TriangularParams&) { return Method::Triangular; },
                               [](const RelativeParams&) { return Method::Relative; }},
                    params);
}

SparsifyPlan plan_flat(const Model& model, double delta) {
  check_fraction(delta, "delta");
  const double tau = min_span(model).span * delta;
  return {FlatParams{delta}, std::vector<double>(model.layers.size(), tau)};
}

std::vector<double> triangular_thresholds(std::size_t layers, double tau_min, double tau_max,
                                          TriangularMode mode) {
  if (layers < 2) throw ValidationError("triangular method needs at least two layers");
  if (mode == TriangularMode::Paper && tau_max < tau_min) {
    throw ValidationError(fmt::format(
        "triangular (paper mode): tau_max {} < tau_min {}; the interior rule "
        "(tau_max - tau_min) / L * (l - 2) would yield negative thresholds",
        tau_max, tau_min));
  }
  const double L = static_cast<double>(layers);
  std::vector<double> t(layers);
  t.front() = tau_min;
  t.back() = tau_max;
  for (std::size_t i = 1; i + 1 < layers; ++i) {
    const double l = static_cast<double>(i + 1);
    t[i] = mode == TriangularMode::Paper ? (tau_max - tau_min) / L * (l - 2.0)
                                         : tau_min + (tau_max - tau_min) * (l - 1.0) / (L - 1.0);
  }
  return t;
}

SparsifyPlan plan_triangular(const Model& model, double delta_conv, double delta_fc,
                             TriangularMode mode) {
  check_fraction(delta_conv, "delta_conv");
  check_fraction(delta_fc, "delta_fc");
  if (model.layers.size() < 2) throw ValidationError("triangular method needs at least two layers");
  const double tau_min = layer_stats(model.layers.front()).span * delta_conv;
  const double tau_max = layer_stats(model.layers.back()).span * delta_fc;
  return {TriangularParams{delta_conv, delta_fc, mode},
          triangular_thresholds(model.layers.size(), tau_min, tau_max, mode)};
}

SparsifyPlan plan_relative(const Model& model, double delta, RelativeMode mode) {
  const double d[] = {delta};
  return plan_relative(model, d, mode);
}

SparsifyPlan plan_relative(const Model& model, std::span<const double> deltas,
                           RelativeMode mode) {
  const auto L = model.layers.size();
  if (L == 0) throw ValidationError("model has no layers");
  if (deltas.size() != 1 && deltas.size() != L) {
    throw ValidationError(
        fmt::format("relative method: {} deltas given for {} layers", deltas.size(), L));
  }
  for (double d : deltas) check_fraction(d, "delta_l");
  std::vector<double> t(L);
  for (std::size_t i = 0; i < L; ++i) {
    const double d = deltas.size() == 1 ? deltas[0] : deltas[i];
    t[i] = mode == RelativeMode::Percentile ? magnitude_percentile(model.layers[i], d)
                                            : layer_stats(model.layers[i]).span * d;
  }
  return {RelativeParams{{deltas.begin(), deltas.end()}, mode}, std::move(t)};
}

SparsifyPlan make_plan(const Model& model, const PlanParams& params) {
  return std::visit(
      overloaded{[&](const FlatParams& p) { return plan_flat(model, p.delta); },
                 [&](const TriangularParams& p) {
                   return plan_triangular(model, p.delta_conv, p.delta_fc, p.mode);
                 },
                 [&](const RelativeParams& p) { return plan_relative(model, p.deltas, p.mode); }},
      params);
}

void apply_plan_in_place(Model& model, const SparsifyPlan& plan) {
  if (plan.thresholds.size() != model.layers.size()) {
    throw ValidationError(fmt::format("plan has {} thresholds for {} layers",
                                      plan.thresholds.size(), model.layers.size()));
  }
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    auto& data = model.layers[i].data;
    kernels::omp::threshold(data, data, plan.thresholds[i]);
  }
}

Model apply_plan(const Model& model, const SparsifyPlan& plan) {
  if (plan.thresholds.size() != model.layers.size()) {
    throw ValidationError(fmt::format("plan has {} thresholds for {} layers",
                                      plan.thresholds.size(), model.layers.size()));
  }
  Model out;
  out.layers.reserve(model.layers.size());
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& src = model.layers[i];
    LayerTensor dst{src.name, src.kind, src.shape, std::vector<float>(src.size())};
    kernels::omp::threshold(src.data, dst.data, plan.thresholds[i]);
    out.layers.push_back(std::move(dst));
  }
  return out;
}

double compression_factor(double model_sparsity) {
  check_fraction(model_sparsity, "model sparsity");
  if (model_sparsity == 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (1.0 - model_sparsity);
}

std::string format_compression(double factor) {
  if (std::isinf(factor)) return "inf";
  // factors are >= 1, so three significant digits means 2 - floor(log10) decimals
  const int decimals = std::max(0, 2 - static_cast<int>(std::floor(std::log10(factor))));
  return fmt::format("{:.{}f}", factor, decimals);
}

SparsityReport aggregate_sparsity(std::span<const LayerCount> layers) {
  SparsityReport r;
  for (const auto& l : layers) {
    if (l.zero_count > l.weight_count) {
      throw ValidationError(fmt::format("layer '{}': more zeros than weights", l.name));
    }
    const double ratio = l.weight_count == 0 ? 0.0
                                             : static_cast<double>(l.zero_count) /
                                                   static_cast<double>(l.weight_count);
    r.per_layer.push_back({l.name, l.weight_count, l.zero_count, ratio});
    r.model_zero_count += l.zero_count;
    r.model_weight_count += l.weight_count;
  }
  r.model_ratio = r.model_weight_count == 0 ? 0.0
                                            : static_cast<double>(r.model_zero_count) /
                                                  static_cast<double>(r.model_weight_count);
  r.compression_factor = compression_factor(r.model_ratio);
  return r;
}

SparsityReport sparsity_report(const Model& model) {
  if (model.layers.empty()) throw ValidationError("model has no layers");
  std::vector<LayerCount> counts;
  counts.reserve(model.layers.size());
  for (const auto& l : model.layers) {
    counts.push_back({l.name, l.size(), kernels::omp::count_zeros(l.values())});
  }
  return aggregate_sparsity(counts);
}

}  // namespace sparsekit
