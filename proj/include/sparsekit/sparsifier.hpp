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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sparsekit/model.hpp"

namespace sparsekit {

enum class Method { Flat, Triangular, Relative };

/// How interior layers are filled between the first and last threshold.
/// Paper: tau_l = (tau_max - tau_min) / L * (l - 2), taken literally, which
/// gives 0 at l = 2 and never reaches tau_max. Interpolated: linear ramp
/// from tau_min at layer 1 to tau_max at layer L.
enum class TriangularMode { Paper, Interpolated };

/// Percentile: tau_l is the delta_l magnitude percentile of the layer.
/// Span: tau_l = (max - min) * delta_l.
enum class RelativeMode { Percentile, Span };

std::string_view to_string(Method m);
std::string_view to_string(TriangularMode m);
std::string_view to_string(RelativeMode m);
Method parse_method(std::string_view s);
TriangularMode parse_triangular_mode(std::string_view s);
RelativeMode parse_relative_mode(std::string_view s);

struct FlatParams {
  double delta = 0.0;
};

struct TriangularParams {
  double delta_conv = 0.0;
  double delta_fc = 0.0;
  TriangularMode mode = TriangularMode::Paper;
};

struct RelativeParams {
  /// One entry is broadcast to every layer; otherwise one per layer.
  std::vector<double> deltas;
  RelativeMode mode = RelativeMode::Percentile;
};

using PlanParams = std::variant<FlatParams, TriangularParams, RelativeParams>;

/// Method, its parameters, and the resolved threshold vector T (one tau per
/// layer, in layer order).
struct SparsifyPlan {
  PlanParams params;
  std::vector<double> thresholds;

  Method method() const;
};

SparsifyPlan plan_flat(const Model& model, double delta);

SparsifyPlan plan_triangular(const Model& model, double delta_conv, double delta_fc,
                             TriangularMode mode = TriangularMode::Paper);

SparsifyPlan plan_relative(const Model& model, double delta,
                           RelativeMode mode = RelativeMode::Percentile);
SparsifyPlan plan_relative(const Model& model, std::span<const double> deltas,
                           RelativeMode mode = RelativeMode::Percentile);

/// Resolves thresholds for any parameter set.
SparsifyPlan make_plan(const Model& model, const PlanParams& params);

/// Threshold ramp for `layers` layers given the two end thresholds.
std::vector<double> triangular_thresholds(std::size_t layers, double tau_min, double tau_max,
                                          TriangularMode mode);

/// Zeroes every weight with |w| <= tau_l (writing +0.0) and copies the rest
/// bit for bit. Returns a new model.
Model apply_plan(const Model& model, const SparsifyPlan& plan);

/// Same rule, in place, for callers that sparsify a freshly loaded model
/// right before running it.
void apply_plan_in_place(Model& model, const SparsifyPlan& plan);

struct LayerSparsity {
  std::string name;
  std::size_t weight_count = 0;
  std::size_t zero_count = 0;
  double ratio = 0.0;
};

struct SparsityReport {
  std::vector<LayerSparsity> per_layer;
  std::size_t model_zero_count = 0;
  std::size_t model_weight_count = 0;
  double model_ratio = 0.0;
  /// 1 / (1 - model_ratio); +inf when every weight is zero.
  double compression_factor = 1.0;
};

/// Counts exact zeros of every layer.
SparsityReport sparsity_report(const Model& model);

struct LayerCount {
  std::string name;
  std::size_t weight_count = 0;
  std::size_t zero_count = 0;
};

/// Builds a report from raw per-layer counts.
SparsityReport aggregate_sparsity(std::span<const LayerCount> layers);

/// 1 / (1 - s) for s in [0, 1); +inf for s == 1.
double compression_factor(double model_sparsity);

/// Three significant digits ("3.70", "12.5"), "inf" for infinity.
std::string format_compression(double factor);

}  // namespace sparsekit
