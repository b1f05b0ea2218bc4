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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparsekit/infer.hpp"
#include "sparsekit/model.hpp"
#include "sparsekit/sparsifier.hpp"

namespace sparsekit {

/// Default acceptability gate on normalized accuracy.
inline constexpr double kDefaultGate = 0.95;

/// Rounds to 12 decimals so that grid arithmetic such as 14 * 0.05 lands on
/// the same double as the literal 0.7.
double snap_fraction(double v);

/// "start:end:step" (endpoints inclusive within 1e-9) or a comma list.
/// Every value must lie in [0, 1].
std::vector<double> parse_grid(std::string_view text);

struct TradeoffPoint {
  double delta = 0.0;
  SparsifyPlan plan;
  double model_sparsity = 0.0;
  double accuracy = 0.0;
  double normalized_accuracy = 0.0;
  double compression_factor = 1.0;
};

struct TradeoffCurve {
  Method method = Method::Relative;
  double baseline_accuracy = 0.0;
  double gate = kDefaultGate;
  std::vector<TradeoffPoint> points;
  /// Highest-sparsity point that passes the gate, first one on ties.
  std::optional<std::size_t> best;
};

struct SweepOptions {
  Method method = Method::Relative;
  std::vector<double> grid;
  double gate = kDefaultGate;
  TriangularMode triangular_mode = TriangularMode::Paper;
  RelativeMode relative_mode = RelativeMode::Percentile;
  /// Triangular only: hold one end fixed instead of tying it to the grid.
  std::optional<double> fixed_delta_conv;
  std::optional<double> fixed_delta_fc;
};

/// Plan parameters a sweep uses at grid value `delta`.
PlanParams sweep_params(const SweepOptions& options, double delta);

TradeoffCurve sweep(const Model& model, const ArchManifest& manifest, const Dataset& data,
                    const SweepOptions& options);

std::optional<std::size_t> select_best(std::span<const TradeoffPoint> points, double gate);

inline constexpr double kDefaultFinetuneStep = 0.05;
inline constexpr double kDefaultFinetuneCap = 0.95;

struct FinetuneOptions {
  double base_delta = 0.7;
  double step = kDefaultFinetuneStep;
  double max_delta = kDefaultFinetuneCap;
  double gate = kDefaultGate;
};

struct LayerTuning {
  std::string name;
  std::size_t params = 0;
  double delta = 0.0;
  double sparsity = 0.0;
};

struct FinetuneResult {
  /// In network order.
  std::vector<LayerTuning> layers;
  double model_sparsity = 0.0;
  double accuracy = 0.0;
  double normalized_accuracy = 0.0;
  /// Uniform base_delta configuration, before any per-layer search.
  double baseline_model_sparsity = 0.0;
  double baseline_normalized_accuracy = 0.0;
  SparsifyPlan plan;
  Model sparsified;
};

/// Candidate deltas {0, step, 2 step, ...} up to `cap`.
std::vector<double> finetune_candidates(double step, double cap);

/// Largest layers first, ties by position.
std::vector<std::size_t> finetune_visit_order(const Model& model);

/// Per-layer coordinate search over relative-percentile deltas. Starting from
/// base_delta everywhere, each layer (in visit order) is fixed at the largest
/// candidate that keeps normalized accuracy >= gate with the other layers at
/// their current values, or 0 if none does. One pass.
FinetuneResult finetune_layers(const Model& model, const ArchManifest& manifest,
                               const Dataset& data, const FinetuneOptions& options);

}  // namespace sparsekit
