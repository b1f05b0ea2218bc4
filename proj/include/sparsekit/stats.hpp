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
#include <cstdint>
#include <string>
#include <vector>

#include "sparsekit/model.hpp"

namespace sparsekit {

/// Threshold that zeroes nothing: no magnitude is <= a negative value.
inline constexpr double kNoOpThreshold = -1.0;

inline constexpr std::size_t kDefaultHistogramBins = 64;

struct LayerStats {
  std::string name;
  std::size_t count = 0;
  float min = 0.0f;
  float max = 0.0f;
  /// max - min over signed weights.
  double span = 0.0;
  /// Exact zeros of either sign.
  std::size_t zero_count = 0;
};

struct Histogram {
  std::size_t bin_count = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;
};

LayerStats layer_stats(const LayerTensor& layer);

struct MinSpan {
  /// 1-based layer index.
  std::size_t layer = 0;
  double span = 0.0;
};

/// Smallest per-layer span; ties go to the lowest index.
MinSpan min_span(const Model& model);

/// Uniform bins over [min, max] of the layer.
Histogram weight_histogram(const LayerTensor& layer, std::size_t bins = kDefaultHistogramBins);

/// Nearest-rank percentile of |w|: with magnitudes sorted ascending as
/// a_1..a_n and k = floor(delta * n), returns a_k, or kNoOpThreshold when
/// k == 0.
double magnitude_percentile(const LayerTensor& layer, double delta);

}  // namespace sparsekit
