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

#include "sparsekit/stats.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sparsekit/errors.hpp"
#include "sparsekit/kernels.hpp"

namespace sparsekit {

namespace {

void require_non_empty(const LayerTensor& layer) {
  if (layer.data.empty()) throw ValidationError(fmt::format("layer '{}' is empty", layer.name));
}

}  // namespace

LayerStats layer_stats(const LayerTensor& layer) {
  require_non_empty(layer);
  const auto mm = kernels::omp::minmax(layer.values());
  LayerStats s;
  s.name = layer.name;
  s.count = layer.size();
  s.min = mm.min;
  s.max = mm.max;
  s.span = static_cast<double>(mm.max) - static_cast<double>(mm.min);
  s.zero_count = kernels::omp::count_zeros(layer.values());
  return s;
}

MinSpan min_span(const Model& model) {
  if (model.layers.empty()) throw ValidationError("model has no layers");
  MinSpan best;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const double span = layer_stats(model.layers[i]).span;
    if (i == 0 || span < best.span) best = {i + 1, span};
  }
  return best;
}

Histogram weight_histogram(const LayerTensor& layer, std::size_t bins) {
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  require_non_empty(layer);
  const auto mm = kernels::omp::minmax(layer.values());
  Histogram h;
  h.bin_count = bins;
  h.lo = mm.min;
  h.hi = mm.max;
  h.counts = kernels::omp::histogram(layer.values(), h.lo, h.hi, bins);
  return h;
}

double magnitude_percentile(const LayerTensor& layer, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw ValidationError(fmt::format("percentile fraction {} outside [0, 1]", delta));
  }
  require_non_empty(layer);
  const auto n = layer.size();
  const auto k = static_cast<std::size_t>(std::floor(delta * static_cast<double>(n)));
  if (k == 0) return kNoOpThreshold;
  return kernels::omp::kth_magnitude(layer.values(), std::min(k, n));
}

}  // namespace sparsekit
