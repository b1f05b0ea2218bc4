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

/// \file kernels.hpp
/// \brief Flat-array kernels behind stats, sparsification and metrics.
///
/// Each kernel exists twice: `serial::` is the straightforward reference the
/// tests check against, `omp::` is the OpenMP version the library uses. Both
/// must produce bit-identical results; the reductions involved (min, max,
/// integer counts) are order independent, so they do.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sparsekit::kernels {

struct MinMax {
  float min;
  float max;
};

/// Uniform bin of `x` over [lo, hi] with `bins` bins. x == hi lands in the
/// last bin; a zero-width range maps everything to bin 0.
inline std::size_t bin_index(float x, double lo, double hi, std::size_t bins) {
  if (!(hi > lo)) return 0;
  const double pos = (static_cast<double>(x) - lo) / (hi - lo) * static_cast<double>(bins);
  if (pos <= 0.0) return 0;
  const auto idx = static_cast<std::size_t>(pos);
  return idx >= bins ? bins - 1 : idx;
}

/// Zeroing rule: |w| <= tau becomes +0.0, anything else is copied verbatim.
inline float threshold_one(float w, double tau) {
  const float mag = w < 0.0f ? -w : w;
  return static_cast<double>(mag) <= tau ? 0.0f : w;
}

namespace serial {
MinMax minmax(std::span<const float> xs);
std::size_t count_zeros(std::span<const float> xs);
void threshold(std::span<const float> in, std::span<float> out, double tau);
std::vector<std::uint64_t> histogram(std::span<const float> xs, double lo, double hi,
                                     std::size_t bins);
/// k-th smallest magnitude, 1-indexed (1 <= k <= n). Full sort.
float kth_magnitude(std::span<const float> xs, std::size_t k);
}  // namespace serial

namespace omp {
MinMax minmax(std::span<const float> xs);
std::size_t count_zeros(std::span<const float> xs);
void threshold(std::span<const float> in, std::span<float> out, double tau);
std::vector<std::uint64_t> histogram(std::span<const float> xs, double lo, double hi,
                                     std::size_t bins);
/// Selection instead of a sort.
float kth_magnitude(std::span<const float> xs, std::size_t k);
}  // namespace omp

/// Applies SPARSEKIT_THREADS (0 or unset = OpenMP default). Returns the
/// resulting maximum thread count.
int configure_threads_from_env();

}  // namespace sparsekit::kernels
