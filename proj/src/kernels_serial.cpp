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

#include <algorithm>
#include <cmath>

#include "sparsekit/kernels.hpp"

namespace sparsekit::kernels::serial {

MinMax minmax(std::span<const float> xs) {
  MinMax r{xs.empty() ? 0.0f : xs[0], xs.empty() ? 0.0f : xs[0]};
  for (float x : xs) {
    r.min = std::min(r.min, x);
    r.max = std::max(r.max, x);
  }
  return r;
}

std::size_t count_zeros(std::span<const float> xs) {
  std::size_t n = 0;
  for (float x : xs) n += (x == 0.0f);
  return n;
}

void threshold(std::span<const float> in, std::span<float> out, double tau) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = threshold_one(in[i], tau);
}

std::vector<std::uint64_t> histogram(std::span<const float> xs, double lo, double hi,
                                     std::size_t bins) {
  std::vector<std::uint64_t> counts(bins, 0);
  for (float x : xs) ++counts[bin_index(x, lo, hi, bins)];
  return counts;
}

float kth_magnitude(std::span<const float> xs, std::size_t k) {
  std::vector<float> mags(xs.size());
  std::transform(xs.begin(), xs.end(), mags.begin(), [](float x) { return std::fabs(x); });
  std::sort(mags.begin(), mags.end());
  return mags[k - 1];
}

}  // namespace sparsekit::kernels::serial
