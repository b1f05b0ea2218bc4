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
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sparsekit/kernels.hpp"

namespace sparsekit::kernels {

namespace omp {

MinMax minmax(std::span<const float> xs) {
  if (xs.empty()) return {0.0f, 0.0f};
  float lo = xs[0];
  float hi = xs[0];
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  const float* p = xs.data();
#pragma omp parallel for reduction(min : lo) reduction(max : hi) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    lo = std::min(lo, p[i]);
    hi = std::max(hi, p[i]);
  }
  return {lo, hi};
}

std::size_t count_zeros(std::span<const float> xs) {
  std::size_t zeros = 0;
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  const float* p = xs.data();
#pragma omp parallel for reduction(+ : zeros) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) zeros += (p[i] == 0.0f);
  return zeros;
}

void threshold(std::span<const float> in, std::span<float> out, double tau) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
  const float* src = in.data();
  float* dst = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = threshold_one(src[i], tau);
}

std::vector<std::uint64_t> histogram(std::span<const float> xs, double lo, double hi,
                                     std::size_t bins) {
  std::vector<std::uint64_t> counts(bins, 0);
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  const float* p = xs.data();
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) ++local[bin_index(p[i], lo, hi, bins)];
#pragma omp critical(sparsekit_histogram_merge)
    for (std::size_t b = 0; b < bins; ++b) counts[b] += local[b];
  }
  return counts;
}

float kth_magnitude(std::span<const float> xs, std::size_t k) {
  std::vector<float> mags(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  const float* p = xs.data();
  float* m = mags.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) m[i] = std::fabs(p[i]);
  auto kth = mags.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(mags.begin(), kth, mags.end());
  return *kth;
}

}  // namespace omp

int configure_threads_from_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("SPARSEKIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // unparsable values fall back to the OpenMP default
    }
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sparsekit::kernels
