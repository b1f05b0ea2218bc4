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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "sparsekit/kernels.hpp"

namespace k = sparsekit::kernels;

TEST_CASE("bin_index edges") {
  CHECK(k::bin_index(0.0f, 0.0, 4.0, 4) == 0);
  CHECK(k::bin_index(1.0f, 0.0, 4.0, 4) == 1);
  CHECK(k::bin_index(3.999f, 0.0, 4.0, 4) == 3);
  CHECK(k::bin_index(4.0f, 0.0, 4.0, 4) == 3);  // max goes to the last bin
  CHECK(k::bin_index(7.0f, 7.0, 7.0, 5) == 0);  // zero span
}

TEST_CASE("threshold_one boundary and sign handling") {
  CHECK(k::threshold_one(1.0f, 1.0) == 0.0f);
  CHECK(k::threshold_one(-1.0f, 1.0) == 0.0f);
  CHECK(k::threshold_one(-2.0f, 1.0) == -2.0f);
  CHECK_FALSE(std::signbit(k::threshold_one(-0.5f, 1.0)));
  CHECK_FALSE(std::signbit(k::threshold_one(-0.0f, 0.0)));
  // the no-op sentinel leaves even -0.0 untouched
  CHECK(std::signbit(k::threshold_one(-0.0f, -1.0)));
}

TEST_CASE("property: OpenMP kernels agree with the serial reference") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> len(1, 5000);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<float> xs(len(rng));
    for (auto& x : xs) x = (rng() % 7 == 0) ? 0.0f : normal(rng);

    const auto a = k::serial::minmax(xs);
    const auto b = k::omp::minmax(xs);
    REQUIRE(a.min == b.min);
    REQUIRE(a.max == b.max);

    REQUIRE(k::serial::count_zeros(xs) == k::omp::count_zeros(xs));

    const double tau = std::fabs(normal(rng));
    std::vector<float> s(xs.size()), o(xs.size());
    k::serial::threshold(xs, s, tau);
    k::omp::threshold(xs, o, tau);
    REQUIRE(std::memcmp(s.data(), o.data(), xs.size() * sizeof(float)) == 0);

    const std::size_t bins = 1 + rng() % 70;
    REQUIRE(k::serial::histogram(xs, a.min, a.max, bins) ==
            k::omp::histogram(xs, a.min, a.max, bins));

    const std::size_t kth = 1 + rng() % xs.size();
    REQUIRE(k::serial::kth_magnitude(xs, kth) == k::omp::kth_magnitude(xs, kth));
  }
}

TEST_CASE("in-place threshold") {
  std::vector<float> xs{0.5f, -0.3f, 2.0f, 0.0f};
  k::omp::threshold(xs, xs, 0.5);
  CHECK(xs == std::vector<float>{0.0f, 0.0f, 2.0f, 0.0f});
}
