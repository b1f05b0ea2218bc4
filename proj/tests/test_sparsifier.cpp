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

#include <cmath>

#include "sparsekit/errors.hpp"
#include "sparsekit/report_io.hpp"
#include "sparsekit/sparsifier.hpp"
#include "sparsekit/stats.hpp"
#include "test_support.hpp"

using namespace sparsekit;
using namespace testing_support;

namespace {

LayerTensor fc(std::vector<float> data, std::string name = "l") {
  const auto n = static_cast<std::uint32_t>(data.size());
  return {std::move(name), LayerKind::FullyConnected, {1, n}, std::move(data)};
}

/// Layers symmetric around zero: {-s/2, -s/4, 0.1 s, s/2}, span s.
Model symmetric_spans(const std::vector<float>& spans) {
  Model m;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const float s = spans[i];
    m.layers.push_back(fc({-s / 2, -s / 4, 0.1f * s, s / 2}, "l" + std::to_string(i)));
  }
  return m;
}

}  // namespace

TEST_CASE("plan_flat") {
  const auto m = symmetric_spans({2.0f, 4.0f});
  SUBCASE("quarter of the min span") {
    CHECK(plan_flat(m, 0.25).thresholds == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("delta 0") { CHECK(plan_flat(m, 0.0).thresholds == std::vector<double>{0.0, 0.0}); }
  SUBCASE("delta 1 eliminates the min-span layer") {
    const auto out = apply_plan(m, plan_flat(m, 1.0));
    const auto k = min_span(m).layer - 1;
    for (float w : out.layers[k].data) CHECK(w == 0.0f);
    CHECK(sparsity_report(out).per_layer[k].ratio == 1.0);
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(plan_flat(m, -0.01), ValidationError);
    CHECK_THROWS_AS(plan_flat(m, 1.01), ValidationError);
    CHECK_THROWS_AS(plan_flat(m, std::nan("")), ValidationError);
  }
  CHECK(plan_flat(m, 0.3).method() == Method::Flat);
}

TEST_CASE("triangular_thresholds") {
  SUBCASE("literal interior rule") {
    const auto t = triangular_thresholds(5, 0.1, 0.5, TriangularMode::Paper);
    const std::vector<double> expect{0.1, 0.0, 0.08, 0.16, 0.5};
    for (std::size_t i = 0; i < 5; ++i) CHECK(t[i] == doctest::Approx(expect[i]).epsilon(1e-9));
  }
  SUBCASE("interpolated") {
    const auto t = triangular_thresholds(5, 0.1, 0.5, TriangularMode::Interpolated);
    const std::vector<double> expect{0.1, 0.2, 0.3, 0.4, 0.5};
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::fabs(t[i] - expect[i]) <= 1e-9);
  }
  SUBCASE("two layers has no interior") {
    CHECK(triangular_thresholds(2, 0.1, 0.3, TriangularMode::Paper) == std::vector<double>{0.1, 0.3});
  }
  SUBCASE("tau_max below tau_min") {
    CHECK_THROWS_AS(triangular_thresholds(4, 0.5, 0.1, TriangularMode::Paper), ValidationError);
    CHECK_NOTHROW(triangular_thresholds(4, 0.5, 0.1, TriangularMode::Interpolated));
  }
  SUBCASE("needs two layers") {
    CHECK_THROWS_AS(triangular_thresholds(1, 0.1, 0.5, TriangularMode::Paper), ValidationError);
  }
}

TEST_CASE("plan_triangular") {
  // spans 1, 3, 3, 3, 1 with a bigger last layer
  auto m = symmetric_spans({1.0f, 3.0f, 3.0f, 3.0f, 1.0f});
  const auto p = plan_triangular(m, 0.1, 0.5, TriangularMode::Paper);
  CHECK(p.thresholds.front() == doctest::Approx(0.1));
  CHECK(p.thresholds.back() == doctest::Approx(0.5));
  CHECK(p.thresholds[1] == 0.0);
  CHECK(p.thresholds[2] == doctest::Approx(0.08));
  CHECK(p.thresholds[3] == doctest::Approx(0.16));

  const auto zero = plan_triangular(m, 0.0, 0.0, TriangularMode::Paper);
  for (double t : zero.thresholds) CHECK(t == 0.0);

  CHECK_THROWS_AS(plan_triangular(m, 0.9, 0.1, TriangularMode::Paper), ValidationError);
  CHECK_THROWS_AS(plan_triangular(symmetric_spans({1.0f}), 0.1, 0.1), ValidationError);
  CHECK_THROWS_AS(plan_triangular(m, 0.1, 1.5), ValidationError);
}

TEST_CASE("plan_relative") {
  SUBCASE("percentile halves a 4-weight layer") {
    Model m;
    m.layers.push_back(fc({3.0f, -1.0f, 4.0f, -2.0f}));
    const auto p = plan_relative(m, 0.5);
    CHECK(p.thresholds == std::vector<double>{2.0});
    const auto out = apply_plan(m, p);
    CHECK(oracle_zero_count(out.layers[0].data) == 2);
  }
  SUBCASE("delta 0 is the no-op sentinel") {
    Model m;
    m.layers.push_back(fc({3.0f, -0.0f, 4.0f}));
    const auto p = plan_relative(m, 0.0);
    CHECK(p.thresholds == std::vector<double>{-1.0});
    CHECK(bit_identical(apply_plan(m, p), m));
  }
  SUBCASE("span mode") {
    Model m;
    m.layers.push_back(fc({-1.0f, 0.5f, 3.0f}));
    CHECK(plan_relative(m, 0.25, RelativeMode::Span).thresholds == std::vector<double>{1.0});
  }
  SUBCASE("per-layer deltas") {
    Model m;
    m.layers.push_back(fc({1.0f, 2.0f, 3.0f, 4.0f}, "a"));
    m.layers.push_back(fc({1.0f, 2.0f, 3.0f, 4.0f}, "b"));
    const std::vector<double> ds{0.25, 1.0};
    CHECK(plan_relative(m, ds).thresholds == std::vector<double>{1.0, 4.0});
    const std::vector<double> wrong{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(plan_relative(m, wrong), ValidationError);
    const std::vector<double> bad{0.1, 2.0};
    CHECK_THROWS_AS(plan_relative(m, bad), ValidationError);
  }
}

TEST_CASE("apply_plan") {
  Model m;
  m.layers.push_back(fc({0.5f, -0.3f, 2.0f, 0.0f}));
  SparsifyPlan p{FlatParams{0.0}, {0.5}};
  const auto out = apply_plan(m, p);
  CHECK(out.layers[0].data == std::vector<float>{0.0f, 0.0f, 2.0f, 0.0f});
  for (float w : out.layers[0].data) CHECK_FALSE(std::signbit(w));
  // input untouched
  CHECK(m.layers[0].data == std::vector<float>{0.5f, -0.3f, 2.0f, 0.0f});

  Model boundary;
  boundary.layers.push_back(fc({1.0f, -2.0f, -1.0f}));
  const auto b = apply_plan(boundary, SparsifyPlan{FlatParams{}, {1.0}});
  CHECK(b.layers[0].data[0] == 0.0f);
  CHECK(b.layers[0].data[1] == -2.0f);
  CHECK(b.layers[0].data[2] == 0.0f);

  CHECK_THROWS_AS(apply_plan(m, SparsifyPlan{FlatParams{}, {0.1, 0.2}}), ValidationError);

  Model inplace = m;
  apply_plan_in_place(inplace, p);
  CHECK(bit_identical(inplace, out));
}

TEST_CASE("sparsity_report and compression factor") {
  Model m;
  m.layers.push_back(fc({0, 0, 1, 2}, "a"));
  m.layers.push_back(fc({0, 3, 4, 5, 6, 7}, "b"));
  const auto r = sparsity_report(m);
  CHECK(r.per_layer[0].ratio == 0.5);
  CHECK(r.per_layer[1].zero_count == 1);
  CHECK(r.model_zero_count == 3);
  CHECK(r.model_weight_count == 10);
  CHECK(r.model_ratio == doctest::Approx(0.3));
  CHECK(r.compression_factor == doctest::Approx(1.0 / 0.7));

  CHECK(compression_factor(0.0) == 1.0);
  CHECK(std::isinf(compression_factor(1.0)));
  CHECK_THROWS_AS(compression_factor(1.2), ValidationError);
  CHECK(format_compression(compression_factor(0.73)) == "3.70");
  CHECK(format_compression(compression_factor(0.51)) == "2.04");
  CHECK(format_compression(1.0) == "1.00");
  CHECK(format_compression(12.5) == "12.5");
  CHECK(format_compression(250.0) == "250");
  CHECK(format_compression(compression_factor(1.0)) == "inf");

  Model all_zero;
  all_zero.layers.push_back(fc({0.0f, -0.0f}));
  CHECK(std::isinf(sparsity_report(all_zero).compression_factor));
}

TEST_CASE("plan JSON round trip reproduces the plan") {
  std::mt19937 rng(17);
  for (int i = 0; i < 30; ++i) {
    const auto m = random_model(rng, 4);
    std::vector<SparsifyPlan> plans{plan_flat(m, 0.3), plan_relative(m, 0.6),
                                    plan_relative(m, 0.4, RelativeMode::Span)};
    if (m.layer_count() >= 2) {
      plans.push_back(plan_triangular(m, 0.2, 0.7, TriangularMode::Interpolated));
    }
    for (const auto& p : plans) {
      const auto back = plan_from_json(plan_to_json(p, m));
      CHECK(back.method() == p.method());
      CHECK(back.thresholds == p.thresholds);
      CHECK(bit_identical(apply_plan(m, back), apply_plan(m, p)));
      CHECK(make_plan(m, back.params).thresholds == p.thresholds);
    }
  }
}

TEST_CASE("property: idempotence, preservation and exact counting") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto m = random_model(rng);
    const auto plan = i % 2 ? plan_relative(m, frac(rng)) : plan_flat(m, frac(rng));
    const auto once = apply_plan(m, plan);
    CHECK(bit_identical(apply_plan(once, plan), once));
    const auto report = sparsity_report(once);
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
      const auto& src = m.layers[l].data;
      const auto& dst = once.layers[l].data;
      for (std::size_t j = 0; j < src.size(); ++j) {
        if (std::fabs(src[j]) > plan.thresholds[l]) REQUIRE(same_bits(src[j], dst[j]));
      }
      CHECK(report.per_layer[l].zero_count == oracle_zero_count(dst));
    }
  }
}

TEST_CASE("property: zero sets grow with delta") {
  std::mt19937 rng(31);
  auto check_nested = [](const Model& a, const Model& b) {
    for (std::size_t l = 0; l < a.layer_count(); ++l) {
      const auto za = zero_positions(a.layers[l]);
      const auto zb = zero_positions(b.layers[l]);
      REQUIRE(std::includes(zb.begin(), zb.end(), za.begin(), za.end()));
    }
  };
  for (int i = 0; i < 100; ++i) {
    auto m = random_model(rng);
    // a wide last layer keeps sigma_L >= sigma_1 so literal triangular plans stay valid
    m.layers.push_back({"tail", LayerKind::FullyConnected, {1, 2}, {10.0f, -10.0f}});
    Model prev_flat, prev_pct, prev_span, prev_tri_paper, prev_tri_interp;
    for (int step = 0; step <= 10; ++step) {
      const double d = step / 10.0;
      auto flat = apply_plan(m, plan_flat(m, d));
      auto pct = apply_plan(m, plan_relative(m, d));
      auto span = apply_plan(m, plan_relative(m, d, RelativeMode::Span));
      auto tri_p = apply_plan(m, plan_triangular(m, d, d, TriangularMode::Paper));
      auto tri_i = apply_plan(m, plan_triangular(m, d, d, TriangularMode::Interpolated));
      if (step > 0) {
        check_nested(prev_flat, flat);
        check_nested(prev_pct, pct);
        check_nested(prev_span, span);
        check_nested(prev_tri_paper, tri_p);
        check_nested(prev_tri_interp, tri_i);
      }
      prev_flat = std::move(flat);
      prev_pct = std::move(pct);
      prev_span = std::move(span);
      prev_tri_paper = std::move(tri_p);
      prev_tri_interp = std::move(tri_i);
    }
  }
}

TEST_CASE("property: interpolated triangular is monotone in each end separately") {
  std::mt19937 rng(41);
  for (int i = 0; i < 50; ++i) {
    auto m = random_model(rng);
    if (m.layer_count() < 2) m.layers.push_back(random_layer(rng, "extra", LayerKind::FullyConnected));
    const double fc_delta = (rng() % 11) / 10.0;
    Model prev;
    for (int step = 0; step <= 10; ++step) {
      auto cur = apply_plan(m, plan_triangular(m, step / 10.0, fc_delta, TriangularMode::Interpolated));
      if (step > 0) {
        for (std::size_t l = 0; l < m.layer_count(); ++l) {
          const auto za = zero_positions(prev.layers[l]);
          const auto zb = zero_positions(cur.layers[l]);
          REQUIRE(std::includes(zb.begin(), zb.end(), za.begin(), za.end()));
        }
      }
      prev = std::move(cur);
    }
  }
}
