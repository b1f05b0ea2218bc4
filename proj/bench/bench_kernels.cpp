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

// Times the serial reference kernels against the OpenMP ones and checks
// that both agree. Exits non-zero on any disagreement.

#include <chrono>
#include <cstring>
#include <iostream>
#include <random>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sparsekit/infer.hpp"
#include "sparsekit/kernels.hpp"

using namespace sparsekit;
namespace k = sparsekit::kernels;

namespace {

template <class F>
double time_ms(int reps, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

bool report(const char* name, double serial_ms, double omp_ms, bool same) {
  fmt::print("{:<14} serial {:>10.3f} ms   omp {:>10.3f} ms   x{:<6.2f} {}\n", name, serial_ms,
             omp_ms, omp_ms > 0 ? serial_ms / omp_ms : 0.0, same ? "ok" : "MISMATCH");
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t size = 1 << 22;
  int reps = 5;
  std::size_t samples = 256;
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  app.add_option("--size", size, "elements per array");
  app.add_option("--reps", reps, "repetitions per kernel");
  app.add_option("--samples", samples, "samples for the evaluate benchmark");
  CLI11_PARSE(app, argc, argv);

  fmt::print("threads: {}\n", k::configure_threads_from_env());

  std::mt19937 rng(42);
  std::normal_distribution<float> normal(0.0f, 0.05f);
  std::vector<float> xs(size);
  for (auto& x : xs) x = normal(rng);
  for (std::size_t i = 0; i < size; i += 17) xs[i] = 0.0f;

  bool ok = true;
  {
    k::MinMax a{}, b{};
    const double s = time_ms(reps, [&] { a = k::serial::minmax(xs); });
    const double o = time_ms(reps, [&] { b = k::omp::minmax(xs); });
    ok &= report("minmax", s, o, a.min == b.min && a.max == b.max);
  }
  {
    std::size_t a = 0, b = 0;
    const double s = time_ms(reps, [&] { a = k::serial::count_zeros(xs); });
    const double o = time_ms(reps, [&] { b = k::omp::count_zeros(xs); });
    ok &= report("count_zeros", s, o, a == b);
  }
  {
    std::vector<float> a(size), b(size);
    const double s = time_ms(reps, [&] { k::serial::threshold(xs, a, 0.03); });
    const double o = time_ms(reps, [&] { k::omp::threshold(xs, b, 0.03); });
    ok &= report("threshold", s, o, std::memcmp(a.data(), b.data(), size * sizeof(float)) == 0);
  }
  {
    const auto mm = k::serial::minmax(xs);
    std::vector<std::uint64_t> a, b;
    const double s = time_ms(reps, [&] { a = k::serial::histogram(xs, mm.min, mm.max, 64); });
    const double o = time_ms(reps, [&] { b = k::omp::histogram(xs, mm.min, mm.max, 64); });
    ok &= report("histogram", s, o, a == b);
  }
  {
    float a = 0, b = 0;
    const std::size_t kth = size / 2 + 1;
    const double s = time_ms(reps, [&] { a = k::serial::kth_magnitude(xs, kth); });
    const double o = time_ms(reps, [&] { b = k::omp::kth_magnitude(xs, kth); });
    ok &= report("kth_magnitude", s, o, a == b);
  }
  {
    // 2-layer conv net on 16x16 inputs
    Model m;
    auto fill = [&](std::vector<std::uint32_t> shape, LayerKind kind, const char* name) {
      LayerTensor t{name, kind, shape, std::vector<float>(element_count(shape))};
      for (auto& w : t.data) w = normal(rng);
      m.layers.push_back(std::move(t));
    };
    fill({8, 1, 3, 3}, LayerKind::Conv, "conv");
    fill({4, 8 * 7 * 7}, LayerKind::FullyConnected, "fc");
    ArchManifest arch;
    arch.layers = {Conv2DSpec{"conv", {}, 1, Padding::Valid}, ReLUSpec{}, MaxPool2DSpec{2, 2},
                   FlattenSpec{}, DenseSpec{"fc", {}}};
    Dataset d;
    d.input_shape = {1, 16, 16};
    d.class_count = 4;
    d.inputs.resize(samples * 256);
    for (auto& x : d.inputs) x = normal(rng);
    d.labels.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) d.labels[i] = static_cast<std::uint16_t>(i % 4);
    double a = 0, b = 0;
    const double s = time_ms(reps, [&] { a = evaluate_serial(m, arch, d); });
    const double o = time_ms(reps, [&] { b = evaluate(m, arch, d); });
    ok &= report("evaluate", s, o, a == b);
  }
  return ok ? 0 : 1;
}
