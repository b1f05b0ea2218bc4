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

#include "sparsekit/infer.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "sparsekit/errors.hpp"

namespace sparsekit {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::string describe(const LayerSpec& spec, std::size_t index) {
  return std::visit(
      overloaded{
          [&](const DenseSpec& s) { return fmt::format("layer #{} (dense '{}')", index, s.weights); },
          [&](const Conv2DSpec& s) {
            return fmt::format("layer #{} (conv2d '{}')", index, s.weights);
          },
          [&](const ReLUSpec&) { return fmt::format("layer #{} (relu)", index); },
          [&](const MaxPool2DSpec&) { return fmt::format("layer #{} (maxpool2d)", index); },
          [&](const FlattenSpec&) { return fmt::format("layer #{} (flatten)", index); },
          [&](const SoftmaxSpec&) { return fmt::format("layer #{} (softmax)", index); }},
      spec);
}

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

const LayerTensor& lookup(const Model& model, const std::string& name, LayerKind kind,
                          const std::string& where) {
  const auto idx = model.find(name);
  if (idx == Model::npos) {
    throw ValidationError(fmt::format("{}: weights '{}' not found in model", where, name));
  }
  const auto& t = model.layers[idx];
  if (t.kind != kind) {
    throw ValidationError(
        fmt::format("{}: weights '{}' are a {} layer", where, name, to_string(t.kind)));
  }
  return t;
}

void dense(const LayerTensor& w, const std::vector<float>& bias, std::span<const float> in,
           std::span<float> out) {
  const std::size_t rows = w.shape[0];
  const std::size_t cols = w.shape[1];
  for (std::size_t r = 0; r < rows; ++r) {
    const float* row = w.data.data() + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += static_cast<double>(row[c]) * in[c];
    if (!bias.empty()) acc += bias[r];
    out[r] = static_cast<float>(acc);
  }
}

void conv2d(const LayerTensor& w, const Conv2DSpec& spec, const std::vector<std::size_t>& is,
            const std::vector<std::size_t>& os, std::size_t pad_top, std::size_t pad_left,
            std::span<const float> in, std::span<float> out) {
  const std::size_t F = w.shape[0], C = w.shape[1], KH = w.shape[2], KW = w.shape[3];
  const std::size_t H = is[1], W = is[2], OH = os[1], OW = os[2];
  const auto stride = static_cast<std::ptrdiff_t>(spec.stride);
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t oy = 0; oy < OH; ++oy) {
      for (std::size_t ox = 0; ox < OW; ++ox) {
        double acc = 0.0;
        const auto y0 = static_cast<std::ptrdiff_t>(oy) * stride - static_cast<std::ptrdiff_t>(pad_top);
        const auto x0 = static_cast<std::ptrdiff_t>(ox) * stride - static_cast<std::ptrdiff_t>(pad_left);
        for (std::size_t c = 0; c < C; ++c) {
          for (std::size_t ky = 0; ky < KH; ++ky) {
            const auto y = y0 + static_cast<std::ptrdiff_t>(ky);
            if (y < 0 || y >= static_cast<std::ptrdiff_t>(H)) continue;
            for (std::size_t kx = 0; kx < KW; ++kx) {
              const auto x = x0 + static_cast<std::ptrdiff_t>(kx);
              if (x < 0 || x >= static_cast<std::ptrdiff_t>(W)) continue;
              const float wv = w.data[((f * C + c) * KH + ky) * KW + kx];
              acc += static_cast<double>(wv) *
                     in[(c * H + static_cast<std::size_t>(y)) * W + static_cast<std::size_t>(x)];
            }
          }
        }
        if (!spec.bias.empty()) acc += spec.bias[f];
        out[(f * OH + oy) * OW + ox] = static_cast<float>(acc);
      }
    }
  }
}

void maxpool(const MaxPool2DSpec& spec, const std::vector<std::size_t>& is,
             const std::vector<std::size_t>& os, std::span<const float> in, std::span<float> out) {
  const std::size_t C = is[0], H = is[1], W = is[2], OH = os[1], OW = os[2];
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t oy = 0; oy < OH; ++oy) {
      for (std::size_t ox = 0; ox < OW; ++ox) {
        float m = in[(c * H + oy * spec.stride) * W + ox * spec.stride];
        for (std::size_t ky = 0; ky < spec.window; ++ky) {
          for (std::size_t kx = 0; kx < spec.window; ++kx) {
            m = std::max(m, in[(c * H + oy * spec.stride + ky) * W + ox * spec.stride + kx]);
          }
        }
        out[(c * OH + oy) * OW + ox] = m;
      }
    }
  }
}

void softmax(std::span<const float> in, std::span<float> out) {
  const float m = *std::max_element(in.begin(), in.end());
  double sum = 0.0;
  std::vector<double> e(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    e[i] = std::exp(static_cast<double>(in[i]) - m);
    sum += e[i];
  }
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = static_cast<float>(e[i] / sum);
}

}  // namespace

Network::Network(const Model& model, const ArchManifest& manifest,
                 std::span<const std::uint32_t> input_shape) {
  if (input_shape.empty()) throw ValidationError("network input shape is empty");
  if (manifest.input_shape &&
      !std::equal(manifest.input_shape->begin(), manifest.input_shape->end(), input_shape.begin(),
                  input_shape.end())) {
    throw ValidationError(fmt::format("manifest input shape [{}] differs from data shape [{}]",
                                      fmt::join(*manifest.input_shape, ","),
                                      fmt::join(input_shape, ",")));
  }
  std::vector<std::size_t> shape(input_shape.begin(), input_shape.end());
  input_size_ = product(shape);

  for (std::size_t i = 0; i < manifest.layers.size(); ++i) {
    const auto& spec = manifest.layers[i];
    const auto where = describe(spec, i + 1);
    Step step{spec, nullptr, shape, {}, 0, 0};

    std::visit(
        overloaded{
            [&](const DenseSpec& s) {
              step.weights = &lookup(model, s.weights, LayerKind::FullyConnected, where);
              const std::size_t outs = step.weights->shape[0], ins = step.weights->shape[1];
              if (shape.size() != 1) {
                throw ValidationError(fmt::format(
                    "{}: needs a flat input but got rank {}; add a flatten layer", where,
                    shape.size()));
              }
              if (shape[0] != ins) {
                throw ValidationError(
                    fmt::format("{}: expects {} inputs, got {}", where, ins, shape[0]));
              }
              if (!s.bias.empty() && s.bias.size() != outs) {
                throw ValidationError(
                    fmt::format("{}: bias has {} entries for {} outputs", where, s.bias.size(), outs));
              }
              step.out_shape = {outs};
            },
            [&](const Conv2DSpec& s) {
              step.weights = &lookup(model, s.weights, LayerKind::Conv, where);
              const auto& ws = step.weights->shape;
              if (shape.size() != 3) {
                throw ValidationError(
                    fmt::format("{}: needs a C x H x W input, got rank {}", where, shape.size()));
              }
              if (shape[0] != ws[1]) {
                throw ValidationError(fmt::format("{}: expects {} input channels, got {}", where,
                                                  ws[1], shape[0]));
              }
              if (s.stride == 0) throw ValidationError(fmt::format("{}: stride must be >= 1", where));
              if (!s.bias.empty() && s.bias.size() != ws[0]) {
                throw ValidationError(fmt::format("{}: bias has {} entries for {} filters", where,
                                                  s.bias.size(), ws[0]));
              }
              std::size_t oh = 0, ow = 0;
              if (s.padding == Padding::Valid) {
                if (shape[1] < ws[2] || shape[2] < ws[3]) {
                  throw ValidationError(fmt::format("{}: {}x{} kernel larger than {}x{} input",
                                                    where, ws[2], ws[3], shape[1], shape[2]));
                }
                oh = (shape[1] - ws[2]) / s.stride + 1;
                ow = (shape[2] - ws[3]) / s.stride + 1;
              } else {
                oh = (shape[1] + s.stride - 1) / s.stride;
                ow = (shape[2] + s.stride - 1) / s.stride;
                const auto pad_h = std::max<std::ptrdiff_t>(
                    0, static_cast<std::ptrdiff_t>((oh - 1) * s.stride + ws[2]) -
                           static_cast<std::ptrdiff_t>(shape[1]));
                const auto pad_w = std::max<std::ptrdiff_t>(
                    0, static_cast<std::ptrdiff_t>((ow - 1) * s.stride + ws[3]) -
                           static_cast<std::ptrdiff_t>(shape[2]));
                step.pad_top = static_cast<std::size_t>(pad_h / 2);
                step.pad_left = static_cast<std::size_t>(pad_w / 2);
              }
              step.out_shape = {ws[0], oh, ow};
            },
            [&](const ReLUSpec&) { step.out_shape = shape; },
            [&](const MaxPool2DSpec& s) {
              if (shape.size() != 3) {
                throw ValidationError(
                    fmt::format("{}: needs a C x H x W input, got rank {}", where, shape.size()));
              }
              if (s.window == 0 || s.stride == 0) {
                throw ValidationError(fmt::format("{}: window and stride must be >= 1", where));
              }
              if (shape[1] < s.window || shape[2] < s.window) {
                throw ValidationError(fmt::format("{}: window {} larger than {}x{} input", where,
                                                  s.window, shape[1], shape[2]));
              }
              step.out_shape = {shape[0], (shape[1] - s.window) / s.stride + 1,
                                (shape[2] - s.window) / s.stride + 1};
            },
            [&](const FlattenSpec&) { step.out_shape = {product(shape)}; },
            [&](const SoftmaxSpec&) { step.out_shape = shape; }},
        spec);

    shape = step.out_shape;
    steps_.push_back(std::move(step));
  }
  output_size_ = product(shape);
}

std::vector<float> Network::forward(std::span<const float> input) const {
  if (input.size() != input_size_) {
    throw ValidationError(
        fmt::format("input has {} values, network expects {}", input.size(), input_size_));
  }
  std::vector<float> cur(input.begin(), input.end());
  std::vector<float> next;
  for (const auto& step : steps_) {
    next.assign(product(step.out_shape), 0.0f);
    std::visit(overloaded{[&](const DenseSpec& s) { dense(*step.weights, s.bias, cur, next); },
                          [&](const Conv2DSpec& s) {
                            conv2d(*step.weights, s, step.in_shape, step.out_shape, step.pad_top,
                                   step.pad_left, cur, next);
                          },
                          [&](const ReLUSpec&) {
                            for (std::size_t i = 0; i < cur.size(); ++i)
                              next[i] = std::max(0.0f, cur[i]);
                          },
                          [&](const MaxPool2DSpec& s) {
                            maxpool(s, step.in_shape, step.out_shape, cur, next);
                          },
                          [&](const FlattenSpec&) { next = cur; },
                          [&](const SoftmaxSpec&) { softmax(cur, next); }},
               step.spec);
    cur.swap(next);
  }
  return cur;
}

std::vector<float> forward(const Model& model, const ArchManifest& manifest,
                           std::span<const std::uint32_t> input_shape,
                           std::span<const float> input) {
  return Network(model, manifest, input_shape).forward(input);
}

std::size_t argmax(std::span<const float> scores) {
  if (scores.empty()) throw ValidationError("argmax of an empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

namespace {

Network bind(const Model& model, const ArchManifest& manifest, const Dataset& data) {
  if (data.size() == 0) throw ValidationError("dataset is empty");
  data.validate();
  Network net(model, manifest, data.input_shape);
  if (net.output_size() != data.class_count) {
    throw ValidationError(fmt::format("network produces {} scores for {} classes",
                                      net.output_size(), data.class_count));
  }
  return net;
}

}  // namespace

double evaluate(const Model& model, const ArchManifest& manifest, const Dataset& data) {
  const Network net = bind(model, manifest, data);
  const auto n = static_cast<std::ptrdiff_t>(data.size());
  std::size_t correct = 0;
#pragma omp parallel for reduction(+ : correct) schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    correct += argmax(net.forward(data.input(idx))) == data.labels[idx];
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double evaluate_serial(const Model& model, const ArchManifest& manifest, const Dataset& data) {
  const Network net = bind(model, manifest, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    correct += argmax(net.forward(data.input(i))) == data.labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double normalized_accuracy(double sparsified, double baseline) {
  if (!(baseline > 0.0)) {
    throw ValidationError("baseline accuracy must be positive to normalize against it");
  }
  return sparsified / baseline;
}

}  // namespace sparsekit
