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

#include "sparsekit/model.hpp"

#include <cmath>
#include <cstring>
#include <unordered_set>

#include <fmt/format.h>

#include "sparsekit/errors.hpp"

namespace sparsekit {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv:
      return "conv";
    case LayerKind::FullyConnected:
      return "fc";
  }
  return "unknown";
}

std::size_t element_count(std::span<const std::uint32_t> shape) {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

void LayerTensor::validate() const {
  const std::size_t expected_rank = kind == LayerKind::Conv ? 4 : 2;
  if (shape.size() != expected_rank) {
    throw ValidationError(fmt::format("layer '{}': {} layer needs rank {}, got rank {}", name,
                                      to_string(kind), expected_rank, shape.size()));
  }
  for (auto d : shape) {
    if (d == 0) throw ValidationError(fmt::format("layer '{}': zero-sized dimension", name));
  }
  if (element_count(shape) != data.size()) {
    throw ValidationError(fmt::format("layer '{}': shape holds {} weights but data has {}", name,
                                      element_count(shape), data.size()));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw ValidationError(
          fmt::format("layer '{}': non-finite weight at index {}", name, i));
    }
  }
}

std::size_t Model::weight_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.size();
  return n;
}

std::size_t Model::find(std::string_view name) const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].name == name) return i;
  }
  return npos;
}

void Model::validate() const {
  if (layers.empty()) throw ValidationError("model has no layers");
  std::unordered_set<std::string_view> seen;
  for (const auto& l : layers) {
    if (!seen.insert(l.name).second) {
      throw ValidationError(fmt::format("duplicate layer name '{}'", l.name));
    }
    l.validate();
  }
}

bool bit_identical(const LayerTensor& a, const LayerTensor& b) {
  return a.name == b.name && a.kind == b.kind && a.shape == b.shape &&
         a.data.size() == b.data.size() &&
         (a.data.empty() ||
          std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(float)) == 0);
}

bool bit_identical(const Model& a, const Model& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (!bit_identical(a.layers[i], b.layers[i])) return false;
  }
  return true;
}

}  // namespace sparsekit
