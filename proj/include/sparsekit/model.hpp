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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sparsekit {

enum class LayerKind : std::uint8_t { Conv = 0, FullyConnected = 1 };

std::string_view to_string(LayerKind kind);

/// One layer's weights. Conv shapes are filters x channels x height x width,
/// fully connected shapes are outputs x inputs. Data is row-major.
struct LayerTensor {
  std::string name;
  LayerKind kind = LayerKind::FullyConnected;
  std::vector<std::uint32_t> shape;
  std::vector<float> data;

  std::size_t size() const { return data.size(); }
  std::span<const float> values() const { return data; }

  /// Throws ValidationError if shape/kind/length/finiteness invariants fail.
  void validate() const;

  friend bool operator==(const LayerTensor&, const LayerTensor&) = default;
};

/// Product of the dimensions; 0 for an empty shape.
std::size_t element_count(std::span<const std::uint32_t> shape);

/// Ordered weight layers in network forward order. Layer l of the
/// literature's 1..L numbering lives at layers[l - 1].
struct Model {
  std::vector<LayerTensor> layers;

  std::size_t layer_count() const { return layers.size(); }
  std::size_t weight_count() const;

  /// Index of the layer called `name`, or npos.
  std::size_t find(std::string_view name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Checks every layer plus name uniqueness and L >= 1.
  void validate() const;
};

/// Bitwise comparison of all fields. operator== on floats treats
/// +0.0 == -0.0 and NaN != NaN, which is not what round-trip checks want.
bool bit_identical(const LayerTensor& a, const LayerTensor& b);
bool bit_identical(const Model& a, const Model& b);

}  // namespace sparsekit
