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

/// \file infer.hpp
/// \brief Small deterministic forward-pass engine used to score sparsified
/// models.
///
/// Activations are either flat vectors (rank 1) or channel-major feature maps
/// (rank 3, C x H x W). Weights are looked up by name in a Model; biases live
/// in the manifest and are never thresholded.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sparsekit/model.hpp"

namespace sparsekit {

enum class Padding { Valid, Same };

struct DenseSpec {
  std::string weights;
  std::vector<float> bias;
};

/// "same" padding uses out = ceil(in / stride) and pads with zeros, the odd
/// extra row/column going to the bottom/right.
struct Conv2DSpec {
  std::string weights;
  std::vector<float> bias;
  std::uint32_t stride = 1;
  Padding padding = Padding::Valid;
};

struct ReLUSpec {};
struct MaxPool2DSpec {
  std::uint32_t window = 2;
  std::uint32_t stride = 2;
};
struct FlattenSpec {};
struct SoftmaxSpec {};

using LayerSpec =
    std::variant<DenseSpec, Conv2DSpec, ReLUSpec, MaxPool2DSpec, FlattenSpec, SoftmaxSpec>;

struct ArchManifest {
  std::vector<LayerSpec> layers;
  /// Optional; when present it must agree with the dataset.
  std::optional<std::vector<std::uint32_t>> input_shape;
};

ArchManifest parse_manifest(std::string_view json_text);
ArchManifest read_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const ArchManifest& manifest);

/// Labeled samples, stored row-major: sample i occupies
/// inputs[i * sample_size() .. (i + 1) * sample_size()).
struct Dataset {
  std::vector<std::uint32_t> input_shape;
  std::uint32_t class_count = 0;
  std::vector<float> inputs;
  std::vector<std::uint16_t> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t sample_size() const { return element_count(input_shape); }
  std::span<const float> input(std::size_t i) const {
    return std::span<const float>(inputs).subspan(i * sample_size(), sample_size());
  }
  void validate() const;
};

/// SPDS dataset file, little-endian:
///   "SPDS" | u8 version=1 | u32 n | u8 rank | rank x u32 dims | u32 classes
///   then n x (prod(dims) x f32 input, u16 label)
std::string serialize_dataset(const Dataset& data);
Dataset parse_dataset(std::string_view bytes);
Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const Dataset& data, const std::filesystem::path& path);

/// A manifest bound to a model and an input shape, with every shape checked
/// up front. Holds non-owning views into the model's weights; the model
/// must outlive it.
class Network {
 public:
  Network(const Model& model, const ArchManifest& manifest,
          std::span<const std::uint32_t> input_shape);

  std::vector<float> forward(std::span<const float> input) const;
  std::size_t output_size() const { return output_size_; }

 private:
  struct Step {
    LayerSpec spec;
    const LayerTensor* weights = nullptr;
    std::vector<std::size_t> in_shape;
    std::vector<std::size_t> out_shape;
    std::size_t pad_top = 0;
    std::size_t pad_left = 0;
  };

  std::vector<Step> steps_;
  std::size_t input_size_ = 0;
  std::size_t output_size_ = 0;
};

/// Runs one sample through the network.
std::vector<float> forward(const Model& model, const ArchManifest& manifest,
                           std::span<const std::uint32_t> input_shape,
                           std::span<const float> input);

/// Index of the largest score; ties go to the lowest index.
std::size_t argmax(std::span<const float> scores);

/// Top-1 accuracy over the dataset, parallel over samples.
double evaluate(const Model& model, const ArchManifest& manifest, const Dataset& data);

/// Sequential reference for `evaluate`.
double evaluate_serial(const Model& model, const ArchManifest& manifest, const Dataset& data);

/// sparsified / baseline. May exceed 1.
double normalized_accuracy(double sparsified, double baseline);

}  // namespace sparsekit
