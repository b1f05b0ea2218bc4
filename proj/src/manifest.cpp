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

#include <fmt/format.h>
#include <json.hpp>

#include "sparsekit/container.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/infer.hpp"

namespace sparsekit {

namespace {

using nlohmann::json;

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::vector<float> read_bias(const json& j) {
  if (!j.contains("bias")) return {};
  return j.at("bias").get<std::vector<float>>();
}

std::uint32_t positive(const json& j, const char* key, std::uint32_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = j.at(key).get<std::int64_t>();
  if (v < 1) throw ValidationError(fmt::format("manifest: '{}' must be >= 1", key));
  return static_cast<std::uint32_t>(v);
}

LayerSpec parse_layer(const json& j) {
  const auto op = j.at("op").get<std::string>();
  if (op == "dense") return DenseSpec{j.at("weights").get<std::string>(), read_bias(j)};
  if (op == "conv2d") {
    Conv2DSpec s;
    s.weights = j.at("weights").get<std::string>();
    s.bias = read_bias(j);
    s.stride = positive(j, "stride", 1);
    const auto pad = j.value("padding", std::string("valid"));
    if (pad == "valid") {
      s.padding = Padding::Valid;
    } else if (pad == "same") {
      s.padding = Padding::Same;
    } else {
      throw ValidationError(fmt::format("manifest: unknown padding '{}'", pad));
    }
    return s;
  }
  if (op == "relu") return ReLUSpec{};
  if (op == "maxpool2d") {
    MaxPool2DSpec s;
    s.window = positive(j, "window", 2);
    s.stride = positive(j, "stride", s.window);
    return s;
  }
  if (op == "flatten") return FlattenSpec{};
  if (op == "softmax") return SoftmaxSpec{};
  throw ValidationError(fmt::format("manifest: unknown op '{}'", op));
}

}  // namespace

ArchManifest parse_manifest(std::string_view json_text) {
  try {
    const auto root = json::parse(json_text);
    ArchManifest m;
    if (root.contains("input_shape")) {
      m.input_shape = root.at("input_shape").get<std::vector<std::uint32_t>>();
    }
    for (const auto& layer : root.at("layers")) m.layers.push_back(parse_layer(layer));
    return m;
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("manifest: {}", e.what()));
  }
}

ArchManifest read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file_bytes(path));
}

std::string manifest_to_json(const ArchManifest& manifest) {
  json root;
  if (manifest.input_shape) root["input_shape"] = *manifest.input_shape;
  json layers = json::array();
  for (const auto& spec : manifest.layers) {
    layers.push_back(std::visit(
        overloaded{[](const DenseSpec& s) {
                     json j{{"op", "dense"}, {"weights", s.weights}};
                     if (!s.bias.empty()) j["bias"] = s.bias;
                     return j;
                   },
                   [](const Conv2DSpec& s) {
                     json j{{"op", "conv2d"},
                            {"weights", s.weights},
                            {"stride", s.stride},
                            {"padding", s.padding == Padding::Same ? "same" : "valid"}};
                     if (!s.bias.empty()) j["bias"] = s.bias;
                     return j;
                   },
                   [](const ReLUSpec&) { return json{{"op", "relu"}}; },
                   [](const MaxPool2DSpec& s) {
                     return json{{"op", "maxpool2d"}, {"window", s.window}, {"stride", s.stride}};
                   },
                   [](const FlattenSpec&) { return json{{"op", "flatten"}}; },
                   [](const SoftmaxSpec&) { return json{{"op", "softmax"}}; }},
        spec));
  }
  root["layers"] = std::move(layers);
  return root.dump(2);
}

}  // namespace sparsekit
