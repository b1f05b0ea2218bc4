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

#include <filesystem>
#include <string>
#include <string_view>

#include "sparsekit/model.hpp"

namespace sparsekit {

/// SPWT weight container, little-endian:
///
///   "SPWT" | u8 version=1 | u32 layer_count
///   per layer: u16 name_len | name bytes (UTF-8) | u8 kind (0 conv, 1 fc)
///              | u8 rank (2 or 4) | rank x u32 dims | prod(dims) x f32
///
/// Trailing bytes after the last layer are a format error.
inline constexpr std::string_view kModelMagic = "SPWT";
inline constexpr std::uint8_t kModelVersion = 1;

std::string serialize_model(const Model& model);
Model parse_model(std::string_view bytes);

Model read_model(const std::filesystem::path& path);
void write_model(const Model& model, const std::filesystem::path& path);

/// Whole-file helpers used by every codec.
std::string read_file_bytes(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames over `path` on success, so a
/// failed write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace sparsekit
