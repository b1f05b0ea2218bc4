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

#include "sparsekit/container.hpp"

#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <system_error>

#include <fmt/format.h>

#include "byte_io.hpp"
#include "sparsekit/errors.hpp"

namespace sparsekit {

namespace fs = std::filesystem;

std::string serialize_model(const Model& model) {
  model.validate();
  if (model.layers.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("too many layers for the container");
  }
  detail::ByteWriter w;
  w.raw(kModelMagic);
  w.u8(kModelVersion);
  w.u32(static_cast<std::uint32_t>(model.layers.size()));
  for (const auto& layer : model.layers) {
    if (layer.name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ValidationError(fmt::format("layer name too long ({} bytes)", layer.name.size()));
    }
    w.u16(static_cast<std::uint16_t>(layer.name.size()));
    w.raw(layer.name);
    w.u8(static_cast<std::uint8_t>(layer.kind));
    w.u8(static_cast<std::uint8_t>(layer.shape.size()));
    for (auto d : layer.shape) w.u32(d);
    w.f32s(layer.data);
  }
  return w.take();
}

Model parse_model(std::string_view bytes) {
  detail::ByteReader r(bytes);
  if (r.remaining() < kModelMagic.size() || r.raw(kModelMagic.size()) != kModelMagic) {
    throw FormatError("not an SPWT container (bad magic)");
  }
  if (auto v = r.u8(); v != kModelVersion) {
    throw FormatError(fmt::format("unsupported SPWT version {}", v));
  }
  const std::uint32_t count = r.u32();
  Model model;
  for (std::uint32_t i = 0; i < count; ++i) {
    LayerTensor layer;
    const auto name_len = r.u16();
    layer.name = std::string(r.raw(name_len));
    const auto kind = r.u8();
    if (kind > 1) throw FormatError(fmt::format("layer '{}': unknown kind {}", layer.name, kind));
    layer.kind = static_cast<LayerKind>(kind);
    const auto rank = r.u8();
    if (rank != 2 && rank != 4) {
      throw ValidationError(fmt::format("layer '{}': rank {} is neither 2 nor 4", layer.name, rank));
    }
    layer.shape.resize(rank);
    std::size_t n = 1;
    bool fits = true;
    for (auto& d : layer.shape) {
      d = r.u32();
      if (d != 0 && n > r.remaining() / d) fits = false;
      n *= d;
    }
    if (!fits || n > r.remaining() / 4) {
      throw IoError(fmt::format("layer '{}': truncated payload", layer.name));
    }
    layer.data.resize(n);
    r.f32s(layer.data);
    model.layers.push_back(std::move(layer));
  }
  if (r.remaining() != 0) {
    throw FormatError(fmt::format("{} trailing bytes after last layer", r.remaining()));
  }
  model.validate();
  return model;
}

Model read_model(const fs::path& path) { return parse_model(read_file_bytes(path)); }

void write_model(const Model& model, const fs::path& path) {
  // serialize_model validates, so nothing touches disk for an invalid model
  write_file_atomic(path, serialize_model(model));
}

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(fmt::format("read error on '{}'", path.string()));
  return bytes;
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  std::random_device rd;
  fs::path tmp = path;
  tmp += fmt::format(".tmp{:08x}", rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError(fmt::format("write error on '{}'", path.string()));
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(fmt::format("cannot move output into place at '{}'", path.string()));
  }
}

}  // namespace sparsekit
