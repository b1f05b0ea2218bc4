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

#include <limits>

#include <fmt/format.h>

#include "byte_io.hpp"
#include "sparsekit/container.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/infer.hpp"

namespace sparsekit {

namespace {
constexpr std::string_view kDatasetMagic = "SPDS";
constexpr std::uint8_t kDatasetVersion = 1;
}  // namespace

void Dataset::validate() const {
  if (input_shape.empty() || input_shape.size() > 255) {
    throw ValidationError(fmt::format("dataset rank {} out of range", input_shape.size()));
  }
  for (auto d : input_shape) {
    if (d == 0) throw ValidationError("dataset has a zero-sized input dimension");
  }
  if (class_count == 0) throw ValidationError("dataset declares zero classes");
  if (inputs.size() != labels.size() * sample_size()) {
    throw ValidationError(fmt::format("dataset holds {} floats for {} samples of size {}",
                                      inputs.size(), labels.size(), sample_size()));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_count) {
      throw ValidationError(fmt::format("sample {}: label {} >= class count {}", i, labels[i],
                                        class_count));
    }
  }
}

std::string serialize_dataset(const Dataset& data) {
  data.validate();
  if (data.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("too many samples for SPDS");
  }
  detail::ByteWriter w;
  w.raw(kDatasetMagic);
  w.u8(kDatasetVersion);
  w.u32(static_cast<std::uint32_t>(data.size()));
  w.u8(static_cast<std::uint8_t>(data.input_shape.size()));
  for (auto d : data.input_shape) w.u32(d);
  w.u32(data.class_count);
  for (std::size_t i = 0; i < data.size(); ++i) {
    w.f32s(data.input(i));
    w.u16(data.labels[i]);
  }
  return w.take();
}

Dataset parse_dataset(std::string_view bytes) {
  detail::ByteReader r(bytes);
  if (r.remaining() < kDatasetMagic.size() || r.raw(kDatasetMagic.size()) != kDatasetMagic) {
    throw FormatError("not an SPDS dataset (bad magic)");
  }
  if (auto v = r.u8(); v != kDatasetVersion) {
    throw FormatError(fmt::format("unsupported SPDS version {}", v));
  }
  Dataset d;
  const std::uint32_t n = r.u32();
  const std::uint8_t rank = r.u8();
  d.input_shape.resize(rank);
  for (auto& dim : d.input_shape) dim = r.u32();
  d.class_count = r.u32();
  const std::size_t per = element_count(d.input_shape);
  // each sample needs per * 4 + 2 bytes
  if (rank == 0 || n > r.remaining() / (per * 4 + 2)) {
    throw IoError("SPDS payload truncated");
  }
  d.inputs.resize(static_cast<std::size_t>(n) * per);
  d.labels.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    r.f32s(std::span<float>(d.inputs).subspan(static_cast<std::size_t>(i) * per, per));
    d.labels[i] = r.u16();
  }
  if (r.remaining() != 0) {
    throw FormatError(fmt::format("{} trailing bytes after last sample", r.remaining()));
  }
  d.validate();
  return d;
}

Dataset read_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_file_bytes(path));
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_dataset(data));
}

}  // namespace sparsekit
