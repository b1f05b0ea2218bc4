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

#include <filesystem>
#include <limits>

#include "sparsekit/container.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/infer.hpp"
#include "test_support.hpp"

using namespace sparsekit;
using namespace testing_support;

namespace {

// Hand-assembled little-endian bytes, independent of the library writer.
struct Bytes {
  std::string s;
  Bytes& str(std::string_view v) {
    s.append(v);
    return *this;
  }
  Bytes& u8(unsigned v) {
    s.push_back(static_cast<char>(v));
    return *this;
  }
  Bytes& u16(unsigned v) { return u8(v & 0xff).u8((v >> 8) & 0xff); }
  Bytes& u32(std::uint32_t v) { return u16(v & 0xffff).u16(v >> 16); }
  Bytes& f32(float v) { return u32(std::bit_cast<std::uint32_t>(v)); }
};

Bytes fc_2x2_header() {
  Bytes b;
  b.str("SPWT").u8(1).u32(1).u16(2).str("fc").u8(1).u8(2).u32(2).u32(2);
  return b;
}

}  // namespace

TEST_CASE("single fully connected layer parses from hand-built bytes") {
  auto b = fc_2x2_header();
  b.f32(1.0f).f32(-1.0f).f32(0.0f).f32(2.0f);
  const Model m = parse_model(b.s);
  REQUIRE(m.layer_count() == 1);
  CHECK(m.layers[0].name == "fc");
  CHECK(m.layers[0].kind == LayerKind::FullyConnected);
  CHECK(m.layers[0].shape == std::vector<std::uint32_t>{2, 2});
  CHECK(m.layers[0].data == std::vector<float>{1.0f, -1.0f, 0.0f, 2.0f});
  // and the writer reproduces the exact bytes
  CHECK(serialize_model(m) == b.s);
}

TEST_CASE("conv layer byte layout") {
  Model m;
  m.layers.push_back({"c", LayerKind::Conv, {1, 1, 1, 2}, {0.5f, -0.25f}});
  Bytes b;
  b.str("SPWT").u8(1).u32(1).u16(1).str("c").u8(0).u8(4).u32(1).u32(1).u32(1).u32(2);
  b.f32(0.5f).f32(-0.25f);
  CHECK(serialize_model(m) == b.s);
}

TEST_CASE("malformed containers") {
  SUBCASE("bad magic") {
    auto b = fc_2x2_header();
    b.f32(1).f32(2).f32(3).f32(4);
    b.s[0] = 'X';
    CHECK_THROWS_AS(parse_model(b.s), FormatError);
  }
  SUBCASE("bad version") {
    auto b = fc_2x2_header();
    b.f32(1).f32(2).f32(3).f32(4);
    b.s[4] = 2;
    CHECK_THROWS_AS(parse_model(b.s), FormatError);
  }
  SUBCASE("declared 4 floats, 3 stored") {
    auto b = fc_2x2_header();
    b.f32(1).f32(2).f32(3);
    CHECK_THROWS_AS(parse_model(b.s), IoError);
  }
  SUBCASE("truncated header") { CHECK_THROWS_AS(parse_model(std::string("SPWT\x01\x01", 6)), IoError); }
  SUBCASE("trailing bytes") {
    auto b = fc_2x2_header();
    b.f32(1).f32(2).f32(3).f32(4).u8(0);
    CHECK_THROWS_AS(parse_model(b.s), FormatError);
  }
  SUBCASE("NaN weight names the layer") {
    auto b = fc_2x2_header();
    b.f32(1).f32(std::numeric_limits<float>::quiet_NaN()).f32(3).f32(4);
    try {
      parse_model(b.s);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("'fc'") != std::string::npos);
    }
  }
  SUBCASE("infinite weight") {
    auto b = fc_2x2_header();
    b.f32(1).f32(std::numeric_limits<float>::infinity()).f32(3).f32(4);
    CHECK_THROWS_AS(parse_model(b.s), ValidationError);
  }
  SUBCASE("rank does not match kind") {
    Bytes b;
    b.str("SPWT").u8(1).u32(1).u16(1).str("x").u8(0).u8(2).u32(1).u32(1).f32(1);
    CHECK_THROWS_AS(parse_model(b.s), ValidationError);
  }
  SUBCASE("zero dimension") {
    Bytes b;
    b.str("SPWT").u8(1).u32(1).u16(1).str("x").u8(1).u8(2).u32(0).u32(1);
    CHECK_THROWS_AS(parse_model(b.s), ValidationError);
  }
  SUBCASE("empty model") {
    Bytes b;
    b.str("SPWT").u8(1).u32(0);
    CHECK_THROWS_AS(parse_model(b.s), ValidationError);
  }
}

TEST_CASE("writer validates before touching disk") {
  const auto path = temp_path("nan_model.spwt");
  std::filesystem::remove(path);

  Model nan_model;
  nan_model.layers.push_back(
      {"a", LayerKind::FullyConnected, {1, 2}, {1.0f, std::numeric_limits<float>::quiet_NaN()}});
  CHECK_THROWS_AS(write_model(nan_model, path), ValidationError);
  CHECK_FALSE(std::filesystem::exists(path));

  CHECK_THROWS_AS(write_model(Model{}, path), ValidationError);
  CHECK_FALSE(std::filesystem::exists(path));

  Model dup;
  dup.layers.push_back({"a", LayerKind::FullyConnected, {1, 1}, {1.0f}});
  dup.layers.push_back({"a", LayerKind::FullyConnected, {1, 1}, {2.0f}});
  CHECK_THROWS_AS(write_model(dup, path), ValidationError);

  Model len_mismatch;
  len_mismatch.layers.push_back({"a", LayerKind::FullyConnected, {2, 2}, {1.0f}});
  CHECK_THROWS_AS(write_model(len_mismatch, path), ValidationError);
}

TEST_CASE("unwritable path is an I/O error") {
  Model m;
  m.layers.push_back({"a", LayerKind::FullyConnected, {1, 1}, {1.0f}});
  CHECK_THROWS_AS(write_model(m, "/nonexistent_dir/x/y.spwt"), IoError);
  CHECK_THROWS_AS(read_model("/nonexistent_dir/x/y.spwt"), IoError);
}

TEST_CASE("property: random models round-trip bit-identically through files") {
  std::mt19937 rng(1234);
  const auto path = temp_path("roundtrip.spwt");
  for (int iter = 0; iter < 200; ++iter) {
    const Model m = random_model(rng);
    write_model(m, path);
    const Model back = read_model(path);
    REQUIRE(bit_identical(m, back));
    // loading never alters values: re-serialized bytes equal the file
    CHECK(serialize_model(back) == read_file_bytes(path));
  }
}

TEST_CASE("SPDS layout and round trip") {
  Dataset d;
  d.input_shape = {2};
  d.class_count = 3;
  d.inputs = {1.0f, 2.0f, -3.0f, 0.5f};
  d.labels = {2, 0};
  Bytes b;
  b.str("SPDS").u8(1).u32(2).u8(1).u32(2).u32(3);
  b.f32(1.0f).f32(2.0f).u16(2).f32(-3.0f).f32(0.5f).u16(0);
  CHECK(serialize_dataset(d) == b.s);

  const auto back = parse_dataset(b.s);
  CHECK(back.input_shape == d.input_shape);
  CHECK(back.class_count == 3);
  CHECK(back.inputs == d.inputs);
  CHECK(back.labels == d.labels);

  auto bad_label = b;
  bad_label.s[b.s.size() - 2] = 3;
  CHECK_THROWS_AS(parse_dataset(bad_label.s), ValidationError);

  auto truncated = b.s.substr(0, b.s.size() - 1);
  CHECK_THROWS_AS(parse_dataset(truncated), IoError);

  auto magic = b.s;
  magic[3] = 'T';
  CHECK_THROWS_AS(parse_dataset(magic), FormatError);
}

TEST_CASE("property: random datasets round-trip bit-identically") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<std::uint32_t> dim(1, 5);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  const auto path = temp_path("roundtrip.spds");
  for (int iter = 0; iter < 100; ++iter) {
    Dataset d;
    d.input_shape.resize(dim(rng) % 3 + 1);
    for (auto& x : d.input_shape) x = dim(rng);
    d.class_count = dim(rng);
    const std::size_t n = dim(rng) * 3;
    d.inputs.resize(n * d.sample_size());
    for (auto& x : d.inputs) x = normal(rng);
    for (std::size_t i = 0; i < n; ++i) {
      d.labels.push_back(static_cast<std::uint16_t>(rng() % d.class_count));
    }
    write_dataset(d, path);
    const auto back = read_dataset(path);
    REQUIRE(back.input_shape == d.input_shape);
    REQUIRE(back.labels == d.labels);
    REQUIRE(std::memcmp(back.inputs.data(), d.inputs.data(), d.inputs.size() * 4) == 0);
    CHECK(serialize_dataset(back) == read_file_bytes(path));
  }
}

TEST_CASE("committed fixtures load") {
  const auto lenet = read_model(fixture("lenet.spwt"));
  CHECK(lenet.layer_count() == 4);
  CHECK(lenet.layers.front().kind == LayerKind::Conv);
  CHECK(lenet.layers.back().kind == LayerKind::FullyConnected);
  const auto data = read_dataset(fixture("lenet.spds"));
  CHECK(data.size() == 600);
  CHECK(data.class_count == 4);
}
