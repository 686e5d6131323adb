// Copyright 2026 The HetroFair Authors
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

#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <sstream>

#include "hetrofair/checkpoint.hpp"
#include "support/synth.hpp"

using namespace hetrofair;

namespace {

ModelParams sample_params(Mode mode, std::uint64_t seed) {
  ModelParams p;
  p.K = 2;
  p.d = 3;
  p.delta = 0.45;
  p.mode = mode;
  p.norm_exponent = 0.75;
  p.X = synth::random_embeddings(5, 3, seed);
  p.W.assign(2, RowVector::Zero(3));
  p.W[0] << 0.5, -1.5, 2.0;
  p.W[1] << -0.25, 0.0, 1.0;
  return p;
}

std::string serialized(const ModelParams& p) {
  std::ostringstream out(std::ios::binary);
  save_checkpoint(out, p);
  return out.str();
}

}  // namespace

TEST_CASE("checkpoint round-trips bit-exactly in every mode") {
  for (Mode mode : {Mode::kLightGcn, Mode::kFairAttention, Mode::kHetroFair}) {
    const ModelParams p = sample_params(mode, static_cast<std::uint64_t>(mode) + 3);
    std::istringstream in(serialized(p), std::ios::binary);
    const ModelParams q = load_checkpoint(in);
    CHECK(q.X == p.X);
    REQUIRE(q.W.size() == p.W.size());
    CHECK(q.W[0] == p.W[0]);
    CHECK(q.W[1] == p.W[1]);
    CHECK(q.delta == p.delta);
    CHECK(q.K == p.K);
    CHECK(q.d == p.d);
    CHECK(q.mode == p.mode);
    CHECK(q.norm_exponent == p.norm_exponent);
  }
}

TEST_CASE("checkpoint layout is exactly as documented") {
  ModelParams p;
  p.K = 1;
  p.d = 1;
  p.delta = 1.0;
  p.mode = Mode::kHetroFair;
  p.norm_exponent = 0.5;
  p.X = Matrix(2, 1);
  p.X << 1.0, -2.0;
  p.W.assign(1, RowVector::Zero(1));
  p.W[0] << 3.0;

  const std::string bytes = serialized(p);
  // magic + 3*u32 + (2 + 1 + 1 + 1) f64 + mode byte
  REQUIRE(bytes.size() == 4 + 12 + 8 * 5 + 1);
  CHECK(bytes.compare(0, 4, "HFR1") == 0);
  auto u32_at = [&](std::size_t off) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 3])) << 24);
  };
  auto f64_at = [&](std::size_t off) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[off + i])) << (8 * i);
    }
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  };
  CHECK(u32_at(4) == 2);   // rows
  CHECK(u32_at(8) == 1);   // d
  CHECK(u32_at(12) == 1);  // K
  CHECK(f64_at(16) == 1.0);
  CHECK(f64_at(24) == -2.0);
  CHECK(f64_at(32) == 3.0);   // W^(1)
  CHECK(f64_at(40) == 1.0);   // delta
  CHECK(static_cast<unsigned char>(bytes[48]) == 2);  // hetrofair tag
  CHECK(f64_at(49) == 0.5);   // norm exponent
}

TEST_CASE("checkpoint rejects wrong magic") {
  std::string bytes = serialized(sample_params(Mode::kLightGcn, 1));
  bytes[0] = 'X';
  std::istringstream in(bytes, std::ios::binary);
  CHECK_THROWS_WITH(load_checkpoint(in), Catch::Matchers::ContainsSubstring("magic"));
}

TEST_CASE("checkpoint rejects truncation at any point") {
  const std::string bytes = serialized(sample_params(Mode::kFairAttention, 2));
  for (std::size_t cut : {std::size_t(2), std::size_t(10), std::size_t(20), bytes.size() / 2,
                          bytes.size() - 1}) {
    std::istringstream in(bytes.substr(0, cut), std::ios::binary);
    CHECK_THROWS_AS(load_checkpoint(in), DataError);
  }
}

TEST_CASE("checkpoint rejects trailing bytes") {
  std::string bytes = serialized(sample_params(Mode::kHetroFair, 3));
  bytes.push_back('\0');
  std::istringstream in(bytes, std::ios::binary);
  CHECK_THROWS_WITH(load_checkpoint(in), Catch::Matchers::ContainsSubstring("trailing"));
}

TEST_CASE("checkpoint rejects unknown mode tags") {
  ModelParams p = sample_params(Mode::kHetroFair, 4);
  std::string bytes = serialized(p);
  bytes[bytes.size() - 9] = 7;  // mode byte sits just before the final f64
  std::istringstream in(bytes, std::ios::binary);
  CHECK_THROWS_WITH(load_checkpoint(in), Catch::Matchers::ContainsSubstring("mode tag"));
}

TEST_CASE("checkpoint files survive a disk round-trip") {
  synth::TempDir tmp("ckpt");
  const ModelParams p = sample_params(Mode::kHetroFair, 5);
  save_checkpoint(tmp.file("model.hfr"), p);
  const ModelParams q = load_checkpoint(tmp.file("model.hfr"));
  CHECK(q.X == p.X);
  CHECK(q.mode == Mode::kHetroFair);
}
