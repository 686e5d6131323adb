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

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "hetrofair/model.hpp"

namespace hetrofair {

// Checkpoint layout (all integers and floats little-endian):
//   "HFR1"
//   u32 num_rows, u32 d, u32 K
//   num_rows * d   f64   X, row-major
//   K * d          f64   W^(1)..W^(K)
//   f64 delta, u8 mode, f64 norm_exponent
// W is present in every mode so switching modes never invalidates a file.

namespace detail {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big,
              "mixed-endian platforms unsupported");

inline void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<unsigned char>(bits >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    return false;
  }
  v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
      (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  return true;
}

inline bool get_f64(std::istream& in, double& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    return false;
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  }
  std::memcpy(&v, &bits, 8);
  return true;
}

}  // namespace detail

inline void save_checkpoint(std::ostream& out, const ModelParams& params) {
  out.write("HFR1", 4);
  detail::put_u32(out, static_cast<std::uint32_t>(params.X.rows()));
  detail::put_u32(out, static_cast<std::uint32_t>(params.d));
  detail::put_u32(out, static_cast<std::uint32_t>(params.K));
  for (Eigen::Index r = 0; r < params.X.rows(); ++r) {
    for (int c = 0; c < params.d; ++c) {
      detail::put_f64(out, params.X(r, c));
    }
  }
  for (const auto& w : params.W) {
    for (int c = 0; c < params.d; ++c) {
      detail::put_f64(out, w[c]);
    }
  }
  detail::put_f64(out, params.delta);
  const unsigned char tag = static_cast<unsigned char>(params.mode);
  out.write(reinterpret_cast<const char*>(&tag), 1);
  detail::put_f64(out, params.norm_exponent);
  if (!out) {
    throw DataError("checkpoint: write failed");
  }
}

inline void save_checkpoint(const std::string& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("checkpoint: cannot open '" + path + "' for writing");
  }
  save_checkpoint(out, params);
}

inline ModelParams load_checkpoint(std::istream& in, const std::string& source = "<stream>") {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "HFR1", 4) != 0) {
    throw DataError("checkpoint '" + source + "': bad magic (not a checkpoint file?)");
  }
  std::uint32_t rows = 0, d = 0, K = 0;
  if (!detail::get_u32(in, rows) || !detail::get_u32(in, d) || !detail::get_u32(in, K)) {
    throw DataError("checkpoint '" + source + "': truncated header");
  }
  if (rows == 0 || d == 0 || K == 0) {
    throw DataError("checkpoint '" + source + "': invalid dimensions");
  }
  ModelParams p;
  p.d = static_cast<int>(d);
  p.K = static_cast<int>(K);
  p.X.resize(static_cast<Eigen::Index>(rows), p.d);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < d; ++c) {
      if (!detail::get_f64(in, p.X(r, c))) {
        throw DataError("checkpoint '" + source + "': truncated embedding table");
      }
    }
  }
  p.W.assign(p.K, RowVector(p.d));
  for (std::uint32_t k = 0; k < K; ++k) {
    for (std::uint32_t c = 0; c < d; ++c) {
      if (!detail::get_f64(in, p.W[k][c])) {
        throw DataError("checkpoint '" + source + "': truncated weight block");
      }
    }
  }
  unsigned char tag = 0;
  if (!detail::get_f64(in, p.delta) || !in.read(reinterpret_cast<char*>(&tag), 1) ||
      !detail::get_f64(in, p.norm_exponent)) {
    throw DataError("checkpoint '" + source + "': truncated trailer");
  }
  if (tag > 2) {
    throw DataError("checkpoint '" + source + "': unknown mode tag " + std::to_string(tag));
  }
  p.mode = static_cast<Mode>(tag);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("checkpoint '" + source + "': trailing data after trailer");
  }
  return p;
}

inline ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("checkpoint: cannot open '" + path + "'");
  }
  return load_checkpoint(in, path);
}

}  // namespace hetrofair
