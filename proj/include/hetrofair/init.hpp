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

#include <cmath>
#include <cstdint>
#include <string>

#include "hetrofair/common.hpp"
#include "hetrofair/rng.hpp"

namespace hetrofair {

enum class InitScheme { kXavier, kZeros, kNormal };

inline InitScheme parse_init_scheme(const std::string& name) {
  if (name == "xavier") return InitScheme::kXavier;
  if (name == "zeros") return InitScheme::kZeros;
  if (name == "normal") return InitScheme::kNormal;
  throw ValidationError("unknown init scheme '" + name + "' (expected xavier, zeros or normal)");
}

inline const char* init_scheme_name(InitScheme s) {
  switch (s) {
    case InitScheme::kXavier: return "xavier";
    case InitScheme::kZeros: return "zeros";
    case InitScheme::kNormal: return "normal";
  }
  return "?";
}

// Entries i.i.d. uniform on [-b, b] with b = sqrt(6 / (rows + cols)).
inline Matrix xavier_init(int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) {
    throw ValidationError("xavier_init: rows and cols must be >= 1");
  }
  const double bound = std::sqrt(6.0 / (rows + cols));
  Rng rng(seed);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = rng.uniform(-bound, bound);
    }
  }
  return m;
}

// Alternative schemes used by the weight-initialization ablation:
// all-zeros or normal(0, 0.01).
inline Matrix alt_init(int rows, int cols, InitScheme scheme, std::uint64_t seed) {
  if (rows < 1 || cols < 1) {
    throw ValidationError("alt_init: rows and cols must be >= 1");
  }
  switch (scheme) {
    case InitScheme::kXavier:
      return xavier_init(rows, cols, seed);
    case InitScheme::kZeros:
      return Matrix::Zero(rows, cols);
    case InitScheme::kNormal: {
      Rng rng(seed);
      Matrix m(rows, cols);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          m(r, c) = rng.normal(0.0, 0.01);
        }
      }
      return m;
    }
  }
  throw ValidationError("alt_init: unknown scheme");
}

}  // namespace hetrofair
