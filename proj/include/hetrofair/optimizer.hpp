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
#include <string>
#include <vector>

#include "hetrofair/loss.hpp"

namespace hetrofair {

enum class OptimizerKind { kSgd, kAdam };

inline OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw ValidationError("unknown optimizer '" + name + "' (expected sgd or adam)");
}

inline const char* optimizer_name(OptimizerKind k) {
  return k == OptimizerKind::kSgd ? "sgd" : "adam";
}

// SGD applies exactly params -= lr * grad. Adam uses the fixed constants
// beta1=0.9, beta2=0.999, eps=1e-8 with bias correction.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate, const ModelParams& params)
      : kind_(kind), lr_(learning_rate) {
    if (kind_ == OptimizerKind::kAdam) {
      m_x_ = Matrix::Zero(params.X.rows(), params.X.cols());
      v_x_ = Matrix::Zero(params.X.rows(), params.X.cols());
      m_w_.assign(params.K, RowVector::Zero(params.d));
      v_w_.assign(params.K, RowVector::Zero(params.d));
    }
  }

  void step(ModelParams& params, const GradientSet& grads, bool update_weights = true) {
    if (kind_ == OptimizerKind::kSgd) {
      params.X -= lr_ * grads.dX;
      if (update_weights) {
        for (int k = 0; k < params.K; ++k) {
          params.W[k] -= lr_ * grads.dW[k];
        }
      }
      return;
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, t_);
    const double bc2 = 1.0 - std::pow(kBeta2, t_);
    m_x_ = kBeta1 * m_x_ + (1.0 - kBeta1) * grads.dX;
    v_x_.array() = kBeta2 * v_x_.array() + (1.0 - kBeta2) * grads.dX.array().square();
    params.X.array() -=
        lr_ * (m_x_.array() / bc1) / ((v_x_.array() / bc2).sqrt() + kEps);
    if (update_weights) {
      for (int k = 0; k < params.K; ++k) {
        m_w_[k] = kBeta1 * m_w_[k] + (1.0 - kBeta1) * grads.dW[k];
        v_w_[k].array() = kBeta2 * v_w_[k].array() + (1.0 - kBeta2) * grads.dW[k].array().square();
        params.W[k].array() -=
            lr_ * (m_w_[k].array() / bc1) / ((v_w_[k].array() / bc2).sqrt() + kEps);
      }
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  OptimizerKind kind_;
  double lr_;
  long t_ = 0;
  Matrix m_x_, v_x_;
  std::vector<RowVector> m_w_, v_w_;
};

}  // namespace hetrofair
