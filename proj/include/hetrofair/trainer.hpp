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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hetrofair/evaluate.hpp"
#include "hetrofair/optimizer.hpp"
#include "hetrofair/sampler.hpp"

namespace hetrofair {

struct TrainConfig {
  double learning_rate = 5e-4;
  double reg_beta = 1e-4;
  int batch_size = 2048;
  int max_epochs = 200;
  int patience = 15;  // evaluations without improvement before stopping
  std::uint64_t sampling_seed = 0;
  int eval_every = 1;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  int eval_n = 20;  // cutoff for the validation metric
  int threads = 1;
  bool freeze_weights = false;  // keep W^(k) fixed (ablation / parity runs)
  std::ostream* live_log = nullptr;
  // Test hook: replaces the validation metric computation.
  std::function<double(const Matrix& Z)> validation_metric_override;

  void validate() const {
    if (learning_rate < 0.0) throw ValidationError("train: learning_rate must be >= 0");
    if (reg_beta < 0.0) throw ValidationError("train: reg_beta must be >= 0");
    if (batch_size < 1) throw ValidationError("train: batch_size must be >= 1");
    if (max_epochs < 1) throw ValidationError("train: max_epochs must be >= 1");
    if (patience < 1) throw ValidationError("train: patience must be >= 1");
    if (eval_every < 1) throw ValidationError("train: eval_every must be >= 1");
    if (eval_n < 1) throw ValidationError("train: eval cutoff must be >= 1");
    if (threads < 1) throw ValidationError("train: threads must be >= 1");
  }
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double val_ndcg = std::numeric_limits<double>::quiet_NaN();
  long long elapsed_ms = 0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  int best_epoch = -1;
  double best_val = std::numeric_limits<double>::quiet_NaN();
  bool early_stopped = false;

  static std::string format_line(const EpochRecord& r) {
    std::ostringstream os;
    os << "epoch=" << r.epoch << " loss=" << r.loss << " val_ndcg@20=" << r.val_ndcg
       << " elapsed_ms=" << r.elapsed_ms;
    return os.str();
  }
};

// One epoch = one shuffled pass over all train edges, partitioned into
// batches; each batch runs a full forward/backward through the propagation
// stack and one optimizer step on summed gradients. Every eval_every epochs
// the validation NDCG is computed; training stops after `patience`
// evaluations without improvement and the best-validation parameters are
// returned in `params`.
inline TrainLog fit(const DatasetSplit& split, ModelParams& params, const TrainConfig& config) {
  config.validate();
  params.check_consistent(split.train_graph);

  const EdgeSet edges = make_edge_set(split.train_graph, params.norm_exponent);
  BatchSampler sampler(split, config.sampling_seed);
  Optimizer optimizer(config.optimizer, config.learning_rate, params);

  bool have_validation = false;
  for (const auto& v : split.valid_items) {
    if (!v.empty()) {
      have_validation = true;
      break;
    }
  }
  if (config.validation_metric_override) {
    have_validation = true;
  }

  TrainLog log;
  ModelParams best = params;
  int evals_since_best = 0;
  detail::TrainWorkspace workspace;  // reused across batches

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    sampler.start_epoch();
    double loss_sum = 0.0;
    long triples_seen = 0;
    int batches = 0;
    while (!sampler.epoch_done()) {
      const std::vector<BPRTriple> batch = sampler.sample_batch(config.batch_size);
      double batch_loss = 0.0;
      const GradientSet grads = bpr_gradients(params, edges, batch, config.reg_beta,
                                              config.threads, &batch_loss, &workspace);
      if (!std::isfinite(batch_loss)) {
        throw DataError("train: non-finite loss at epoch " + std::to_string(epoch) +
                        " batch " + std::to_string(batches + 1) +
                        " (diverged; consider a lower learning rate)");
      }
      optimizer.step(params, grads, !config.freeze_weights);
      loss_sum += batch_loss;
      triples_seen += static_cast<long>(batch.size());
      ++batches;
    }
    if (!params.X.allFinite()) {
      throw DataError("train: non-finite parameters after epoch " + std::to_string(epoch));
    }

    EpochRecord record;
    record.epoch = epoch;
    record.loss = loss_sum / static_cast<double>(triples_seen);  // per-triple objective

    if (have_validation && epoch % config.eval_every == 0) {
      const GenerationResult gen = fair_embedding_generation(
          edges, params, /*retain_for_backward=*/false, config.threads);
      double val = 0.0;
      if (config.validation_metric_override) {
        val = config.validation_metric_override(gen.Z);
      } else {
        const EvalReport report = evaluate_split(gen.Z, split, config.eval_n,
                                                 EvalTarget::kValidation, config.threads);
        val = report.ndcg.value_or(0.0);
      }
      record.val_ndcg = val;
      if (!(val <= log.best_val)) {  // first evaluation or strict improvement
        log.best_val = val;
        log.best_epoch = epoch;
        best = params;
        evals_since_best = 0;
      } else {
        ++evals_since_best;
      }
    }

    record.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - epoch_start)
                            .count();
    log.epochs.push_back(record);
    if (config.live_log != nullptr) {
      (*config.live_log) << TrainLog::format_line(record) << '\n';
    }
    if (have_validation && evals_since_best >= config.patience) {
      log.early_stopped = true;
      break;
    }
  }

  if (log.best_epoch > 0) {
    params = best;
  } else {
    log.best_epoch = config.max_epochs;
  }
  return log;
}

}  // namespace hetrofair
