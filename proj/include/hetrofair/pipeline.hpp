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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hetrofair/checkpoint.hpp"
#include "hetrofair/config.hpp"
#include "hetrofair/evaluate.hpp"
#include "hetrofair/kcore.hpp"
#include "hetrofair/labels.hpp"
#include "hetrofair/sha1.hpp"
#include "hetrofair/trainer.hpp"

namespace hetrofair {

// Fixed-width float formatting shared by every machine-readable output, so
// that identical runs produce identical bytes.
inline std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

inline std::string format_value(const std::optional<double>& v) {
  return v.has_value() ? format_value(*v) : "nan";
}

struct Dataset {
  std::vector<Interaction> interactions;  // deduplicated, k-core filtered
  InteractionGraph graph;                 // full graph over those interactions
  LabelTable labels;
  bool has_labels = false;
  std::size_t raw_count = 0;  // interactions before the k-core filter
};

inline Dataset load_dataset(const RunConfig& config) {
  const TableFormat fmt = TableFormat::parse(config.format, config.columns);
  Dataset ds;
  auto loaded = load_interactions(config.input, fmt);
  ds.raw_count = loaded.size();
  ds.interactions = k_core_filter(loaded, config.k_core);
  ds.graph = build_graph(ds.interactions);
  ds.labels = make_label_table(ds.graph, ds.interactions);
  for (const auto& label : ds.labels.item_label) {
    if (!label.empty()) {
      ds.has_labels = true;
      break;
    }
  }
  return ds;
}

inline DatasetSplit make_split(const Dataset& ds, const RunConfig& config) {
  return split_interactions(ds.graph, config.ratios(), sub_seed(config.seed, SeedRole::kSplit));
}

inline ModelParams init_params(const InteractionGraph& graph, const RunConfig& config) {
  return ModelParams::create(graph, config.layers, config.dim, config.delta, config.parsed_mode(),
                             parse_init_scheme(config.init), parse_init_scheme(config.weight_init),
                             sub_seed(config.seed, SeedRole::kInit),
                             sub_seed(config.seed, SeedRole::kWeightInit), config.norm_exponent);
}

inline TrainConfig train_config_from(const RunConfig& config) {
  TrainConfig tc;
  tc.learning_rate = config.learning_rate;
  tc.reg_beta = config.reg_beta;
  tc.batch_size = config.batch_size;
  tc.max_epochs = config.max_epochs;
  tc.patience = config.patience;
  tc.sampling_seed = sub_seed(config.seed, SeedRole::kSampling);
  tc.eval_every = config.eval_every;
  tc.optimizer = parse_optimizer(config.optimizer);
  tc.eval_n = config.top_n;
  tc.threads = config.threads;
  tc.freeze_weights = config.freeze_weights;
  return tc;
}

// A run is identified by its semantic configuration plus the content of its
// input data. Location-only keys (paths, thread count) do not change any
// result and are excluded, so re-running elsewhere reproduces the same id.
inline std::string run_id(const RunConfig& config, const std::string& input_sha1) {
  std::ostringstream os;
  for (const auto& [key, value] : config.as_map()) {
    if (key == "input" || key == "out" || key == "threads") {
      continue;
    }
    os << key << '=' << value << '\n';
  }
  os << "input_sha1=" << input_sha1 << '\n';
  Sha1 sha;
  sha.update(os.str());
  return sha.hex_digest().substr(0, 12);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read '" + path + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write '" + path + "'");
  }
  out << content;
}

inline std::string metrics_csv(const std::string& id, const std::vector<EvalReport>& reports) {
  std::ostringstream os;
  os << "run_id,stratum,metric,value\n";
  for (const auto& r : reports) {
    os << id << ',' << r.stratum << ",ndcg," << format_value(r.ndcg) << '\n';
    os << id << ',' << r.stratum << ",mrr," << format_value(r.mrr) << '\n';
    os << id << ',' << r.stratum << ",map," << format_value(r.map) << '\n';
    os << id << ',' << r.stratum << ",pru," << format_value(r.pru) << '\n';
    os << id << ',' << r.stratum << ",pri," << format_value(r.pri) << '\n';
  }
  return os.str();
}

inline std::string report_text(const EvalReport& r) {
  std::ostringstream os;
  os << "stratum=" << r.stratum << '\n'
     << "n=" << r.n << '\n'
     << "users_evaluated=" << r.users_evaluated << '\n'
     << "ndcg=" << format_value(r.ndcg) << '\n'
     << "mrr=" << format_value(r.mrr) << '\n'
     << "map=" << format_value(r.map) << '\n'
     << "pru=" << format_value(r.pru) << '\n'
     << "pri=" << format_value(r.pri) << '\n';
  return os.str();
}

inline std::string stats_text(const Dataset& ds, const RunConfig& config) {
  const auto homophily = ds.has_labels ? homophily_score(ds.graph, ds.labels) : std::nullopt;
  std::ostringstream os;
  os << "num_users=" << ds.graph.num_users << '\n'
     << "num_items=" << ds.graph.num_items << '\n'
     << "num_interactions=" << ds.graph.num_edges() << '\n'
     << "raw_interactions=" << ds.raw_count << '\n'
     << "k_core=" << config.k_core << '\n'
     << "density=" << format_value(ds.graph.density()) << '\n'
     << "homophily=" << (homophily.has_value() ? format_value(*homophily) : std::string("N/A"))
     << '\n';
  return os.str();
}

}  // namespace hetrofair
