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

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hetrofair/common.hpp"
#include "hetrofair/init.hpp"
#include "hetrofair/model.hpp"
#include "hetrofair/optimizer.hpp"
#include "hetrofair/split.hpp"

namespace hetrofair {

// Everything a run needs, with defaults matching the reference experimental
// setup where one is stated (embedding dimension 128, learning rate 5e-4,
// regularization 1e-4, batch size 2048, patience 15, N=20, 10-core, 80/10/10
// split).
struct RunConfig {
  // data
  std::string input;
  std::string format = "tsv";
  std::string columns = "user,item,label";
  int k_core = 10;
  double train_ratio = 0.8;
  double valid_ratio = 0.1;
  double test_ratio = 0.1;
  std::uint64_t seed = 42;  // master seed; fans out per role
  // model
  std::string mode = "hetrofair";
  int layers = 4;        // K
  int dim = 128;         // d
  double delta = 0.5;
  double norm_exponent = 0.5;
  std::string init = "xavier";
  std::string weight_init = "xavier";
  // training
  double learning_rate = 5e-4;
  double reg_beta = 1e-4;
  int batch_size = 2048;
  int max_epochs = 200;
  int patience = 15;
  int eval_every = 1;
  std::string optimizer = "adam";
  bool freeze_weights = false;
  // evaluation
  int top_n = 20;
  double head_fraction = 0.2;
  // run
  std::string out_dir = "run";
  int threads = 1;

  Mode parsed_mode() const { return parse_mode(mode); }
  SplitRatios ratios() const { return SplitRatios{train_ratio, valid_ratio, test_ratio}; }

  // All validation failures are reported together.
  std::vector<std::string> validation_errors() const {
    std::vector<std::string> errors;
    auto check = [&](bool ok, const std::string& message) {
      if (!ok) {
        errors.push_back(message);
      }
    };
    check(!input.empty(), "input: dataset path is required");
    check(format == "csv" || format == "tsv", "format: expected csv or tsv");
    try {
      TableFormat::parse(format == "csv" ? "csv" : "tsv", columns);
    } catch (const ValidationError& e) {
      errors.emplace_back(e.what());
    }
    check(k_core >= 1, "k_core: must be >= 1");
    check(train_ratio > 0.0 && valid_ratio >= 0.0 && test_ratio >= 0.0 &&
              std::abs(train_ratio + valid_ratio + test_ratio - 1.0) <= 1e-9,
          "ratios: must be nonnegative, train > 0, and sum to 1");
    try {
      parse_mode(mode);
    } catch (const ValidationError& e) {
      errors.emplace_back(e.what());
    }
    check(layers >= 1, "layers: must be >= 1");
    check(dim >= 1, "dim: must be >= 1");
    check(delta > 0.0 && delta <= 1.0, "delta: must be in (0, 1]");
    try {
      parse_init_scheme(init);
    } catch (const ValidationError& e) {
      errors.emplace_back(e.what());
    }
    try {
      parse_init_scheme(weight_init);
    } catch (const ValidationError& e) {
      errors.emplace_back(e.what());
    }
    check(learning_rate >= 0.0, "learning_rate: must be >= 0");
    check(reg_beta >= 0.0, "reg_beta: must be >= 0");
    check(batch_size >= 1, "batch_size: must be >= 1");
    check(max_epochs >= 1, "max_epochs: must be >= 1");
    check(patience >= 1, "patience: must be >= 1");
    check(eval_every >= 1, "eval_every: must be >= 1");
    try {
      parse_optimizer(optimizer);
    } catch (const ValidationError& e) {
      errors.emplace_back(e.what());
    }
    check(top_n >= 1, "n: must be >= 1");
    check(head_fraction > 0.0 && head_fraction <= 1.0, "head_fraction: must be in (0, 1]");
    check(threads >= 1, "threads: must be >= 1");
    return errors;
  }

  void validate_or_throw() const {
    const auto errors = validation_errors();
    if (!errors.empty()) {
      std::string all = "invalid configuration:";
      for (const auto& e : errors) {
        all += "\n  - " + e;
      }
      throw ValidationError(all);
    }
  }

  // Ordered key=value view. Keys listed here are also the config-file keys.
  std::map<std::string, std::string> as_map() const {
    std::map<std::string, std::string> m;
    auto num = [](double v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      return os.str();
    };
    m["input"] = input;
    m["format"] = format;
    m["columns"] = columns;
    m["k_core"] = std::to_string(k_core);
    m["train_ratio"] = num(train_ratio);
    m["valid_ratio"] = num(valid_ratio);
    m["test_ratio"] = num(test_ratio);
    m["seed"] = std::to_string(seed);
    m["mode"] = mode;
    m["layers"] = std::to_string(layers);
    m["dim"] = std::to_string(dim);
    m["delta"] = num(delta);
    m["norm_exponent"] = num(norm_exponent);
    m["init"] = init;
    m["weight_init"] = weight_init;
    m["learning_rate"] = num(learning_rate);
    m["reg_beta"] = num(reg_beta);
    m["batch_size"] = std::to_string(batch_size);
    m["max_epochs"] = std::to_string(max_epochs);
    m["patience"] = std::to_string(patience);
    m["eval_every"] = std::to_string(eval_every);
    m["optimizer"] = optimizer;
    m["freeze_weights"] = freeze_weights ? "true" : "false";
    m["n"] = std::to_string(top_n);
    m["head_fraction"] = num(head_fraction);
    m["out"] = out_dir;
    m["threads"] = std::to_string(threads);
    return m;
  }

  void set(const std::string& key, const std::string& value) {
    auto to_int = [&](const std::string& v) {
      try {
        return std::stoi(v);
      } catch (...) {
        throw ValidationError("config: bad integer for " + key + ": '" + v + "'");
      }
    };
    auto to_double = [&](const std::string& v) {
      try {
        return std::stod(v);
      } catch (...) {
        throw ValidationError("config: bad number for " + key + ": '" + v + "'");
      }
    };
    if (key == "input") input = value;
    else if (key == "format") format = value;
    else if (key == "columns") columns = value;
    else if (key == "k_core") k_core = to_int(value);
    else if (key == "train_ratio") train_ratio = to_double(value);
    else if (key == "valid_ratio") valid_ratio = to_double(value);
    else if (key == "test_ratio") test_ratio = to_double(value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "mode") mode = value;
    else if (key == "layers") layers = to_int(value);
    else if (key == "dim") dim = to_int(value);
    else if (key == "delta") delta = to_double(value);
    else if (key == "norm_exponent") norm_exponent = to_double(value);
    else if (key == "init") init = value;
    else if (key == "weight_init") weight_init = value;
    else if (key == "learning_rate") learning_rate = to_double(value);
    else if (key == "reg_beta") reg_beta = to_double(value);
    else if (key == "batch_size") batch_size = to_int(value);
    else if (key == "max_epochs") max_epochs = to_int(value);
    else if (key == "patience") patience = to_int(value);
    else if (key == "eval_every") eval_every = to_int(value);
    else if (key == "optimizer") optimizer = value;
    else if (key == "freeze_weights") freeze_weights = (value == "true" || value == "1");
    else if (key == "n") top_n = to_int(value);
    else if (key == "head_fraction") head_fraction = to_double(value);
    else if (key == "out") out_dir = value;
    else if (key == "threads") threads = to_int(value);
    else throw ValidationError("config: unknown key '" + key + "'");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace detail

// Flat key=value file, one pair per line, '#' starts a comment.
inline std::map<std::string, std::string> parse_config_file(std::istream& in,
                                                            const std::string& source) {
  std::map<std::string, std::string> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') {
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": expected key=value");
    }
    pairs[detail::trim(t.substr(0, eq))] = detail::trim(t.substr(eq + 1));
  }
  return pairs;
}

inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("config: cannot open '" + path + "'");
  }
  return parse_config_file(in, path);
}

inline void write_config(std::ostream& out, const RunConfig& config) {
  for (const auto& [key, value] : config.as_map()) {
    out << key << '=' << value << '\n';
  }
}

}  // namespace hetrofair
