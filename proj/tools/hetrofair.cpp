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

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hetrofair/hetrofair.hpp"

namespace fs = std::filesystem;
using namespace hetrofair;

namespace {

// Bridges CLI flags, an optional key=value config file and the built-in
// defaults. Precedence: command-line flag > config file > default.
struct ConfigBinding {
  RunConfig config;
  std::string config_path;
  std::string ratios_text;
  std::map<std::string, CLI::Option*> bound;

  void add_data_options(CLI::App* cmd) {
    bound["input"] = cmd->add_option("--input", config.input, "Interaction file (one event per line)");
    bound["format"] = cmd->add_option("--format", config.format, "Input delimiter: csv or tsv")
                          ->capture_default_str();
    bound["columns"] =
        cmd->add_option("--columns", config.columns,
                        "Declared column order, e.g. user,item,label,timestamp ('_' skips)")
            ->capture_default_str();
    bound["k_core"] = cmd->add_option("--k-core", config.k_core, "Minimum-degree core filter")
                          ->capture_default_str();
    bound["ratios"] = cmd->add_option("--ratios", ratios_text,
                                      "train,valid,test split ratios (default 0.8,0.1,0.1)");
    bound["seed"] =
        cmd->add_option("--seed", config.seed, "Master seed; split/init/sampling seeds derive from it")
            ->capture_default_str();
    cmd->add_option("--config", config_path, "key=value config file (flags override it)");
    bound["out"] = cmd->add_option("--out", config.out_dir, "Output directory")
                       ->capture_default_str();
    bound["threads"] = cmd->add_option("--threads", config.threads, "Worker threads")
                           ->capture_default_str();
  }

  void add_model_options(CLI::App* cmd) {
    bound["mode"] = cmd->add_option("--mode", config.mode,
                                    "Propagation mode: lightgcn, fair_attention or hetrofair")
                        ->capture_default_str();
    bound["layers"] = cmd->add_option("--layers", config.layers, "Propagation layers K")
                          ->capture_default_str();
    bound["dim"] = cmd->add_option("--dim", config.dim, "Embedding dimension d")
                       ->capture_default_str();
    bound["delta"] = cmd->add_option("--delta", config.delta, "Attention scale in (0, 1]")
                         ->capture_default_str();
    bound["norm_exponent"] =
        cmd->add_option("--norm-exponent", config.norm_exponent,
                        "Degree-normalization exponent (0.5 = symmetric square root)")
            ->capture_default_str();
    bound["init"] = cmd->add_option("--init", config.init, "Embedding init: xavier, zeros or normal")
                        ->capture_default_str();
    bound["weight_init"] =
        cmd->add_option("--w-init", config.weight_init, "Feature-weight init: xavier, zeros or normal")
            ->capture_default_str();
  }

  void add_train_options(CLI::App* cmd) {
    bound["learning_rate"] = cmd->add_option("--lr", config.learning_rate, "Learning rate")
                                 ->capture_default_str();
    bound["reg_beta"] = cmd->add_option("--reg-beta", config.reg_beta, "L2 coefficient beta")
                            ->capture_default_str();
    bound["batch_size"] = cmd->add_option("--batch-size", config.batch_size, "BPR batch size")
                              ->capture_default_str();
    bound["max_epochs"] = cmd->add_option("--max-epochs", config.max_epochs, "Epoch cap")
                              ->capture_default_str();
    bound["patience"] =
        cmd->add_option("--patience", config.patience,
                        "Stop after this many evaluations without validation improvement")
            ->capture_default_str();
    bound["eval_every"] =
        cmd->add_option("--eval-every", config.eval_every, "Validate every this many epochs")
            ->capture_default_str();
    bound["optimizer"] = cmd->add_option("--optimizer", config.optimizer, "sgd or adam")
                             ->capture_default_str();
    bound["freeze_weights"] = cmd->add_flag("--freeze-weights", config.freeze_weights,
                                            "Do not update the per-layer feature weights");
  }

  void add_eval_options(CLI::App* cmd) {
    bound["n"] = cmd->add_option("--n", config.top_n, "Ranking cutoff N")->capture_default_str();
    bound["head_fraction"] =
        cmd->add_option("--head-fraction", config.head_fraction,
                        "Top fraction of items (by train degree) forming the short head")
            ->capture_default_str();
  }

  // Called after parsing: fills keys from the config file unless the flag
  // appeared on the command line, then resolves the ratios shorthand.
  void finalize() {
    if (!config_path.empty()) {
      for (const auto& [key, value] : parse_config_file(config_path)) {
        if (key == "ratios") {
          if (bound.count("ratios") == 0 || bound["ratios"]->count() == 0) {
            ratios_text = value;
          }
          continue;
        }
        const auto it = bound.find(key);
        if (it != bound.end() && it->second != nullptr && it->second->count() > 0) {
          continue;  // flag wins
        }
        config.set(key, value);
      }
    }
    if (!ratios_text.empty()) {
      double a = 0, b = 0, c = 0;
      if (std::sscanf(ratios_text.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) {
        throw ValidationError("--ratios expects three comma-separated numbers");
      }
      config.train_ratio = a;
      config.valid_ratio = b;
      config.test_ratio = c;
    }
  }
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw DataError("cannot create output directory '" + dir + "': " + ec.message());
  }
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    parts.push_back(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  return parts;
}

// --- preprocess ------------------------------------------------------------

int cmd_preprocess(ConfigBinding& binding, bool write_splits) {
  RunConfig& cfg = binding.config;
  cfg.validate_or_throw();
  ensure_dir(cfg.out_dir);

  const Dataset ds = load_dataset(cfg);
  {
    std::ofstream out(cfg.out_dir + "/interactions.tsv", std::ios::binary);
    write_interactions(out, ds.interactions, Delimiter::kTsv);
  }
  write_file(cfg.out_dir + "/stats.txt", stats_text(ds, cfg));
  if (write_splits) {
    const DatasetSplit split = make_split(ds, cfg);
    auto dump = [&](const std::string& name, const std::vector<std::vector<int>>& sets) {
      std::ofstream out(cfg.out_dir + "/" + name, std::ios::binary);
      for (int u = 0; u < ds.graph.num_users; ++u) {
        for (int i : sets[u]) {
          out << ds.graph.user_ids[u] << '\t' << ds.graph.item_ids[i];
          if (!ds.labels.item_label[i].empty()) {
            out << '\t' << ds.labels.item_label[i];
          }
          out << '\n';
        }
      }
    };
    dump("train.tsv", split.train_items);
    dump("valid.tsv", split.valid_items);
    dump("test.tsv", split.test_items);
  }
  std::cout << stats_text(ds, cfg);
  std::cout << "wrote " << cfg.out_dir << "/interactions.tsv and stats.txt\n";
  return 0;
}

// --- train -----------------------------------------------------------------

struct TeeStream : std::ostream {
  struct Buf : std::streambuf {
    std::streambuf* a = nullptr;
    std::streambuf* b = nullptr;
    int overflow(int c) override {
      if (c != EOF) {
        if (a) a->sputc(static_cast<char>(c));
        if (b) b->sputc(static_cast<char>(c));
      }
      return c;
    }
  };
  Buf buf;
  TeeStream(std::ostream& x, std::ostream& y) : std::ostream(&buf) {
    buf.a = x.rdbuf();
    buf.b = y.rdbuf();
  }
};

int run_train_and_evaluate(const RunConfig& cfg, const Dataset& ds, const DatasetSplit& split,
                           bool stratified, bool quiet = false) {
  ensure_dir(cfg.out_dir);
  const std::string input_sha = git_blob_sha1(read_file(cfg.input));
  const std::string id = run_id(cfg, input_sha);

  ModelParams params = init_params(ds.graph, cfg);
  TrainConfig tc = train_config_from(cfg);

  std::ofstream log_file(cfg.out_dir + "/train.log", std::ios::binary);
  TeeStream tee(std::cout, log_file);
  std::ostream* sink = quiet ? static_cast<std::ostream*>(&log_file) : &tee;
  tc.live_log = sink;

  const auto t0 = std::chrono::steady_clock::now();
  const TrainLog log = fit(split, params, tc);
  const auto train_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
          .count();

  save_checkpoint(cfg.out_dir + "/checkpoint.hfr", params);

  const auto e0 = std::chrono::steady_clock::now();
  const GenerationResult gen =
      fair_embedding_generation(split.train_graph, params, /*retain_for_backward=*/false,
                                cfg.threads);
  std::vector<EvalReport> reports;
  reports.push_back(evaluate_split(gen.Z, split, cfg.top_n, EvalTarget::kTest, cfg.threads));
  if (stratified) {
    const auto [long_tail, short_head] =
        stratified_eval(gen.Z, split, cfg.top_n, cfg.head_fraction, cfg.threads);
    reports.push_back(long_tail);
    reports.push_back(short_head);
  }
  const auto eval_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - e0)
          .count();

  write_file(cfg.out_dir + "/metrics.csv", metrics_csv(id, reports));
  std::string reports_text;
  for (const auto& r : reports) {
    reports_text += report_text(r) + "\n";
  }
  write_file(cfg.out_dir + "/report.txt", reports_text);
  {
    std::ostringstream resolved;
    write_config(resolved, cfg);
    write_file(cfg.out_dir + "/config.resolved", resolved.str());
    std::ostringstream record;
    record << "run_id=" << id << '\n' << "input_sha1=" << input_sha << '\n';
    for (const auto& [key, value] : cfg.as_map()) {
      record << "config." << key << '=' << value << '\n';
    }
    record << "best_epoch=" << log.best_epoch << '\n'
           << "best_val_ndcg=" << format_value(log.best_val) << '\n'
           << "epochs_run=" << log.epochs.size() << '\n'
           << "early_stopped=" << (log.early_stopped ? "true" : "false") << '\n';
    for (const auto& r : reports) {
      record << "metric." << r.stratum << ".ndcg=" << format_value(r.ndcg) << '\n'
             << "metric." << r.stratum << ".mrr=" << format_value(r.mrr) << '\n'
             << "metric." << r.stratum << ".map=" << format_value(r.map) << '\n'
             << "metric." << r.stratum << ".pru=" << format_value(r.pru) << '\n'
             << "metric." << r.stratum << ".pri=" << format_value(r.pri) << '\n';
    }
    record << "timing.train_ms=" << train_ms << '\n' << "timing.eval_ms=" << eval_ms << '\n';
    write_file(cfg.out_dir + "/run_record.txt", record.str());
  }

  if (!quiet) {
    std::cout << "run_id=" << id << " best_epoch=" << log.best_epoch
              << " best_val_ndcg=" << format_value(log.best_val) << '\n';
    for (const auto& r : reports) {
      std::cout << "[" << r.stratum << "] ndcg=" << format_value(r.ndcg)
                << " mrr=" << format_value(r.mrr) << " map=" << format_value(r.map)
                << " pru=" << format_value(r.pru) << " pri=" << format_value(r.pri) << '\n';
    }
  }
  return 0;
}

int cmd_train(ConfigBinding& binding) {
  RunConfig& cfg = binding.config;
  cfg.validate_or_throw();
  const Dataset ds = load_dataset(cfg);
  const DatasetSplit split = make_split(ds, cfg);
  return run_train_and_evaluate(cfg, ds, split, /*stratified=*/false);
}

// --- evaluate ----------------------------------------------------------------

int cmd_evaluate(ConfigBinding& binding, const std::string& checkpoint_path, bool stratified) {
  RunConfig& cfg = binding.config;
  cfg.validate_or_throw();
  ensure_dir(cfg.out_dir);

  ModelParams params = load_checkpoint(checkpoint_path);
  const Dataset ds = load_dataset(cfg);
  const DatasetSplit split = make_split(ds, cfg);
  if (params.X.rows() != ds.graph.num_nodes()) {
    throw DataError("evaluate: checkpoint has " + std::to_string(params.X.rows()) +
                    " embedding rows but the graph has " + std::to_string(ds.graph.num_nodes()) +
                    " nodes (wrong dataset, k-core or checkpoint?)");
  }

  // The checkpoint's own mode/delta/K/exponent drive the forward pass; the
  // command-line model flags only affect ranking and reporting knobs.
  cfg.mode = mode_name(params.mode);
  cfg.layers = params.K;
  cfg.dim = params.d;
  cfg.delta = params.delta;
  cfg.norm_exponent = params.norm_exponent;

  const std::string input_sha = git_blob_sha1(read_file(cfg.input));
  const std::string checkpoint_sha = git_blob_sha1(read_file(checkpoint_path));
  const std::string id = run_id(cfg, input_sha + ":" + checkpoint_sha);

  const GenerationResult gen =
      fair_embedding_generation(split.train_graph, params, /*retain_for_backward=*/false,
                                cfg.threads);
  std::vector<EvalReport> reports;
  reports.push_back(evaluate_split(gen.Z, split, cfg.top_n, EvalTarget::kTest, cfg.threads));
  if (stratified) {
    const auto [long_tail, short_head] =
        stratified_eval(gen.Z, split, cfg.top_n, cfg.head_fraction, cfg.threads);
    reports.push_back(long_tail);
    reports.push_back(short_head);
  }
  write_file(cfg.out_dir + "/metrics.csv", metrics_csv(id, reports));
  std::string reports_text;
  for (const auto& r : reports) {
    reports_text += report_text(r) + "\n";
  }
  write_file(cfg.out_dir + "/report.txt", reports_text);

  for (const auto& r : reports) {
    std::cout << "[" << r.stratum << "] ndcg=" << format_value(r.ndcg)
              << " mrr=" << format_value(r.mrr) << " map=" << format_value(r.map)
              << " pru=" << format_value(r.pru) << " pri=" << format_value(r.pri) << '\n';
  }
  return 0;
}

// --- sweep -------------------------------------------------------------------

int cmd_sweep(ConfigBinding& binding, const std::string& axis, const std::string& values_text) {
  RunConfig& cfg = binding.config;
  cfg.validate_or_throw();
  ensure_dir(cfg.out_dir);

  std::string key;
  if (axis == "delta") {
    key = "delta";
  } else if (axis == "K" || axis == "layers") {
    key = "layers";
  } else if (axis == "d" || axis == "dim") {
    key = "dim";
  } else {
    throw ValidationError("sweep: axis must be one of delta, K (layers), d (dim)");
  }
  const std::vector<std::string> values = split_csv_list(values_text);
  if (values.empty() || (values.size() == 1 && values[0].empty())) {
    throw ValidationError("sweep: --values must list at least one value");
  }

  const Dataset ds = load_dataset(cfg);
  const DatasetSplit split = make_split(ds, cfg);

  std::ostringstream summary;
  summary << "value,ndcg,mrr,map,pru,pri\n";
  std::ofstream sweep_log(cfg.out_dir + "/sweep.log", std::ios::binary);
  for (const auto& value : values) {
    RunConfig child = cfg;
    child.set(key, value);
    child.out_dir = cfg.out_dir + "/" + key + "_" + value;
    std::cout << "sweep " << key << "=" << value << " -> " << child.out_dir << '\n';
    try {
      const auto child_errors = child.validation_errors();
      if (!child_errors.empty()) {
        throw ValidationError("invalid value '" + value + "' for " + key);
      }
      run_train_and_evaluate(child, ds, split, /*stratified=*/false, /*quiet=*/true);
      // read back the all-stratum row values for the summary
      const std::string metrics = read_file(child.out_dir + "/metrics.csv");
      std::map<std::string, std::string> row;
      std::istringstream in(metrics);
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        const auto parts = split_csv_list(line);
        if (parts.size() == 4 && parts[1] == "all") {
          row[parts[2]] = parts[3];
        }
      }
      summary << value << ',' << row["ndcg"] << ',' << row["mrr"] << ',' << row["map"] << ','
              << row["pru"] << ',' << row["pri"] << '\n';
      sweep_log << key << "=" << value << " ok\n";
    } catch (const std::exception& e) {
      summary << value << ",nan,nan,nan,nan,nan\n";
      sweep_log << key << "=" << value << " FAILED: " << e.what() << '\n';
      std::cerr << "sweep value " << value << " failed: " << e.what() << '\n';
    }
  }
  write_file(cfg.out_dir + "/sweep_summary.csv", summary.str());
  std::cout << "wrote " << cfg.out_dir << "/sweep_summary.csv\n";
  return 0;
}

// --- theory-check --------------------------------------------------------------

int cmd_theory(const std::string& k_text, double tol, int num_graphs, std::uint64_t seed, int dim,
               const std::string& out_dir) {
  if (tol <= 0.0) {
    throw ValidationError("theory-check: --tol must be > 0");
  }
  if (num_graphs < 1) {
    throw ValidationError("theory-check: --graphs must be >= 1");
  }
  ensure_dir(out_dir);
  std::vector<int> ks;
  for (const auto& part : split_csv_list(k_text)) {
    try {
      ks.push_back(std::stoi(part));
    } catch (...) {
      throw ValidationError("theory-check: bad k value '" + part + "'");
    }
    if (ks.back() < 1) {
      throw ValidationError("theory-check: k values must be >= 1");
    }
  }

  struct Row {
    std::string name;
    std::string detail;
    double value;
    double threshold;
    bool pass;
    bool expected_fail = false;
  };
  std::vector<Row> rows;
  const int k_max = *std::max_element(ks.begin(), ks.end());

  // Hand-checkable fixtures.
  {
    const LoopedGraph two = LoopedGraph::from_edges(2, {{0, 1}});
    const ConvergenceTrace t = verify_theorem1(two, k_max, tol);
    const double limit_entry = limit_matrix(two)(0, 0);
    rows.push_back({"theorem1/two_node", "limit entry 0.5", std::abs(limit_entry - 0.5), 0.0,
                    limit_entry == 0.5});
    rows.push_back({"theorem1/two_node", "k=" + std::to_string(k_max), t.max_abs_error, tol,
                    t.passed});
    const LoopedGraph tri = LoopedGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    const double tri_entry = limit_matrix(tri)(1, 2);
    rows.push_back({"theorem1/triangle", "limit entry 1/3", std::abs(tri_entry - 1.0 / 3.0), 1e-15,
                    std::abs(tri_entry - 1.0 / 3.0) <= 1e-15});
  }

  // Random battery: convergence error per requested k, worst case over
  // graphs.
  std::vector<LoopedGraph> battery;
  for (int g = 0; g < num_graphs; ++g) {
    const std::uint64_t s = sub_seed(seed, SeedRole::kTheory) + g;
    battery.push_back(random_connected_graph(5 + static_cast<int>(s % 16), 0.2, s));
  }
  std::ostringstream csv;
  csv << "k,max_abs_error\n";
  double worst_at_kmax = 0.0;
  for (int k : ks) {
    double worst = 0.0;
    for (const auto& g : battery) {
      const ConvergenceTrace t = verify_theorem1(g, k, tol);
      worst = std::max(worst, t.max_abs_error);
    }
    csv << k << ',' << format_value(worst) << '\n';
    if (k == k_max) {
      worst_at_kmax = worst;
    }
  }
  write_file(out_dir + "/theory_errors.csv", csv.str());
  rows.push_back({"theorem1/random_battery",
                  std::to_string(num_graphs) + " graphs, k=" + std::to_string(k_max),
                  worst_at_kmax, tol, worst_at_kmax <= tol});

  // Bipartite graphs without self-loops oscillate between even and odd
  // powers; the theorem needs the self-loop augmentation. Reported as an
  // expected failure.
  {
    LoopedGraph bip = random_connected_bipartite(5, 6, 0.3, sub_seed(seed, SeedRole::kTheory),
                                                 /*self_loops=*/false);
    const Matrix even = power_iterate(bip, 200);
    const Matrix odd = power_iterate(bip, 201);
    const double oscillation = (even - odd).cwiseAbs().maxCoeff();
    rows.push_back({"theorem1/no_self_loops", "even/odd power gap stays large", oscillation, 0.1,
                    oscillation > 0.1, true});
  }

  // Propositions on random bipartite graphs with self-loops.
  {
    bool all = true;
    double worst = 1.0;
    for (int g = 0; g < num_graphs; ++g) {
      const std::uint64_t s = sub_seed(seed, SeedRole::kTheory) + 1000 + g;
      const LoopedGraph bip = degree_diverse_bipartite(6 + static_cast<int>(s % 8),
                                                       7 + static_cast<int>(s % 9), s);
      const PropositionReport rep = verify_propositions(bip, 200, dim, s);
      all = all && rep.all_perfect;
      for (const auto& v : {rep.norm_src_users, rep.norm_src_items, rep.min_score_src,
                            rep.min_agreement_src}) {
        if (v.has_value()) {
          worst = std::min(worst, *v);
        }
      }
    }
    rows.push_back({"propositions/random_bipartite",
                    std::to_string(num_graphs) + " graphs, k=200, worst Spearman", worst, 1.0,
                    all});
  }

  int failures = 0;
  std::printf("%-34s %-38s %14s %12s  %s\n", "check", "detail", "value", "threshold", "result");
  for (const auto& r : rows) {
    const bool ok = r.pass;
    if (!ok && !r.expected_fail) {
      ++failures;
    }
    std::printf("%-34s %-38s %14.6g %12.6g  %s\n", r.name.c_str(), r.detail.c_str(), r.value,
                r.threshold, ok ? (r.expected_fail ? "FAIL(expected)" : "PASS")
                                : (r.expected_fail ? "UNEXPECTED-PASS" : "FAIL"));
  }
  std::printf("%d check(s) failed; per-k errors in %s/theory_errors.csv\n", failures,
              out_dir.c_str());
  return 0;  // failed checks are results, not runtime errors
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph collaborative filtering with fairness-aware propagation"};
  app.require_subcommand(1);

  ConfigBinding pre_bind, train_bind, eval_bind, sweep_bind;
  bool write_splits = false;
  bool stratified = false;
  std::string checkpoint_path;
  std::string sweep_axis, sweep_values;
  std::string theory_k = "1,2,5,10,20,50,100,200,500";
  double theory_tol = 1e-6;
  int theory_graphs = 20;
  std::uint64_t theory_seed = 42;
  int theory_dim = 8;
  std::string theory_out = "theory_out";

  CLI::App* pre = app.add_subcommand("preprocess",
                                     "Load, deduplicate, k-core filter and report dataset stats");
  pre_bind.add_data_options(pre);
  pre->add_flag("--write-splits", write_splits, "Also write train/valid/test interaction files");

  CLI::App* train = app.add_subcommand("train", "Train a model and write checkpoint + metrics");
  train_bind.add_data_options(train);
  train_bind.add_model_options(train);
  train_bind.add_train_options(train);
  train_bind.add_eval_options(train);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on the test split");
  eval_bind.add_data_options(evaluate);
  eval_bind.add_eval_options(evaluate);
  evaluate->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
  evaluate->add_flag("--stratified", stratified, "Also report long-tail and short-head strata");

  CLI::App* sweep = app.add_subcommand("sweep", "Train/evaluate across one hyper-parameter axis");
  sweep_bind.add_data_options(sweep);
  sweep_bind.add_model_options(sweep);
  sweep_bind.add_train_options(sweep);
  sweep_bind.add_eval_options(sweep);
  sweep->add_option("--axis", sweep_axis, "delta, K (layers) or d (dim)")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values for the axis")->required();

  CLI::App* theory = app.add_subcommand("theory-check",
                                        "Numerically verify the propagation-limit analysis");
  theory->add_option("--k", theory_k, "Comma-separated iteration counts")->capture_default_str();
  theory->add_option("--tol", theory_tol, "Convergence tolerance")->capture_default_str();
  theory->add_option("--graphs", theory_graphs, "Random graphs per battery")
      ->capture_default_str();
  theory->add_option("--seed", theory_seed, "Battery seed")->capture_default_str();
  theory->add_option("--dim", theory_dim, "Feature dimension for proposition checks")
      ->capture_default_str();
  theory->add_option("--out", theory_out, "Output directory for error CSVs")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad flags are validation errors
  }

  try {
    if (app.got_subcommand(pre)) {
      pre_bind.finalize();
      return cmd_preprocess(pre_bind, write_splits);
    }
    if (app.got_subcommand(train)) {
      train_bind.finalize();
      return cmd_train(train_bind);
    }
    if (app.got_subcommand(evaluate)) {
      eval_bind.finalize();
      return cmd_evaluate(eval_bind, checkpoint_path, stratified);
    }
    if (app.got_subcommand(sweep)) {
      sweep_bind.finalize();
      return cmd_sweep(sweep_bind, sweep_axis, sweep_values);
    }
    if (app.got_subcommand(theory)) {
      return cmd_theory(theory_k, theory_tol, theory_graphs, theory_seed, theory_dim, theory_out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
