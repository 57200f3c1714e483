// Command layer shared by the CLI and the acceptance checks: every
// subcommand is a function of a RunConfig that writes its outputs under the
// configured directory and returns them. All randomness flows from config
// seeds, so rerunning a command with the same config reproduces its outputs
// byte for byte (with train.threads = 1 for training).
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include <taga/bench.hpp>
#include <taga/checkpoint.hpp>
#include <taga/config.hpp>
#include <taga/datasets.hpp>
#include <taga/inference.hpp>
#include <taga/remote.hpp>
#include <taga/train.hpp>

namespace taga {

// Canonical file names under the output directory.
inline std::filesystem::path checkpoint_path(const RunConfig& c) {
  return std::filesystem::path(c.out) / "checkpoint.bin";
}
inline std::filesystem::path training_log_path(const RunConfig& c) {
  return std::filesystem::path(c.out) / "training_log.jsonl";
}
inline std::filesystem::path metrics_path(const RunConfig& c) {
  return std::filesystem::path(c.out) / "metrics.jsonl";
}
inline std::filesystem::path metrics_summary_path(const RunConfig& c) {
  return std::filesystem::path(c.out) / "metrics_summary.json";
}
inline std::filesystem::path predictions_path(const RunConfig& c) {
  return std::filesystem::path(c.out) / "predictions.jsonl";
}
inline std::filesystem::path embeddings_path(const RunConfig& c) {
  return std::filesystem::path(c.out) / "embeddings.jsonl";
}
inline std::filesystem::path bench_path(const RunConfig& c) {
  return std::filesystem::path(c.out) / "bench.json";
}

inline TextAttributedGraph open_dataset(const std::string& spec) {
  if (spec == "toy") return make_toy_graph();
  return load_dataset(spec);
}

// The run mode touches two training switches and the inference path:
//   taga      full documents, all (k,l) view pairs, aggregated inference
//   taga-rw   walk-corpus documents for the text views, otherwise taga
//   glo-goft  graph views built from raw text embeddings only (l = 0 pairs)
//   tofg-k    no training; inference embeds the hop document directly
inline void apply_mode_to_training(RunConfig& c) {
  if (c.eval.mode == "taga") {
    c.view.tofg_mode = TofgMode::full;
    c.train.l0_only = false;
  } else if (c.eval.mode == "taga-rw") {
    c.view.tofg_mode = TofgMode::random_walk;
    c.train.l0_only = false;
  } else if (c.eval.mode == "glo-goft") {
    c.view.tofg_mode = TofgMode::full;
    c.train.l0_only = true;
  } else if (c.eval.mode == "tofg-k") {
    throw std::invalid_argument("mode tofg-k embeds documents directly; nothing to pretrain");
  }
}

inline EmbedMode embed_mode_for(const RunConfig& c) {
  EmbedMode mode;
  if (c.eval.mode == "tofg-k") {
    mode.kind = EmbedMode::Kind::text_only;
    mode.text_order = c.eval.text_order;
  }
  return mode;
}

namespace detail {

inline void ensure_out_dir(const RunConfig& c) {
  if (c.out.empty()) throw std::invalid_argument("output directory is required");
  std::filesystem::create_directories(c.out);
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Checkpoint for inference: loaded when configured, otherwise synthesized for
// the text-only baseline, which never reads the parameters.
inline Checkpoint checkpoint_for_eval(const RunConfig& c) {
  if (!c.checkpoint.empty()) return load_checkpoint(c.checkpoint);
  if (c.eval.mode != "tofg-k")
    throw std::invalid_argument("mode " + c.eval.mode + " needs a trained checkpoint");
  Checkpoint ckpt;
  ckpt.params = init_params<float>(c.arch, static_cast<std::size_t>(c.view.max_order),
                                   c.provider.dimension, 0);
  ckpt.provider = c.provider;
  ckpt.view = c.view;
  ckpt.train = c.train;
  return ckpt;
}

}  // namespace detail

struct IngestResult {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t labels = 0;
  std::string dir;
};

inline IngestResult cmd_ingest(const RunConfig& cfg) {
  validate_config(cfg);
  auto g = open_dataset(cfg.dataset);
  detail::ensure_out_dir(cfg);
  write_dataset(cfg.out, g);
  return {g.num_nodes(), g.num_edges(), g.label_texts().size(), cfg.out};
}

struct PretrainResult {
  Checkpoint checkpoint;
  std::vector<LossRecord> log;
  std::string checkpoint_file;
  std::string log_file;
};

inline PretrainResult cmd_pretrain(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  apply_mode_to_training(cfg);
  validate_config(cfg);
  auto g = open_dataset(cfg.dataset);
  auto provider = make_provider(cfg.provider);
  TofgEmbedder embedder(g, *provider, cfg.view);

  auto trained = train<float>(embedder, cfg.arch, cfg.train);

  PretrainResult result;
  result.checkpoint = {std::move(trained.params), cfg.provider, cfg.view, cfg.train,
                       cfg.train.steps};
  result.log = std::move(trained.log);
  detail::ensure_out_dir(cfg);
  result.checkpoint_file = checkpoint_path(cfg).string();
  result.log_file = training_log_path(cfg).string();
  save_checkpoint(result.checkpoint_file, result.checkpoint);
  auto out = detail::open_for_write(result.log_file);
  for (const auto& r : result.log) {
    nlohmann::json rec{{"step", r.step},
                       {"lr", r.lr},
                       {"positive", r.positive},
                       {"negative", r.negative},
                       {"total", r.total}};
    out << rec.dump() << '\n';
  }
  return result;
}

struct EmbedResult {
  std::vector<NodeEmbedding> embeddings;
  std::string file;
};

inline EmbedResult cmd_embed(const RunConfig& cfg) {
  validate_config(cfg);
  auto g = open_dataset(cfg.dataset);
  Checkpoint ckpt = detail::checkpoint_for_eval(cfg);
  auto provider = make_provider(ckpt.provider);
  TofgEmbedder embedder(g, *provider, ckpt.view);

  std::vector<NodeId> nodes(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) nodes[v] = v;

  EmbedResult result;
  result.embeddings =
      node_embeddings(ckpt, embedder, nodes, embed_mode_for(cfg), cfg.train.threads);
  detail::ensure_out_dir(cfg);
  result.file = embeddings_path(cfg).string();
  auto out = detail::open_for_write(result.file);
  for (const auto& e : result.embeddings) {
    nlohmann::json rec{{"node", e.node}, {"vector", e.vector}};
    out << rec.dump() << '\n';
  }
  return result;
}

struct EvalRecord {
  std::size_t shot = 0;
  std::uint64_t seed = 0;
  AccuracyReport report;
  std::size_t support_size = 0;
  std::size_t validation_size = 0;
  std::size_t test_size = 0;
};

struct ShotSummary {
  std::size_t shot = 0;
  std::size_t seeds = 0;
  double mean_accuracy = 0;
  double std_accuracy = 0;  // sample standard deviation
};

struct EvalResult {
  std::vector<EvalRecord> records;
  std::vector<ShotSummary> summaries;
  std::vector<Prediction> zero_shot_predictions;  // over all labeled nodes
  std::string metrics_file;
  std::string summary_file;
  std::string predictions_file;
};

inline EvalResult cmd_eval(const RunConfig& cfg) {
  validate_config(cfg);
  auto g = open_dataset(cfg.dataset);
  if (g.label_texts().empty())
    throw std::invalid_argument("dataset has no label vocabulary; cannot evaluate");

  Checkpoint ckpt = detail::checkpoint_for_eval(cfg);
  auto provider = make_provider(ckpt.provider);
  TofgEmbedder embedder(g, *provider, ckpt.view);
  const EmbedMode mode = embed_mode_for(cfg);

  const std::string prompt =
      cfg.eval.label_template.empty() ? "{}" : cfg.eval.label_template;
  auto labels = embed_labels(*provider, g.label_texts(), prompt);

  const auto labeled = g.labeled_nodes();
  auto embeddings = node_embeddings(ckpt, embedder, labeled, mode, cfg.train.threads);
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < labeled.size(); ++i) index[labeled[i]] = i;

  EvalResult result;
  result.zero_shot_predictions = zero_shot(embeddings, labels);

  for (std::size_t shot : cfg.eval.shots) {
    std::vector<double> accuracies;
    for (std::uint64_t seed = 0; seed < cfg.eval.seeds; ++seed) {
      auto split = make_split(g, shot, seed);
      AccuracyReport report;
      if (shot == 0) {
        report = evaluate(result.zero_shot_predictions, g, split.test);
      } else {
        std::vector<NodeEmbedding> support;
        std::vector<int> support_labels;
        for (NodeId v : split.support) {
          support.push_back(embeddings[index.at(v)]);
          support_labels.push_back(*g.label_id(v));
        }
        FewShotConfig few;
        few.epochs = cfg.eval.few_shot_epochs;
        few.learning_rate = cfg.eval.few_shot_learning_rate;
        few.seed = seed;
        auto adapter = few_shot_fit(support, support_labels, labels, few);
        std::vector<NodeEmbedding> test;
        for (NodeId v : split.test) test.push_back(embeddings[index.at(v)]);
        report = evaluate(adapted_predictions(adapter, test, labels), g, split.test);
      }
      accuracies.push_back(report.accuracy);
      result.records.push_back({shot, seed, report, split.support.size(),
                                split.validation.size(), split.test.size()});
    }
    ShotSummary summary;
    summary.shot = shot;
    summary.seeds = accuracies.size();
    double mean = 0;
    for (double a : accuracies) mean += a;
    mean /= static_cast<double>(accuracies.size());
    double var = 0;
    for (double a : accuracies) var += (a - mean) * (a - mean);
    summary.mean_accuracy = mean;
    summary.std_accuracy =
        accuracies.size() > 1 ? std::sqrt(var / static_cast<double>(accuracies.size() - 1)) : 0.0;
    result.summaries.push_back(summary);
  }

  detail::ensure_out_dir(cfg);
  result.metrics_file = metrics_path(cfg).string();
  result.summary_file = metrics_summary_path(cfg).string();
  result.predictions_file = predictions_path(cfg).string();
  {
    auto out = detail::open_for_write(result.metrics_file);
    for (const auto& r : result.records) {
      nlohmann::json rec{{"shot", r.shot},
                         {"seed", r.seed},
                         {"accuracy", r.report.accuracy},
                         {"correct", r.report.correct},
                         {"total", r.report.total},
                         {"support_size", r.support_size},
                         {"validation_size", r.validation_size},
                         {"test_size", r.test_size},
                         {"mode", cfg.eval.mode}};
      out << rec.dump() << '\n';
    }
  }
  {
    nlohmann::json shots = nlohmann::json::array();
    for (const auto& s : result.summaries)
      shots.push_back({{"shot", s.shot},
                       {"seeds", s.seeds},
                       {"mean_accuracy", s.mean_accuracy},
                       {"std_accuracy", s.std_accuracy}});
    auto out = detail::open_for_write(result.summary_file);
    out << nlohmann::json{{"mode", cfg.eval.mode}, {"shots", shots}}.dump(2) << '\n';
  }
  {
    auto out = detail::open_for_write(result.predictions_file);
    for (const auto& p : result.zero_shot_predictions) {
      nlohmann::json rec{{"node", p.node},
                         {"label", g.label_texts()[p.predicted]},
                         {"probabilities", p.probabilities}};
      out << rec.dump() << '\n';
    }
  }
  return result;
}

// Transfer evaluation: a checkpoint trained on one dataset, applied to another
// with no further training. Same pipeline as eval with the checkpoint required.
inline EvalResult cmd_transfer_eval(const RunConfig& cfg) {
  if (cfg.checkpoint.empty())
    throw std::invalid_argument("transfer evaluation requires an existing checkpoint");
  return cmd_eval(cfg);
}

struct BenchResult {
  BenchReport report;
  std::string file;
};

inline BenchResult cmd_bench_corpus(const RunConfig& cfg, int k_max,
                                    std::vector<NodeId> roots = {}) {
  validate_config(cfg);
  auto g = open_dataset(cfg.dataset);
  BenchResult result;
  result.report = bench_corpus(g, k_max, cfg.view.walk, std::move(roots),
                               cfg.provider.dimension);
  detail::ensure_out_dir(cfg);
  result.file = bench_path(cfg).string();
  auto out = detail::open_for_write(result.file);
  out << bench_report_json(result.report).dump(2) << '\n';
  return result;
}

// The document a node's text view embeds at the given hop order.
inline std::string cmd_render_doc(const RunConfig& cfg, NodeId node, int hops) {
  validate_config(cfg);
  auto g = open_dataset(cfg.dataset);
  if (node >= g.num_nodes())
    throw std::out_of_range("unknown node " + std::to_string(node));
  if (hops < 0) throw std::invalid_argument("hops must be nonnegative");
  if (hops == 0) return g.text(node);
  return render(layout(build_ego_graph(g, node, hops), g)).content;
}

}  // namespace taga
