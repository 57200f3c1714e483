// taga: experiment runner for text-and-graph multi-view alignment.
// Every subcommand reads one RunConfig assembled in three layers: built-in
// defaults, then the --config file, then explicit flags.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <taga/pipeline.hpp>

namespace {

struct FlagValues {
  std::string config_file;
  std::string dataset;
  std::string out;
  std::string provider = "hash";
  std::string mode = "taga";
  std::string checkpoint;
  std::string arch = "gcn";
  std::string tofg_mode = "full";
  std::string label_template;
  std::uint64_t seed = 0;
  int threads = 1;
  std::size_t steps = 500;
  std::size_t batch_size = 8;
  double learning_rate = 5e-3;
  double decay = 0.9;
  std::size_t decay_every = 10;
  int max_order = 2;
  std::size_t dimension = 128;
  std::string endpoint;
  std::vector<std::size_t> shots;
  std::size_t eval_seeds = 20;
  int text_order = -1;
  std::size_t few_shot_epochs = 100;
  double few_shot_lr = 0.05;
  int k_max = 5;
  std::vector<taga::NodeId> roots;
  std::size_t num_walks = 8;
  double jump_probability = 0.3;
  std::uint64_t walk_seed = 0;
  taga::NodeId node = 0;
  int hops = 1;
  bool toy = false;
};

// The CLI's base config before the file and flags are applied. Training logs
// every step so the log is a complete loss curve.
taga::RunConfig base_config() {
  taga::RunConfig cfg;
  cfg.train.log_every = 1;
  cfg.provider.dimension = 128;
  cfg.provider.model_name = "hash-128";
  cfg.view.max_order = 2;
  cfg.train.steps = 500;
  cfg.train.learning_rate = 5e-3;
  cfg.train.decay = 0.9;
  return cfg;
}

bool set(const CLI::App& app, const std::string& name) {
  auto* opt = app.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

taga::GnnArch arch_from(const std::string& s) {
  if (s == "gcn") return taga::GnnArch::gcn;
  if (s == "sage") return taga::GnnArch::sage;
  return taga::GnnArch::gin;
}

// Defaults -> config file -> flags that were actually given.
taga::RunConfig assemble(const CLI::App& sub, const FlagValues& f) {
  taga::RunConfig cfg = base_config();
  if (!f.config_file.empty()) cfg = taga::load_config(f.config_file, std::move(cfg));

  if (set(sub, "--dataset")) cfg.dataset = f.dataset;
  if (f.toy) cfg.dataset = "toy";
  if (set(sub, "--out")) cfg.out = f.out;
  if (set(sub, "--checkpoint")) cfg.checkpoint = f.checkpoint;
  if (set(sub, "--seed")) cfg.train.seed = f.seed;
  if (set(sub, "--threads")) cfg.train.threads = f.threads;
  if (set(sub, "--mode")) cfg.eval.mode = f.mode;
  if (set(sub, "--provider")) {
    cfg.provider.kind =
        f.provider == "remote" ? taga::ProviderKind::remote : taga::ProviderKind::hash;
  }
  if (set(sub, "--dimension")) {
    cfg.provider.dimension = f.dimension;
    cfg.provider.model_name =
        (cfg.provider.kind == taga::ProviderKind::hash ? "hash-" : "remote-") +
        std::to_string(f.dimension);
  }
  if (set(sub, "--endpoint")) cfg.provider.endpoint = f.endpoint;
  if (set(sub, "--arch")) cfg.arch = arch_from(f.arch);
  if (set(sub, "--max-order")) cfg.view.max_order = f.max_order;
  if (set(sub, "--tofg-mode"))
    cfg.view.tofg_mode =
        f.tofg_mode == "full" ? taga::TofgMode::full : taga::TofgMode::random_walk;
  if (set(sub, "--steps")) cfg.train.steps = f.steps;
  if (set(sub, "--batch-size")) cfg.train.batch_size = f.batch_size;
  if (set(sub, "--learning-rate")) cfg.train.learning_rate = f.learning_rate;
  if (set(sub, "--decay")) cfg.train.decay = f.decay;
  if (set(sub, "--decay-every")) cfg.train.decay_every = f.decay_every;
  if (set(sub, "--shots")) cfg.eval.shots = f.shots;
  if (set(sub, "--eval-seeds")) cfg.eval.seeds = f.eval_seeds;
  if (set(sub, "--text-order")) cfg.eval.text_order = f.text_order;
  if (set(sub, "--label-template")) cfg.eval.label_template = f.label_template;
  if (set(sub, "--few-shot-epochs")) cfg.eval.few_shot_epochs = f.few_shot_epochs;
  if (set(sub, "--few-shot-lr")) cfg.eval.few_shot_learning_rate = f.few_shot_lr;
  if (set(sub, "--num-walks")) cfg.view.walk.num_walks = f.num_walks;
  if (set(sub, "--jump-probability")) cfg.view.walk.jump_probability = f.jump_probability;
  if (set(sub, "--walk-seed")) cfg.view.walk.seed = f.walk_seed;
  return cfg;
}

void add_common(CLI::App* sub, FlagValues& f) {
  sub->add_option("--config", f.config_file, "configuration file");
  sub->add_option("--dataset", f.dataset, "dataset directory, or the literal 'toy'");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--seed", f.seed, "training seed");
  sub->add_option("--threads", f.threads, "worker threads (1 = bit-reproducible)");
  sub->add_option("--provider", f.provider, "embedding provider")
      ->check(CLI::IsMember({"hash", "remote"}));
  sub->add_option("--mode", f.mode, "run mode")
      ->check(CLI::IsMember({"taga", "taga-rw", "tofg-k", "glo-goft"}));
  sub->add_option("--dimension", f.dimension, "provider embedding width");
  sub->add_option("--endpoint", f.endpoint, "remote provider URL");
}

void print_summaries(const taga::EvalResult& result) {
  for (const auto& s : result.summaries) {
    std::cout << "shot " << s.shot << ": accuracy " << s.mean_accuracy << " +- "
              << s.std_accuracy << " over " << s.seeds << " seeds\n";
  }
  std::cout << "metrics: " << result.metrics_file << "\n";
  std::cout << "summary: " << result.summary_file << "\n";
  std::cout << "predictions: " << result.predictions_file << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"text-and-graph multi-view alignment toolkit"};
  app.require_subcommand(1);
  FlagValues f;

  auto* ingest = app.add_subcommand("ingest", "materialize a dataset directory");
  add_common(ingest, f);
  ingest->add_flag("--toy", f.toy, "use the bundled toy dataset");

  auto* pretrain = app.add_subcommand("pretrain", "align the text and graph views");
  add_common(pretrain, f);
  pretrain->add_option("--steps", f.steps, "optimization steps");
  pretrain->add_option("--batch-size", f.batch_size, "nodes per step");
  pretrain->add_option("--learning-rate", f.learning_rate, "base learning rate");
  pretrain->add_option("--decay", f.decay, "learning-rate decay factor");
  pretrain->add_option("--decay-every", f.decay_every, "steps between decays");
  pretrain->add_option("--arch", f.arch, "network architecture")
      ->check(CLI::IsMember({"gcn", "sage", "gin"}));
  pretrain->add_option("--max-order", f.max_order, "maximum view order K");
  pretrain->add_option("--tofg-mode", f.tofg_mode, "text view construction")
      ->check(CLI::IsMember({"full", "random-walk"}));
  pretrain->add_option("--num-walks", f.num_walks, "walks per corpus");
  pretrain->add_option("--jump-probability", f.jump_probability, "cross-edge jump probability");
  pretrain->add_option("--walk-seed", f.walk_seed, "walk sampling seed");

  auto* embed = app.add_subcommand("embed", "write embeddings for every node");
  add_common(embed, f);
  embed->add_option("--checkpoint", f.checkpoint, "trained checkpoint");
  embed->add_option("--text-order", f.text_order, "document order for tofg-k mode");

  auto* eval = app.add_subcommand("eval", "accuracy over seeded splits");
  auto* transfer = app.add_subcommand(
      "transfer-eval", "evaluate a checkpoint trained on a different dataset");
  for (CLI::App* sub : {eval, transfer}) {
    add_common(sub, f);
    sub->add_option("--checkpoint", f.checkpoint, "trained checkpoint");
    sub->add_option("--shots", f.shots, "support sizes per class (0 = zero-shot)");
    sub->add_option("--eval-seeds", f.eval_seeds, "split seeds per shot");
    sub->add_option("--text-order", f.text_order, "document order for tofg-k mode");
    sub->add_option("--label-template", f.label_template,
                    "label prompt template; {} is the label");
    sub->add_option("--few-shot-epochs", f.few_shot_epochs, "adapter epochs");
    sub->add_option("--few-shot-lr", f.few_shot_lr, "adapter learning rate");
  }

  auto* bench = app.add_subcommand("bench-corpus", "measure view input growth per hop");
  add_common(bench, f);
  bench->add_option("--k-max", f.k_max, "largest hop order");
  bench->add_option("--roots", f.roots, "explicit root nodes (default: 20 sampled)");
  bench->add_option("--num-walks", f.num_walks, "walks per corpus");
  bench->add_option("--jump-probability", f.jump_probability, "cross-edge jump probability");
  bench->add_option("--walk-seed", f.walk_seed, "walk sampling seed");

  auto* render = app.add_subcommand("render-doc", "print a node's hop document");
  add_common(render, f);
  render->add_option("--node", f.node, "root node id")->required();
  render->add_option("--hops", f.hops, "hop order");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      auto cfg = assemble(*ingest, f);
      auto result = taga::cmd_ingest(cfg);
      std::cout << "wrote " << result.nodes << " nodes, " << result.edges << " edges, "
                << result.labels << " labels to " << result.dir << "\n";
    } else if (pretrain->parsed()) {
      auto cfg = assemble(*pretrain, f);
      auto result = taga::cmd_pretrain(cfg);
      std::cout << "trained " << result.log.size() << " logged steps\n";
      if (!result.log.empty())
        std::cout << "final loss " << result.log.back().total << "\n";
      std::cout << "checkpoint: " << result.checkpoint_file << "\n";
      std::cout << "training log: " << result.log_file << "\n";
    } else if (embed->parsed()) {
      auto cfg = assemble(*embed, f);
      auto result = taga::cmd_embed(cfg);
      std::cout << "wrote " << result.embeddings.size() << " embeddings to " << result.file
                << "\n";
    } else if (eval->parsed()) {
      auto result = taga::cmd_eval(assemble(*eval, f));
      print_summaries(result);
    } else if (transfer->parsed()) {
      auto result = taga::cmd_transfer_eval(assemble(*transfer, f));
      print_summaries(result);
    } else if (bench->parsed()) {
      auto cfg = assemble(*bench, f);
      auto result = taga::cmd_bench_corpus(cfg, f.k_max, f.roots);
      std::cout << "average degree " << result.report.average_degree << ", " << result.report.num_roots
                << " roots\n";
      for (const auto& row : result.report.rows) {
        std::cout << "hops " << row.hops << ": full " << row.full_words << " words ("
                  << row.full_seconds << " s), walks " << row.walk_words << " words ("
                  << row.walk_seconds << " s)\n";
      }
      std::cout << "report: " << result.file << "\n";
    } else if (render->parsed()) {
      std::cout << taga::cmd_render_doc(assemble(*render, f), f.node, f.hops);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
