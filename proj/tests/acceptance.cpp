// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits with the number of failed criteria. Tolerances are
// pinned next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <taga/bench.hpp>
#include <taga/config.hpp>
#include <taga/datasets.hpp>
#include <taga/document.hpp>
#include <taga/inference.hpp>
#include <taga/pipeline.hpp>
#include <taga/train.hpp>
#include <taga/walks.hpp>

#include "oracles.hpp"

using taga::NodeId;
using taga::NodeRecord;
using taga::TextAttributedGraph;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TextAttributedGraph make_graph(std::size_t n,
                               const std::vector<std::pair<NodeId, NodeId>>& edges,
                               std::vector<std::string> texts = {}) {
  std::vector<NodeRecord> nodes;
  for (NodeId i = 0; i < n; ++i) {
    std::string text = i < texts.size() ? texts[i] : "node " + std::to_string(i);
    nodes.push_back({i, std::move(text), {}});
  }
  return TextAttributedGraph(std::move(nodes), edges);
}

// Structural equality modulo relabeling: match nodes by preorder position.
bool structurally_equal(const taga::EgoGraph& a, const taga::EgoGraph& b) {
  if (a.members.size() != b.members.size()) return false;
  if (a.preorder.size() != b.preorder.size()) return false;
  std::unordered_map<NodeId, NodeId> to_b;
  for (std::size_t i = 0; i < a.preorder.size(); ++i) to_b[a.preorder[i]] = b.preorder[i];

  std::set<std::pair<NodeId, NodeId>> tree_a, tree_b;
  for (auto [p, c] : a.tree_edges) tree_a.emplace(to_b[p], to_b[c]);
  for (auto [p, c] : b.tree_edges) tree_b.emplace(p, c);
  if (tree_a != tree_b) return false;

  std::set<std::pair<NodeId, NodeId>> cross_a, cross_b;
  for (auto [x, y] : a.cross_edges) {
    auto [u, v] = std::minmax(to_b[x], to_b[y]);
    cross_a.emplace(u, v);
  }
  for (auto [x, y] : b.cross_edges) cross_b.emplace(x, y);
  return cross_a == cross_b;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

// ---- criterion 1: document round-trip on random ego-graphs ----------------

std::optional<std::string> check_round_trip() {
  const auto start = Clock::now();
  std::size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    taga::Rng rng = taga::Rng::derive(4001, {static_cast<std::uint64_t>(trial)});
    const std::size_t n = 2 + rng.next_below(39);  // <= 40
    const double p = 0.05 + 0.25 * rng.next_double();
    auto edges_u = oracle::erdos_renyi(n, p, rng);
    std::vector<std::pair<NodeId, NodeId>> edges(edges_u.begin(), edges_u.end());
    auto g = make_graph(n, edges);
    const auto root = static_cast<NodeId>(rng.next_below(n));
    const int k = 1 + static_cast<int>(rng.next_below(3));  // <= 3

    auto ego = taga::build_ego_graph(g, root, k);
    auto text = taga::render(taga::layout(ego, g));
    auto back = taga::parse(text);
    if (!structurally_equal(ego, back)) ++failures;
  }
  const double elapsed = seconds_since(start);
  if (failures > 0)
    return std::to_string(failures) + " of 1000 round-trips changed the structure";
  if (elapsed >= 10.0)
    return "round-trips took " + std::to_string(elapsed) + " s (budget 10 s)";
  return std::nullopt;
}

// ---- criterion 2: golden layout of the six-node fixture -------------------

std::optional<std::string> check_golden_layout() {
  auto g = make_graph(6, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 5}});
  auto ego = taga::build_ego_graph(g, 0, 2);
  const std::vector<NodeId> expected_preorder{0, 1, 3, 2, 4};
  if (ego.preorder != expected_preorder) return "unexpected preorder";

  auto doc = taga::layout(ego, g);
  const std::vector<std::pair<NodeId, std::string>> expected_sections{
      {0, "1"}, {1, "1.1"}, {3, "1.1.1"}, {2, "1.2"}, {4, "1.2.1"}};
  if (doc.sections.size() != expected_sections.size()) return "wrong section count";
  for (std::size_t i = 0; i < expected_sections.size(); ++i) {
    if (doc.sections[i].node != expected_sections[i].first ||
        doc.sections[i].number != expected_sections[i].second)
      return "section " + std::to_string(i) + " is " + doc.sections[i].number;
  }
  std::size_t reference_count = 0;
  for (const auto& s : doc.sections) reference_count += s.references.size();
  if (reference_count != 1) return "expected exactly one reference";
  if (doc.sections[3].references != std::vector<std::string>{"1.1.1"})
    return "the reference must point from 1.2 to 1.1.1";
  return std::nullopt;
}

// ---- criterion 3: objective matches a direct evaluation -------------------

std::optional<std::string> check_loss_oracle() {
  constexpr double tolerance = 1e-12;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    taga::Rng rng = taga::Rng::derive(4003, {static_cast<std::uint64_t>(trial)});
    const std::size_t B = 2 + rng.next_below(3);  // <= 4
    const int K = 1 + static_cast<int>(rng.next_below(3));
    const std::size_t F = 2 + rng.next_below(7);  // <= 8

    std::vector<taga::ViewEmbeddingSet<double>> batch(B);
    for (std::size_t i = 0; i < B; ++i) {
      batch[i].node = static_cast<NodeId>(i);
      for (int k = 0; k <= K; ++k) {
        std::vector<double> h(F);
        for (auto& x : h) x = rng.next_uniform(-2, 2);
        batch[i].h.push_back(std::move(h));
      }
      for (int k = 1; k <= K; ++k)
        for (int l = 0; l < k; ++l) {
          std::vector<double> b(F);
          for (auto& x : b) x = rng.next_uniform(-2, 2);
          batch[i].b[{k, l}] = std::move(b);
        }
    }

    // Direct evaluation of the objective from its definition.
    const double norm = static_cast<double>(K) * static_cast<double>(B);
    double direct_pos = 0, direct_neg = 0;
    for (std::size_t i = 0; i < B; ++i)
      for (int k = 1; k <= K; ++k)
        for (int l = 0; l < k; ++l) {
          direct_pos -= oracle::cosine(batch[i].b.at({k, l}), batch[i].h[k]) / norm;
          for (std::size_t j = 0; j < B; ++j) {
            if (j == i) continue;
            direct_neg += oracle::cosine(batch[i].b.at({k, l}), batch[j].h[k]) / norm;
          }
        }

    auto report = taga::total_loss(batch, K);
    worst = std::max(worst, std::abs(report.positive - direct_pos));
    worst = std::max(worst, std::abs(report.negative - direct_neg));
    worst = std::max(worst, std::abs(report.total - (direct_pos + direct_neg)));
  }
  if (worst > tolerance)
    return "largest deviation " + std::to_string(worst) + " exceeds 1e-12";
  return std::nullopt;
}

// ---- criterion 4: analytic gradients match finite differences -------------

std::vector<double*> parameter_entries(taga::GnnParameters<double>& p) {
  std::vector<double*> out;
  for (auto& layer : p.layers) {
    for (auto& v : layer.weight.data) out.push_back(&v);
    for (auto& v : layer.weight_neigh.data) out.push_back(&v);
    for (auto& v : layer.bias) out.push_back(&v);
    if (p.arch == taga::GnnArch::gin) out.push_back(&layer.epsilon);
  }
  return out;
}

std::optional<std::string> check_gradients() {
  constexpr double tolerance = 1e-4;  // relative error
  const auto start = Clock::now();
  const taga::GnnArch archs[3] = {taga::GnnArch::gcn, taga::GnnArch::sage, taga::GnnArch::gin};
  double worst = 0;

  for (int trial = 0; trial < 100; ++trial) {
    // Cosine is defined as 0 with a zero subgradient at the origin, so the
    // objective is differentiable only while every view keeps a healthy norm.
    // A short node text can hash to the exact zero vector; a ball of such
    // texts then propagates exactly through the zero-initialized layers and
    // parks a graph view on that non-differentiable point, where central
    // differences are meaningless. Redraw such instances from a salted stream.
    bool checked = false;
    for (std::uint64_t salt = 0; salt < 32 && !checked; ++salt) {
      taga::Rng rng =
          salt == 0 ? taga::Rng::derive(4004, {static_cast<std::uint64_t>(trial)})
                    : taga::Rng::derive(4004, {static_cast<std::uint64_t>(trial), salt});
      const std::size_t n = 4 + rng.next_below(5);
      auto edges_u = oracle::erdos_renyi(n, 0.4, rng);
      std::vector<std::pair<NodeId, NodeId>> edges(edges_u.begin(), edges_u.end());
      std::vector<std::string> texts(n);
      for (std::size_t i = 0; i < n; ++i)
        texts[i] = "word" + std::to_string(rng.next_below(50)) + " tail" + std::to_string(i);
      auto g = make_graph(n, edges, texts);

      const std::size_t F = 3 + rng.next_below(6);  // <= 8
      const int K = 1 + static_cast<int>(rng.next_below(2));
      const auto arch = archs[trial % 3];
      taga::HashProvider provider(F);
      taga::ViewConfig cfg;
      cfg.max_order = K;
      taga::TofgEmbedder embedder(g, provider, cfg);
      auto params = taga::init_params<double>(
          arch, static_cast<std::size_t>(K), F,
          1000 + static_cast<std::uint64_t>(trial) + 7919 * salt);

      std::vector<NodeId> nodes;
      nodes.push_back(static_cast<NodeId>(rng.next_below(n)));
      nodes.push_back(static_cast<NodeId>((nodes[0] + 1 + rng.next_below(n - 1)) % n));

      auto build_batch = [&](const taga::GnnParameters<double>& p) {
        std::vector<taga::ViewsWithTapes<double>> batch;
        for (NodeId v : nodes) batch.push_back(taga::build_views_with_tapes(p, embedder, v));
        return batch;
      };
      auto loss_at = [&](const taga::GnnParameters<double>& p) {
        auto batch = build_batch(p);
        std::vector<taga::ViewEmbeddingSet<double>> views;
        for (auto& item : batch) views.push_back(item.views);
        return taga::total_loss(views, K).total;
      };

      auto batch = build_batch(params);
      double min_norm = 1e300;
      for (const auto& item : batch) {
        for (const auto& [pair, vec] : item.views.b) {
          double sq = 0;
          for (double x : vec) sq += x * x;
          min_norm = std::min(min_norm, std::sqrt(sq));
        }
        for (const auto& vec : item.views.h) {
          double sq = 0;
          for (double x : vec) sq += x * x;
          min_norm = std::min(min_norm, std::sqrt(sq));
        }
      }
      if (min_norm < 1e-3) continue;
      checked = true;

      auto grads = taga::zero_like(params);
      taga::alignment_gradients(batch, K, params, grads);

      auto entries = parameter_entries(params);
      std::vector<double> analytic;
      for (auto* p : parameter_entries(grads)) analytic.push_back(*p);

      for (std::size_t i = 0; i < entries.size(); ++i) {
        const double save = *entries[i];
        *entries[i] = save + 1e-5;
        const double fp = loss_at(params);
        *entries[i] = save - 1e-5;
        const double fm = loss_at(params);
        *entries[i] = save;
        const double fd = (fp - fm) / 2e-5;
        const double rel =
            std::abs(analytic[i] - fd) / std::max(1.0, std::abs(analytic[i]) + std::abs(fd));
        worst = std::max(worst, rel);
        if (rel >= tolerance)
          return "trial " + std::to_string(trial) + " coordinate " + std::to_string(i) +
                 ": relative error " + std::to_string(rel);
      }
    }
    if (!checked)
      return "trial " + std::to_string(trial) + ": no non-degenerate draw in 32 attempts";
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0)
    return "gradient checks took " + std::to_string(elapsed) + " s (budget 60 s)";
  std::cout << "  (gradients: worst relative error " << worst << ", " << elapsed << " s)\n";
  return std::nullopt;
}

// ---- criterion 5: graph views see exactly the k-hop ball ------------------

std::optional<std::string> check_receptive_field() {
  std::size_t inside_cases = 0, inside_changed = 0;
  for (int trial = 0; trial < 8; ++trial) {
    taga::Rng rng = taga::Rng::derive(4005, {static_cast<std::uint64_t>(trial)});
    const std::size_t n = 8 + rng.next_below(23);  // <= 30
    auto edges_u = oracle::erdos_renyi(n, 0.12, rng);
    std::vector<std::pair<NodeId, NodeId>> edges(edges_u.begin(), edges_u.end());
    std::vector<std::string> texts(n);
    for (std::size_t i = 0; i < n; ++i)
      texts[i] = "alpha" + std::to_string(i) + " beta" + std::to_string(rng.next_below(1000));
    auto g = make_graph(n, edges, texts);

    taga::HashProvider provider(16);
    taga::ViewConfig cfg;
    cfg.max_order = 3;
    taga::TofgEmbedder embedder(g, provider, cfg);
    auto params = taga::init_params<double>(taga::GnnArch::gcn, 3, 16, 21);
    const auto v = static_cast<NodeId>(rng.next_below(n));
    auto base = taga::build_views(params, embedder, v);
    auto dist = oracle::bfs_distances(n, edges_u, v);

    for (NodeId u = 0; u < n; ++u) {
      if (u == v) continue;
      auto changed = texts;
      changed[u] = "changed" + std::to_string(u) + " gamma delta";
      auto g2 = make_graph(n, edges, changed);
      taga::TofgEmbedder embedder2(g2, provider, cfg);
      auto views = taga::build_views(params, embedder2, v);

      for (int k = 1; k <= 3; ++k)
        for (int l = 0; l < k; ++l) {
          const bool inside = dist[u] >= 0 && dist[u] <= k;
          const bool same = views.b.at({k, l}) == base.b.at({k, l});
          if (!inside && !same)
            return "text outside the " + std::to_string(k) +
                   "-hop ball leaked into a graph view";
          if (inside) {
            ++inside_cases;
            if (!same) ++inside_changed;
          }
        }
    }
  }
  const double rate =
      inside_cases ? static_cast<double>(inside_changed) / static_cast<double>(inside_cases) : 0;
  if (rate < 0.99)
    return "inside perturbations changed only " + std::to_string(100 * rate) + "% of views";
  std::cout << "  (receptive field: " << inside_changed << "/" << inside_cases
            << " inside perturbations visible)\n";
  return std::nullopt;
}

// ---- criterion 6: walk validity and leaf uniformity ------------------------

std::optional<std::string> check_walk_laws() {
  // Validity: every step follows a tree edge downward or a cross edge.
  std::size_t walks_checked = 0;
  for (int trial = 0; walks_checked < 10000; ++trial) {
    taga::Rng rng = taga::Rng::derive(4006, {static_cast<std::uint64_t>(trial)});
    const std::size_t n = 5 + rng.next_below(20);
    auto edges_u = oracle::erdos_renyi(n, 0.2, rng);
    std::vector<std::pair<NodeId, NodeId>> edges(edges_u.begin(), edges_u.end());
    auto g = make_graph(n, edges);
    auto ego = taga::build_ego_graph(g, static_cast<NodeId>(rng.next_below(n)),
                                     1 + static_cast<int>(rng.next_below(3)));

    taga::WalkConfig cfg;
    cfg.jump_probability = (trial % 3) * 0.35;  // 0, 0.35, 0.7
    cfg.max_length = 2 + rng.next_below(7);
    for (std::size_t w = 0; w < 25; ++w, ++walks_checked) {
      taga::Rng walk_rng = taga::Rng::derive(777, {static_cast<std::uint64_t>(trial), w});
      auto path = taga::sample_walk(ego, cfg, walk_rng);
      if (path.nodes.empty() || path.nodes.front() != ego.root) return "walk must start at the root";
      if (path.nodes.size() > cfg.max_length) return "walk exceeded its length bound";
      for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const NodeId a = path.nodes[i], b = path.nodes[i + 1];
        const auto& kids = ego.children(a);
        const auto& cross = ego.cross_neighbors(a);
        const bool tree_step = std::find(kids.begin(), kids.end(), b) != kids.end();
        const bool cross_step = std::find(cross.begin(), cross.end(), b) != cross.end();
        if (!tree_step && !cross_step)
          return "walk stepped along a non-edge " + std::to_string(a) + "->" +
                 std::to_string(b);
      }
    }
  }

  // Uniformity: jump-free walks on a complete binary tree end at each leaf
  // equally often (chi-square, 1% level, 7 degrees of freedom).
  auto tree = taga::make_complete_tree(2, 3, 3);
  auto ego = taga::build_ego_graph(tree, 0, 3);
  taga::WalkConfig cfg;
  cfg.jump_probability = 0.0;
  cfg.max_length = 10;
  std::vector<std::uint64_t> leaf_counts(8, 0);
  const std::size_t N = 8000;
  for (std::size_t w = 0; w < N; ++w) {
    taga::Rng rng = taga::Rng::derive(778, {w});
    auto path = taga::sample_walk(ego, cfg, rng);
    const NodeId leaf = path.nodes.back();
    if (leaf < 7 || leaf > 14) return "jump-free walk stopped before a leaf";
    ++leaf_counts[leaf - 7];
  }
  const double stat = oracle::chi_square_uniform(leaf_counts);
  const double critical = oracle::chi_square_critical_99(7);
  if (stat >= critical)
    return "leaf distribution chi-square " + std::to_string(stat) + " >= " +
           std::to_string(critical);
  std::cout << "  (walks: 10000 valid, leaf chi-square " << stat << " < " << critical << ")\n";
  return std::nullopt;
}

// ---- criterion 7: corpus growth obeys the closed forms --------------------

std::optional<std::string> check_corpus_growth() {
  auto tree = taga::make_complete_tree(3, 5, 10);
  taga::WalkConfig walk;  // 8 walks per corpus
  auto report = taga::bench_corpus(tree, 5, walk, {0}, 64);
  if (report.rows.size() != 6) return "expected rows for hops 0..5";

  for (int k = 0; k <= 5; ++k) {
    const auto& row = report.rows[static_cast<std::size_t>(k)];
    const double expected_full = 10.0 * (std::pow(3.0, k + 1) - 1.0) / 2.0;
    if (row.full_words != expected_full)
      return "full words at " + std::to_string(k) + " hops: " +
             std::to_string(row.full_words) + " != " + std::to_string(expected_full);
    const double walk_budget = 8.0 * 10.0 * (k + 1);
    if (k == 0 && row.walk_words != row.full_words)
      return "at 0 hops both views must embed the raw text";
    if (k >= 1 && row.walk_words > walk_budget)
      return "walk corpus exceeded its word budget at " + std::to_string(k) + " hops";
  }
  for (int k = 2; k <= 5; ++k) {
    const auto& prev = report.rows[static_cast<std::size_t>(k - 1)];
    const auto& cur = report.rows[static_cast<std::size_t>(k)];
    if (cur.full_words < 2.5 * prev.full_words)
      return "full-document growth ratio fell below 2.5";
    if (cur.walk_words > 1.5 * prev.walk_words)
      return "walk-corpus growth ratio exceeded 1.5";
  }
  return std::nullopt;
}

// ---- criterion 8: training helps on the bundled dataset -------------------

taga::RunConfig toy_run(const std::filesystem::path& out) {
  taga::RunConfig cfg;
  cfg.dataset = "toy";
  cfg.out = out.string();
  cfg.arch = taga::GnnArch::gcn;
  cfg.provider.dimension = 128;
  cfg.provider.model_name = "hash-128";
  cfg.view.max_order = 2;
  cfg.train.steps = 500;
  cfg.train.batch_size = 8;
  cfg.train.learning_rate = 5e-3;
  cfg.train.decay = 0.9;
  cfg.train.decay_every = 10;
  cfg.train.seed = 2;
  cfg.train.log_every = 1;
  cfg.train.threads = 1;
  return cfg;
}

std::optional<std::string> check_learning_signal() {
  const auto start = Clock::now();
  TempDir dir("taga_acceptance_toy");
  auto cfg = toy_run(dir.path);
  auto pretrain = taga::cmd_pretrain(cfg);

  if (pretrain.log.size() != 500)
    return "expected one log record per step, got " + std::to_string(pretrain.log.size());
  double early = 0, late = 0;
  for (std::size_t i = 0; i < 100; ++i) early += pretrain.log[i].total;
  for (std::size_t i = 400; i < 500; ++i) late += pretrain.log[i].total;
  early /= 100;
  late /= 100;
  if (!(late < early))
    return "mean loss over steps 401-500 (" + std::to_string(late) +
           ") is not below steps 1-100 (" + std::to_string(early) + ")";

  auto g = taga::open_dataset("toy");
  auto provider = taga::make_provider(pretrain.checkpoint.provider);
  taga::TofgEmbedder embedder(g, *provider, pretrain.checkpoint.view);
  auto labels = taga::embed_labels(*provider, g.label_texts());
  const auto labeled = g.labeled_nodes();

  auto aggregated =
      taga::node_embeddings(pretrain.checkpoint, embedder, labeled, {}, 1);
  const double trained_accuracy =
      taga::evaluate(taga::zero_shot(aggregated, labels), g, labeled).accuracy;

  taga::EmbedMode raw_mode;
  raw_mode.kind = taga::EmbedMode::Kind::text_only;
  raw_mode.text_order = 0;
  auto raw = taga::node_embeddings(pretrain.checkpoint, embedder, labeled, raw_mode, 1);
  const double raw_accuracy = taga::evaluate(taga::zero_shot(raw, labels), g, labeled).accuracy;

  const double elapsed = seconds_since(start);
  std::cout << "  (learning: loss " << early << " -> " << late << ", zero-shot trained "
            << trained_accuracy << " vs raw text " << raw_accuracy << ", " << elapsed
            << " s)\n";
  if (!(trained_accuracy > 0.5))
    return "trained zero-shot accuracy " + std::to_string(trained_accuracy) +
           " does not beat the 0.5 majority baseline";
  if (!(trained_accuracy > raw_accuracy))
    return "trained zero-shot accuracy " + std::to_string(trained_accuracy) +
           " does not beat the raw-text baseline " + std::to_string(raw_accuracy);
  if (elapsed >= 300.0)
    return "end-to-end run took " + std::to_string(elapsed) + " s (budget 300 s)";
  return std::nullopt;
}

// ---- criterion 9: training and evaluation are reproducible ----------------

std::optional<std::string> check_determinism() {
  TempDir dir("taga_acceptance_repro");
  auto base = toy_run(dir.path / "a");
  base.provider.dimension = 64;
  base.provider.model_name = "hash-64";
  base.train.steps = 60;
  base.train.seed = 5;

  auto again = base;
  again.out = (dir.path / "b").string();
  taga::cmd_pretrain(base);
  taga::cmd_pretrain(again);
  if (read_file(taga::checkpoint_path(base)) != read_file(taga::checkpoint_path(again)))
    return "two identically-seeded training runs wrote different checkpoints";
  if (read_file(taga::training_log_path(base)) != read_file(taga::training_log_path(again)))
    return "two identically-seeded training runs wrote different logs";

  auto eval_cfg = base;
  eval_cfg.checkpoint = taga::checkpoint_path(base).string();
  eval_cfg.eval.shots = {0, 5};
  eval_cfg.eval.seeds = 3;
  eval_cfg.out = (dir.path / "e1").string();
  taga::cmd_eval(eval_cfg);
  auto eval_again = eval_cfg;
  eval_again.out = (dir.path / "e2").string();
  taga::cmd_eval(eval_again);
  if (read_file(taga::metrics_path(eval_cfg)) != read_file(taga::metrics_path(eval_again)))
    return "two identical evaluations wrote different metrics";
  if (read_file(taga::metrics_summary_path(eval_cfg)) !=
      read_file(taga::metrics_summary_path(eval_again)))
    return "two identical evaluations wrote different summaries";
  return std::nullopt;
}

// ---- criterion 10: prediction arithmetic -----------------------------------

std::optional<std::string> check_prediction_math() {
  constexpr double tolerance = 1e-4;
  // Orthogonal label directions: cosines are exactly 1 and 0, so the softmax
  // is (e/(e+1), 1/(e+1)).
  taga::LabelEmbeddings labels;
  labels.labels = {"first", "second"};
  labels.vectors = {{1, 0, 0, 0}, {0, 1, 0, 0}};
  std::vector<taga::NodeEmbedding> nodes{{0, {2, 0, 0, 0}}};
  auto predictions = taga::zero_shot(nodes, labels);
  if (std::abs(predictions[0].probabilities[0] - 0.7311) > tolerance ||
      std::abs(predictions[0].probabilities[1] - 0.2689) > tolerance)
    return "softmax on orthogonal labels gave (" +
           std::to_string(predictions[0].probabilities[0]) + ", " +
           std::to_string(predictions[0].probabilities[1]) + ")";

  // An unfitted adapter is the identity, so zero-epoch few-shot must
  // reproduce zero-shot exactly.
  taga::Rng rng(4010);
  std::vector<taga::NodeEmbedding> embeddings;
  for (NodeId v = 0; v < 10; ++v) {
    std::vector<float> x(4);
    for (auto& e : x) e = static_cast<float>(rng.next_uniform(-1, 1));
    embeddings.push_back({v, std::move(x)});
  }
  std::vector<taga::NodeEmbedding> support{embeddings[0], embeddings[1]};
  std::vector<int> support_labels{0, 1};
  taga::FewShotConfig few;
  few.epochs = 0;
  auto adapter = taga::few_shot_fit(support, support_labels, labels, few);

  auto zero = taga::zero_shot(embeddings, labels);
  auto adapted = taga::adapted_predictions(adapter, embeddings, labels);
  for (std::size_t i = 0; i < zero.size(); ++i) {
    if (adapted[i].predicted != zero[i].predicted ||
        adapted[i].probabilities != zero[i].probabilities)
      return "zero-epoch few-shot diverged from zero-shot at node " + std::to_string(i);
  }
  return std::nullopt;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<std::optional<std::string>()>> criteria[] = {
      {"document round-trip rebuilds 1000 random ego-graphs", check_round_trip},
      {"six-node fixture lays out in preorder with one back-reference", check_golden_layout},
      {"objective matches direct evaluation to 1e-12", check_loss_oracle},
      {"analytic gradients match finite differences to 1e-4", check_gradients},
      {"graph views depend on exactly the k-hop ball", check_receptive_field},
      {"walks are valid and jump-free walks reach leaves uniformly", check_walk_laws},
      {"corpus growth matches the complete-tree closed forms", check_corpus_growth},
      {"alignment training beats the raw-text zero-shot baseline", check_learning_signal},
      {"training and evaluation reproduce byte-identical outputs", check_determinism},
      {"softmax values and zero-epoch few-shot match the closed forms", check_prediction_math},
  };

  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    std::optional<std::string> failure;
    try {
      failure = run();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (failure) {
      ++failures;
      std::cout << "criterion " << index << " FAIL — " << name << ": " << *failure << "\n";
    } else {
      std::cout << "criterion " << index << " PASS — " << name << "\n";
    }
  }
  if (failures == 0)
    std::cout << "all 10 criteria passed\n";
  else
    std::cout << failures << " of 10 criteria failed\n";
  return failures;
}
