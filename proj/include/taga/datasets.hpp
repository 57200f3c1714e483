#pragma once

// Bundled synthetic datasets and the on-disk dataset directory format.
//
// A dataset directory holds:
//   nodes.jsonl  one {"id": n, "text": "...", "label": "..."} object per line
//   edges.txt    one "src dst" pair per line
//   labels.txt   label vocabulary, one string per line (optional)

#include <taga/graph.hpp>
#include <taga/rng.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace taga {

struct ToyConfig {
  std::size_t nodes = 60;
  double intra_probability = 0.2;
  double inter_probability = 0.02;
  std::size_t words_per_node = 10;   // drawn from the class and shared vocabularies
  double shared_fraction = 0.2;      // chance a drawn word comes from the shared pool
  std::uint64_t seed = 7;
};

namespace detail {

inline const std::array<const char*, 8>& toy_vocab(int label) {
  // Word choice is deliberate. The head words "semiconductor" and "bloom"
  // land in the same feature-hash bucket (at 64 and 128 buckets) with
  // opposite signs, so the two classes drive one shared signed coordinate in
  // opposite directions and the label prompts read exactly that coordinate —
  // document structure the classes have in common cancels out of the
  // comparison. No other token below (nor a section-number digit the layout
  // can realistically emit) touches that bucket, and the vocabulary is kept
  // small so each word carries repeated mass across a 2-hop document.
  static const std::array<const char*, 8> electronics = {
      "semiconductor", "voltage", "resistor",   "capacitor",
      "amplifier",     "inverter", "transistor", "waveform"};
  static const std::array<const char*, 8> botany = {
      "bloom",   "orchid", "meadow", "pollen",
      "blossom", "fern",   "violet", "petal"};
  return label == 0 ? electronics : botany;
}

inline const std::array<const char*, 10>& toy_shared_vocab() {
  static const std::array<const char*, 10> shared = {
      "study",  "analysis", "method", "results", "notes",
      "report", "survey",   "review", "data",    "model"};
  return shared;
}

}  // namespace detail

inline std::vector<std::string> toy_label_texts() { return {"semiconductor", "bloom"}; }

// Planted two-class partition: dense within a class, sparse across, with
// class-specific vocabularies sharing a small common word pool.
//
// The two halves are exact mirrors: node i and node i + n/2 share one draw
// stream (same word indices, into their own class vocabulary) and the intra
// edge pattern repeats across halves, while each cross pair {i, j} yields the
// symmetric edges (i, n/2+j) and (j, n/2+i). Swapping the halves is then a
// label-swapping graph symmetry, so neither class dominates any hash bucket
// by sampling accident, yet every per-edge marginal probability is unchanged.
inline TextAttributedGraph make_toy_graph(const ToyConfig& cfg = {}) {
  if (cfg.nodes < 2) throw std::invalid_argument("toy graph needs at least 2 nodes");
  const auto labels = toy_label_texts();
  const std::size_t half = cfg.nodes / 2;
  std::vector<NodeRecord> nodes(cfg.nodes);
  for (NodeId i = 0; i < half; ++i) {
    Rng rng = Rng::derive(cfg.seed, {0x746f79u /* text stream */, i});
    std::string text0, text1;
    for (std::size_t w = 0; w < cfg.words_per_node; ++w) {
      if (w) { text0 += ' '; text1 += ' '; }
      if (rng.next_double() < cfg.shared_fraction) {
        const auto& shared = detail::toy_shared_vocab();
        const char* word = shared[rng.next_below(shared.size())];
        text0 += word;
        text1 += word;
      } else {
        const std::size_t pick = rng.next_below(detail::toy_vocab(0).size());
        text0 += detail::toy_vocab(0)[pick];
        text1 += detail::toy_vocab(1)[pick];
      }
    }
    nodes[i] = {i, std::move(text0), 0};
    const NodeId m = static_cast<NodeId>(i + half);
    nodes[m] = {m, std::move(text1), 1};
  }
  if (cfg.nodes % 2) {  // odd order: one unpaired trailing node in class 1
    const NodeId last = static_cast<NodeId>(cfg.nodes - 1);
    Rng rng = Rng::derive(cfg.seed, {0x746f79u, last});
    std::string text;
    for (std::size_t w = 0; w < cfg.words_per_node; ++w) {
      if (w) text += ' ';
      if (rng.next_double() < cfg.shared_fraction) {
        const auto& shared = detail::toy_shared_vocab();
        text += shared[rng.next_below(shared.size())];
      } else {
        const auto& vocab = detail::toy_vocab(1);
        text += vocab[rng.next_below(vocab.size())];
      }
    }
    nodes[last] = {last, std::move(text), 1};
  }

  Rng edge_rng = Rng::derive(cfg.seed, {0x65646765u /* edge stream */});
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < half; ++i)
    for (NodeId j = i; j < half; ++j) {
      if (i != j && edge_rng.next_double() < cfg.intra_probability) {
        edges.emplace_back(i, j);
        edges.emplace_back(static_cast<NodeId>(i + half), static_cast<NodeId>(j + half));
      }
      if (edge_rng.next_double() < cfg.inter_probability) {
        edges.emplace_back(i, static_cast<NodeId>(j + half));
        if (i != j) edges.emplace_back(j, static_cast<NodeId>(i + half));
      }
    }
  if (cfg.nodes % 2) {
    const NodeId last = static_cast<NodeId>(cfg.nodes - 1);
    for (NodeId i = 0; i < last; ++i) {
      const bool same = i >= half;
      const double p = same ? cfg.intra_probability : cfg.inter_probability;
      if (edge_rng.next_double() < p) edges.emplace_back(i, last);
    }
  }
  return TextAttributedGraph(std::move(nodes), edges, labels);
}

// Complete b-ary tree of the given depth (depth 0 = a single root), each node
// carrying `words_per_node` distinct words.
inline TextAttributedGraph make_complete_tree(std::size_t branching, std::size_t depth,
                                              std::size_t words_per_node) {
  if (branching < 1) throw std::invalid_argument("branching factor must be positive");
  std::size_t total = 1, level = 1;
  for (std::size_t d = 0; d < depth; ++d) {
    level *= branching;
    total += level;
  }
  std::vector<NodeRecord> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  nodes.reserve(total);
  for (NodeId i = 0; i < total; ++i) {
    std::string text;
    for (std::size_t w = 0; w < words_per_node; ++w) {
      if (w) text += ' ';
      text += "t" + std::to_string(i) + "w" + std::to_string(w);
    }
    nodes.push_back({i, std::move(text), {}});
    for (std::size_t c = 1; c <= branching; ++c) {
      const std::size_t child = static_cast<std::size_t>(i) * branching + c;
      if (child < total) edges.emplace_back(i, static_cast<NodeId>(child));
    }
  }
  return TextAttributedGraph(std::move(nodes), edges);
}

inline void write_dataset(const std::filesystem::path& dir, const TextAttributedGraph& g) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "nodes.jsonl", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / "nodes.jsonl").string());
    for (const auto& n : g.nodes()) {
      nlohmann::json row{{"id", n.id}, {"text", n.text}};
      if (n.label_id) row["label"] = g.label_texts()[static_cast<std::size_t>(*n.label_id)];
      out << row.dump() << '\n';
    }
  }
  {
    std::ofstream out(dir / "edges.txt", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / "edges.txt").string());
    for (auto [a, b] : g.undirected_edges()) out << a << ' ' << b << '\n';
  }
  if (!g.label_texts().empty()) {
    std::ofstream out(dir / "labels.txt", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / "labels.txt").string());
    for (const auto& label : g.label_texts()) out << label << '\n';
  }
}

inline TextAttributedGraph load_dataset(const std::filesystem::path& dir) {
  std::ifstream nodes(dir / "nodes.jsonl");
  if (!nodes) throw std::runtime_error("missing " + (dir / "nodes.jsonl").string());
  std::ifstream edges(dir / "edges.txt");
  if (!edges) throw std::runtime_error("missing " + (dir / "edges.txt").string());
  std::vector<std::string> labels;
  if (std::ifstream vocab(dir / "labels.txt"); vocab) {
    std::string line;
    while (std::getline(vocab, line))
      if (!line.empty()) labels.push_back(line);
  }
  return load_graph(nodes, edges, labels);
}

}  // namespace taga
