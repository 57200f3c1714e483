// Multi-order view construction: for a node v, the k-order text view h_k(v)
// embeds the rendered k-hop document (or the mean over random-walk
// sub-documents), and the (k,l) graph view b^l_k(v) runs the first (k-l)
// layers of the GNN stack over the l-order text embeddings of v's
// (k-l)-hop ball. Text-view embeddings are memoized: they are constant with
// respect to the GNN parameters.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <taga/document.hpp>
#include <taga/embedding.hpp>
#include <taga/gnn.hpp>
#include <taga/graph.hpp>
#include <taga/walks.hpp>

namespace taga {

enum class TofgMode { full, random_walk };

struct ViewConfig {
  int max_order = 3;  // K
  TofgMode tofg_mode = TofgMode::full;
  WalkConfig walk;  // used in random_walk mode

  bool operator==(const ViewConfig&) const = default;
};

template <class T>
struct ViewEmbeddingSet {
  NodeId node{};
  std::vector<std::vector<T>> h;                         // order k = 0..K
  std::map<std::pair<int, int>, std::vector<T>> b;       // key (k, l), l < k
};

// Computes and memoizes text-view embeddings h_k(v). Order 0 is the node's
// own corpus verbatim; higher orders render the k-hop document. In
// random-walk mode, orders >= 1 average the embeddings of walk sub-documents.
class TofgEmbedder {
 public:
  TofgEmbedder(const TextAttributedGraph& graph, EmbeddingProvider& provider,
               ViewConfig cfg = {})
      : graph_(graph), provider_(provider), cfg_(std::move(cfg)) {}

  const TextAttributedGraph& graph() const { return graph_; }
  std::size_t dimension() const { return provider_.dimension(); }
  const ViewConfig& config() const { return cfg_; }

  // Document text backing h_k(v); order 0 is the raw node corpus.
  std::string document_text(NodeId v, int k) const {
    if (k == 0) return graph_.text(v);
    auto ego = build_ego_graph(graph_, v, k);
    return render(layout(ego, graph_)).content;
  }

  std::vector<float> embed(NodeId v, int k) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find({v, k});
      if (it != memo_.end()) return it->second;
    }
    std::vector<float> vec = compute(v, k);
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(std::pair{v, k}, std::move(vec)).first->second;
  }

  // Embeds all missing (node, order) pairs in one provider pass so remote
  // backends can batch. Orders 0..max_order for every listed node.
  void prefetch(const std::vector<NodeId>& nodes, int max_order) {
    std::vector<std::pair<NodeId, int>> missing;
    {
      std::lock_guard<std::mutex> lock(mu_);
      for (NodeId v : nodes)
        for (int k = 0; k <= max_order; ++k)
          if (!memo_.count({v, k})) missing.emplace_back(v, k);
    }
    if (missing.empty()) return;
    if (cfg_.tofg_mode == TofgMode::random_walk) {
      // Walk corpora need per-document averaging; delegate per pair.
      for (auto [v, k] : missing) embed(v, k);
      return;
    }
    std::vector<std::string> texts;
    texts.reserve(missing.size());
    for (auto [v, k] : missing) texts.push_back(document_text(v, k));
    auto vectors = provider_.embed(texts);
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < missing.size(); ++i)
      memo_.emplace(missing[i], std::move(vectors[i]));
  }

 private:
  std::vector<float> compute(NodeId v, int k) {
    if (k == 0 || cfg_.tofg_mode == TofgMode::full) {
      auto vectors = provider_.embed({document_text(v, k)});
      return std::move(vectors[0]);
    }
    // Random-walk mode: mean of the walk sub-document embeddings.
    auto ego = build_ego_graph(graph_, v, k);
    auto doc = layout(ego, graph_);
    auto corpus = walk_corpus(ego, doc, cfg_.walk);
    std::vector<std::string> texts;
    texts.reserve(corpus.size());
    for (auto& d : corpus) texts.push_back(std::move(d.content));
    auto vectors = provider_.embed(texts);
    std::vector<float> mean(provider_.dimension(), 0.0f);
    for (const auto& vec : vectors)
      for (std::size_t f = 0; f < mean.size(); ++f) mean[f] += vec[f];
    const float inv = 1.0f / static_cast<float>(vectors.size());
    for (auto& x : mean) x *= inv;
    return mean;
  }

  const TextAttributedGraph& graph_;
  EmbeddingProvider& provider_;
  ViewConfig cfg_;
  std::mutex mu_;
  std::map<std::pair<NodeId, int>, std::vector<float>> memo_;
};

// Ball structure reused by every (k,l) pair with the same GNN depth.
struct BallSubgraph {
  std::vector<NodeId> members;  // ascending; includes the center
  std::vector<std::pair<std::size_t, std::size_t>> local_edges;
  std::size_t target_index = 0;
};

inline BallSubgraph ball_subgraph(const TextAttributedGraph& g, NodeId v, int radius) {
  BallSubgraph ball;
  ball.members = k_hop_neighborhood(g, v, radius);
  ball.members.push_back(v);
  std::sort(ball.members.begin(), ball.members.end());
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < ball.members.size(); ++i) index[ball.members[i]] = i;
  for (NodeId a : ball.members)
    for (NodeId b : g.neighbors(a)) {
      if (a < b) {
        auto it = index.find(b);
        if (it != index.end()) ball.local_edges.emplace_back(index[a], it->second);
      }
    }
  ball.target_index = index[v];
  return ball;
}

template <class T>
struct GoftTapeEntry {
  GnnTape<T> tape;
  std::vector<NodeId> members;
  std::size_t target_index = 0;
};

template <class T>
struct ViewsWithTapes {
  ViewEmbeddingSet<T> views;
  std::map<std::pair<int, int>, GoftTapeEntry<T>> tapes;
};

namespace detail {

template <class T>
std::vector<T> to_scalar(const std::vector<float>& v) {
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<T>(v[i]);
  return out;
}

}  // namespace detail

// Builds every view of one node: h[0..K] and b[(k,l)] for all 0 <= l < k <= K.
// With record_tapes, saves what the training backward pass needs.
template <class T>
ViewsWithTapes<T> build_views_with_tapes(const GnnParameters<T>& params,
                                         TofgEmbedder& embedder, NodeId node,
                                         bool record_tapes = true) {
  const ViewConfig& cfg = embedder.config();
  const int K = cfg.max_order;
  if (K < 1) throw std::invalid_argument("max_order must be at least 1");
  if (params.num_layers < static_cast<std::size_t>(K))
    throw std::invalid_argument("GNN stack has fewer layers than max_order");
  if (params.dim != embedder.dimension())
    throw std::invalid_argument("GNN dimension does not match the provider dimension");
  const auto& g = embedder.graph();

  ViewsWithTapes<T> out;
  out.views.node = node;
  for (int k = 0; k <= K; ++k)
    out.views.h.push_back(detail::to_scalar<T>(embedder.embed(node, k)));

  for (int depth = 1; depth <= K; ++depth) {
    auto ball = ball_subgraph(g, node, depth);
    for (int l = 0; l + depth <= K; ++l) {
      std::vector<std::vector<T>> features;
      features.reserve(ball.members.size());
      for (NodeId m : ball.members)
        features.push_back(detail::to_scalar<T>(embedder.embed(m, l)));
      const int k = l + depth;
      if (record_tapes) {
        GoftTapeEntry<T> entry;
        entry.members = ball.members;
        entry.target_index = ball.target_index;
        out.views.b[{k, l}] =
            gnn_forward(params, static_cast<std::size_t>(depth), features, ball.local_edges,
                        ball.target_index, Activation::tanh, &entry.tape);
        out.tapes.emplace(std::pair{k, l}, std::move(entry));
      } else {
        out.views.b[{k, l}] =
            gnn_forward(params, static_cast<std::size_t>(depth), features, ball.local_edges,
                        ball.target_index, Activation::tanh);
      }
    }
  }
  return out;
}

template <class T>
ViewEmbeddingSet<T> build_views(const GnnParameters<T>& params, TofgEmbedder& embedder,
                                NodeId node) {
  return build_views_with_tapes<T>(params, embedder, node, /*record_tapes=*/false).views;
}

}  // namespace taga
