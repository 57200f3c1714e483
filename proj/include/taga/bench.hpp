// Corpus-growth benchmark: for hop orders 0..k_max, measures how much text
// the two view constructions feed the embedding provider. Word counts cover
// the section bodies (the member node texts), not the numbering scaffolding,
// so they obey exact closed forms on regular graphs. Order 0 bypasses
// document building in both columns, matching the embedding pipeline.
#pragma once

#include <chrono>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <taga/document.hpp>
#include <taga/graph.hpp>
#include <taga/rng.hpp>
#include <taga/text.hpp>
#include <taga/walks.hpp>

namespace taga {

struct BenchRow {
  int hops = 0;
  double full_words = 0;    // mean over roots: body words of the full document
  double walk_words = 0;    // mean over roots: total body words across the walk corpus
  double full_seconds = 0;  // wall clock to build the full documents (reported only)
  double walk_seconds = 0;  // wall clock to build the walk corpora (reported only)
};

struct BenchReport {
  double average_degree = 0;
  std::size_t dimension = 0;  // provider width, echoed for context
  std::size_t num_roots = 0;
  std::vector<BenchRow> rows;  // hops = 0..k_max
};

namespace detail {

inline std::size_t body_words(const TextAttributedGraph& g, const std::vector<NodeId>& members) {
  std::size_t n = 0;
  for (NodeId v : members) n += count_words(g.text(v));
  return n;
}

// Distinct-node body words of one walk corpus, replaying the same per-walk
// RNG substreams walk_corpus uses.
inline std::size_t walk_corpus_body_words(const TextAttributedGraph& g, const EgoGraph& ego,
                                          const WalkConfig& cfg) {
  std::size_t total = 0;
  for (std::size_t w = 0; w < cfg.num_walks; ++w) {
    Rng rng = Rng::derive(cfg.seed, {ego.root, w});
    auto path = sample_walk(ego, cfg, rng);
    std::set<NodeId> visited(path.nodes.begin(), path.nodes.end());
    for (NodeId v : visited) total += count_words(g.text(v));
  }
  return total;
}

}  // namespace detail

// Default roots: `count` nodes sampled without replacement (all nodes when the
// graph is smaller), deterministic per seed.
inline std::vector<NodeId> sample_bench_roots(const TextAttributedGraph& g, std::size_t count,
                                              std::uint64_t seed = 0) {
  std::vector<NodeId> all(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) all[v] = v;
  Rng rng = Rng::derive(seed, {0x726f6f7473ull});
  rng.shuffle(all);
  if (all.size() > count) all.resize(count);
  return all;
}

// Per hop k: the full column counts every member text of the k-hop document;
// the walk column counts the distinct nodes each of the W walks visits, summed
// over the corpus, with the walk length capped at k+1 nodes. Wall-clock
// columns time the real document construction (layout + render, and the walk
// corpus) and are reported, never asserted.
inline BenchReport bench_corpus(const TextAttributedGraph& g, int k_max,
                                const WalkConfig& walk_base = {},
                                std::vector<NodeId> roots = {},
                                std::size_t dimension = 0) {
  if (g.num_nodes() == 0) throw std::invalid_argument("bench_corpus: empty graph");
  if (k_max < 0) throw std::invalid_argument("bench_corpus: negative hop count");
  if (roots.empty()) roots = sample_bench_roots(g, 20, walk_base.seed);
  for (NodeId r : roots)
    if (r >= g.num_nodes())
      throw std::out_of_range("bench_corpus: unknown root " + std::to_string(r));

  using clock = std::chrono::steady_clock;
  BenchReport report;
  report.average_degree = g.average_degree();
  report.dimension = dimension;
  report.num_roots = roots.size();

  for (int k = 0; k <= k_max; ++k) {
    BenchRow row;
    row.hops = k;
    double full_sum = 0, walk_sum = 0;
    if (k == 0) {
      const auto t0 = clock::now();
      for (NodeId r : roots) full_sum += static_cast<double>(count_words(g.text(r)));
      row.full_seconds = std::chrono::duration<double>(clock::now() - t0).count();
      walk_sum = full_sum;
      row.walk_seconds = row.full_seconds;
    } else {
      WalkConfig cfg = walk_base;
      cfg.max_length = static_cast<std::size_t>(k) + 1;

      const auto t0 = clock::now();
      std::vector<EgoGraph> egos;
      egos.reserve(roots.size());
      for (NodeId r : roots) {
        egos.push_back(build_ego_graph(g, r, k));
        render(layout(egos.back(), g));  // timed construction; counts come from members
        full_sum += static_cast<double>(detail::body_words(g, egos.back().members));
      }
      const auto t1 = clock::now();
      for (const auto& ego : egos) {
        walk_corpus(ego, layout(ego, g), cfg);  // timed construction
        walk_sum += static_cast<double>(detail::walk_corpus_body_words(g, ego, cfg));
      }
      const auto t2 = clock::now();
      row.full_seconds = std::chrono::duration<double>(t1 - t0).count();
      row.walk_seconds = std::chrono::duration<double>(t2 - t1).count();
    }
    row.full_words = full_sum / static_cast<double>(roots.size());
    row.walk_words = walk_sum / static_cast<double>(roots.size());
    report.rows.push_back(row);
  }
  return report;
}

inline nlohmann::json bench_report_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"hops", r.hops},
                    {"full_words", r.full_words},
                    {"walk_words", r.walk_words},
                    {"full_seconds", r.full_seconds},
                    {"walk_seconds", r.walk_seconds}});
  return nlohmann::json{{"average_degree", report.average_degree},
                        {"dimension", report.dimension},
                        {"num_roots", report.num_roots},
                        {"rows", rows}};
}

}  // namespace taga
