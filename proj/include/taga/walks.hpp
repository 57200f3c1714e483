// Structure-preserving random walks over an ego-graph: descend the BFS tree
// from the root, optionally jumping across a cross-edge with probability p,
// then continue through the destination's subtree. Walk-restricted
// sub-documents keep original section numbers and only the references whose
// endpoints were both visited.
#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <taga/document.hpp>
#include <taga/graph.hpp>
#include <taga/rng.hpp>

namespace taga {

struct WalkConfig {
  double jump_probability = 0.3;
  std::size_t max_length = 8;
  std::size_t num_walks = 8;
  std::uint64_t seed = 0;

  bool operator==(const WalkConfig&) const = default;
};

inline WalkConfig default_walk_config(int hops, std::uint64_t seed = 0) {
  WalkConfig cfg;
  cfg.max_length = static_cast<std::size_t>(hops) + 2;
  cfg.seed = seed;
  return cfg;
}

struct WalkPath {
  std::vector<NodeId> nodes;                 // nodes[0] = ego root
  std::vector<std::size_t> jump_positions;   // indices reached via cross-edge
};

// One walk: while the path is short and the current node has tree children,
// draw once; with probability p (and cross-edges present) jump to a uniform
// cross neighbor, else step to a uniform tree child.
inline WalkPath sample_walk(const EgoGraph& ego, const WalkConfig& cfg, Rng& rng) {
  WalkPath path;
  path.nodes.push_back(ego.root);
  NodeId v = ego.root;
  while (path.nodes.size() < cfg.max_length && !ego.children(v).empty()) {
    const double r = rng.next_double();
    const auto& cross = ego.cross_neighbors(v);
    if (r < cfg.jump_probability && !cross.empty()) {
      v = cross[rng.next_below(cross.size())];
      path.jump_positions.push_back(path.nodes.size());
    } else {
      const auto& kids = ego.children(v);
      v = kids[rng.next_below(kids.size())];
    }
    path.nodes.push_back(v);
  }
  return path;
}

// Restriction of a document to the distinct nodes visited by a walk: sections
// stay in document order with their original numbers; a reference survives
// only if both of its endpoints were visited.
inline DocumentText walk_subdocument(const HierarchicalDocument& doc, const WalkPath& path) {
  std::set<NodeId> visited(path.nodes.begin(), path.nodes.end());
  for (NodeId v : visited)
    if (!doc.by_node.count(v))
      throw std::invalid_argument("walk node " + std::to_string(v) +
                                  " has no section in the document");
  std::set<std::string> visited_numbers;
  for (NodeId v : visited) visited_numbers.insert(doc.by_node.at(v));

  HierarchicalDocument restricted;
  restricted.root = doc.root;
  for (const auto& s : doc.sections) {
    if (!visited_numbers.count(s.number)) continue;
    Section keep = s;
    keep.references.clear();
    for (const auto& t : s.references)
      if (visited_numbers.count(t)) keep.references.push_back(t);
    restricted.by_node[s.node] = s.number;
    restricted.sections.push_back(std::move(keep));
  }
  return render(restricted);
}

// W independent walks -> W sub-documents, one RNG sub-stream per walk index.
inline std::vector<DocumentText> walk_corpus(const EgoGraph& ego,
                                             const HierarchicalDocument& doc,
                                             const WalkConfig& cfg) {
  std::vector<DocumentText> out;
  out.reserve(cfg.num_walks);
  for (std::size_t w = 0; w < cfg.num_walks; ++w) {
    Rng rng = Rng::derive(cfg.seed, {ego.root, w});
    out.push_back(walk_subdocument(doc, sample_walk(ego, cfg, rng)));
  }
  return out;
}

}  // namespace taga
