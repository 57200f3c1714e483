// Text-attributed graph data model and k-hop ego-graph extraction.
//
// Graphs are immutable after construction: edges are symmetrized and
// deduplicated, self-loops dropped, node ids dense 0..N-1. Ego-graphs
// decompose a k-hop neighborhood into a BFS tree backbone plus cross-edges,
// with all tie-breaking fixed to ascending node id so rebuilds are
// bit-identical.
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace taga {

using NodeId = std::uint32_t;

struct NodeRecord {
  NodeId id{};
  std::string text;
  std::optional<int> label_id;
};

class TextAttributedGraph {
 public:
  TextAttributedGraph() = default;

  TextAttributedGraph(std::vector<NodeRecord> nodes,
                      const std::vector<std::pair<NodeId, NodeId>>& edges,
                      std::vector<std::string> label_texts = {})
      : nodes_(std::move(nodes)), label_texts_(std::move(label_texts)) {
    std::sort(nodes_.begin(), nodes_.end(),
              [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].id != i) {
        if (i > 0 && nodes_[i].id == nodes_[i - 1].id)
          throw std::invalid_argument("duplicate node id " + std::to_string(nodes_[i].id));
        throw std::invalid_argument("node ids must be dense 0..N-1; missing id " +
                                    std::to_string(i));
      }
    }
    adjacency_.assign(nodes_.size(), {});
    for (auto [a, b] : edges) {
      if (a >= nodes_.size() || b >= nodes_.size())
        throw std::invalid_argument("edge references unknown node id " +
                                    std::to_string(a >= nodes_.size() ? a : b));
      if (a == b) continue;  // self-loop
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    num_edges_ = 0;
    for (auto& nbrs : adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      num_edges_ += nbrs.size();
    }
    num_edges_ /= 2;
  }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  double average_degree() const {
    return nodes_.empty() ? 0.0 : 2.0 * static_cast<double>(num_edges_) / nodes_.size();
  }

  const NodeRecord& node(NodeId v) const {
    check(v);
    return nodes_[v];
  }
  const std::string& text(NodeId v) const { return node(v).text; }
  std::optional<int> label_id(NodeId v) const { return node(v).label_id; }
  const std::vector<NodeId>& neighbors(NodeId v) const {
    check(v);
    return adjacency_[v];
  }
  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<std::string>& label_texts() const { return label_texts_; }

  std::vector<NodeId> labeled_nodes() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
      if (n.label_id) out.push_back(n.id);
    return out;
  }

  std::vector<std::pair<NodeId, NodeId>> undirected_edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(num_edges_);
    for (NodeId v = 0; v < nodes_.size(); ++v)
      for (NodeId u : adjacency_[v])
        if (v < u) out.emplace_back(v, u);
    return out;
  }

 private:
  void check(NodeId v) const {
    if (v >= nodes_.size())
      throw std::out_of_range("unknown node id " + std::to_string(v));
  }

  std::vector<NodeRecord> nodes_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::string> label_texts_;
  std::size_t num_edges_ = 0;
};

// k-hop induced subgraph rooted at a node, split into a BFS tree backbone and
// the remaining cross-edges. tree_edges are (parent, child); cross_edges are
// stored as (min, max). preorder is the depth-first, root-first visit order
// with children taken in ascending id.
struct EgoGraph {
  NodeId root{};
  int hops = 0;
  std::vector<NodeId> members;                         // ascending
  std::vector<std::pair<NodeId, NodeId>> tree_edges;   // parent -> child
  std::vector<std::pair<NodeId, NodeId>> cross_edges;  // (min, max), sorted
  std::vector<NodeId> preorder;

  const std::vector<NodeId>& children(NodeId v) const { return lookup(tree_children_, v); }
  const std::vector<NodeId>& cross_neighbors(NodeId v) const { return lookup(cross_adj_, v); }
  bool contains(NodeId v) const {
    return std::binary_search(members.begin(), members.end(), v);
  }

  // Rebuilds the child/cross adjacency and preorder from the edge lists.
  // Producers call this once after filling members/tree_edges/cross_edges.
  void finalize() {
    tree_children_.clear();
    cross_adj_.clear();
    for (auto [p, c] : tree_edges) tree_children_[p].push_back(c);
    for (auto& [p, cs] : tree_children_) std::sort(cs.begin(), cs.end());
    for (auto [a, b] : cross_edges) {
      cross_adj_[a].push_back(b);
      cross_adj_[b].push_back(a);
    }
    for (auto& [v, cs] : cross_adj_) std::sort(cs.begin(), cs.end());
    preorder.clear();
    preorder.reserve(members.size());
    visit_preorder(root);
  }

 private:
  void visit_preorder(NodeId v) {
    preorder.push_back(v);
    for (NodeId c : children(v)) visit_preorder(c);
  }

  static const std::vector<NodeId>& lookup(
      const std::unordered_map<NodeId, std::vector<NodeId>>& m, NodeId v) {
    static const std::vector<NodeId> empty;
    auto it = m.find(v);
    return it == m.end() ? empty : it->second;
  }

  std::unordered_map<NodeId, std::vector<NodeId>> tree_children_;
  std::unordered_map<NodeId, std::vector<NodeId>> cross_adj_;
};

// Nodes at shortest-path distance 1..k from v (v itself excluded).
inline std::vector<NodeId> k_hop_neighborhood(const TextAttributedGraph& g, NodeId v, int k) {
  if (v >= g.num_nodes()) throw std::out_of_range("unknown node id " + std::to_string(v));
  std::vector<NodeId> out;
  if (k <= 0) return out;
  std::unordered_map<NodeId, int> dist{{v, 0}};
  std::vector<NodeId> frontier{v};
  for (int d = 1; d <= k && !frontier.empty(); ++d) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId w : g.neighbors(u)) {
        if (dist.emplace(w, d).second) {
          next.push_back(w);
          out.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// BFS tree + cross-edge decomposition of the k-hop ego-graph. Levels are
// expanded in ascending node id, so when several same-level parents reach a
// node the smallest-id parent claims it.
inline EgoGraph build_ego_graph(const TextAttributedGraph& g, NodeId v, int k) {
  if (v >= g.num_nodes()) throw std::out_of_range("unknown node id " + std::to_string(v));
  EgoGraph ego;
  ego.root = v;
  ego.hops = k;

  std::unordered_map<NodeId, int> dist{{v, 0}};
  std::unordered_map<NodeId, NodeId> parent;
  std::vector<NodeId> level{v};
  ego.members.push_back(v);
  for (int d = 1; d <= k && !level.empty(); ++d) {
    std::vector<NodeId> next;
    for (NodeId u : level) {  // ascending: level is sorted below
      for (NodeId w : g.neighbors(u)) {
        if (dist.emplace(w, d).second) {
          parent.emplace(w, u);
          ego.tree_edges.emplace_back(u, w);
          next.push_back(w);
          ego.members.push_back(w);
        }
      }
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  std::sort(ego.members.begin(), ego.members.end());

  for (NodeId a : ego.members) {
    for (NodeId b : g.neighbors(a)) {
      if (a < b && ego.contains(b)) {
        auto pa = parent.find(a);
        auto pb = parent.find(b);
        const bool in_tree =
            (pb != parent.end() && pb->second == a) || (pa != parent.end() && pa->second == b);
        if (!in_tree) ego.cross_edges.emplace_back(a, b);
      }
    }
  }
  std::sort(ego.cross_edges.begin(), ego.cross_edges.end());
  ego.finalize();
  return ego;
}

namespace detail {

inline void fail_line(const char* what, std::size_t line_no, const std::string& line) {
  std::ostringstream os;
  os << what << " at line " << line_no << ": " << line;
  throw std::invalid_argument(os.str());
}

}  // namespace detail

// One label string per line; order defines the label-id mapping.
inline std::vector<std::string> load_label_vocabulary(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) labels.push_back(line);
  }
  return labels;
}

// Nodes: one JSON record per line with fields "id" (integer), "text" (string)
// and optional "label" (string). Edges: either "src dst" integer pairs
// (whitespace- or comma-separated) or JSON records with "src"/"dst" fields.
// Directed edge lists are symmetrized; self-loops and duplicates dropped.
// When no label vocabulary is supplied, label ids follow first appearance.
inline TextAttributedGraph load_graph(std::istream& nodes_in, std::istream& edges_in,
                                      std::vector<std::string> label_vocabulary = {}) {
  std::vector<NodeRecord> records;
  std::unordered_map<std::string, int> label_index;
  const bool fixed_vocab = !label_vocabulary.empty();
  for (std::size_t i = 0; i < label_vocabulary.size(); ++i)
    label_index[label_vocabulary[i]] = static_cast<int>(i);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(nodes_in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("id") ||
        !rec["id"].is_number_integer() || !rec.contains("text") || !rec["text"].is_string())
      detail::fail_line("malformed node record", line_no, line);
    NodeRecord node;
    node.id = rec["id"].get<NodeId>();
    node.text = rec["text"].get<std::string>();
    if (rec.contains("label") && !rec["label"].is_null()) {
      if (!rec["label"].is_string()) detail::fail_line("malformed node record", line_no, line);
      const std::string label = rec["label"].get<std::string>();
      auto it = label_index.find(label);
      if (it == label_index.end()) {
        if (fixed_vocab)
          detail::fail_line("label not in vocabulary", line_no, line);
        it = label_index.emplace(label, static_cast<int>(label_vocabulary.size())).first;
        label_vocabulary.push_back(label);
      }
      node.label_id = it->second;
    }
    records.push_back(std::move(node));
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  line_no = 0;
  while (std::getline(edges_in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    long long a = -1, b = -1;
    if (line[0] == '{') {
      nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.contains("src") || !rec.contains("dst") ||
          !rec["src"].is_number_integer() || !rec["dst"].is_number_integer())
        detail::fail_line("malformed edge record", line_no, line);
      a = rec["src"].get<long long>();
      b = rec["dst"].get<long long>();
    } else {
      std::string normalized = line;
      std::replace(normalized.begin(), normalized.end(), ',', ' ');
      std::istringstream is(normalized);
      std::string extra;
      if (!(is >> a >> b) || (is >> extra))
        detail::fail_line("malformed edge record", line_no, line);
    }
    if (a < 0 || b < 0) detail::fail_line("malformed edge record", line_no, line);
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }

  return TextAttributedGraph(std::move(records), edges, std::move(label_vocabulary));
}

inline TextAttributedGraph load_graph_files(const std::string& nodes_path,
                                            const std::string& edges_path,
                                            const std::string& labels_path = {}) {
  std::ifstream nodes(nodes_path);
  if (!nodes) throw std::runtime_error("cannot open nodes file: " + nodes_path);
  std::ifstream edges(edges_path);
  if (!edges) throw std::runtime_error("cannot open edges file: " + edges_path);
  std::vector<std::string> vocab;
  if (!labels_path.empty()) {
    std::ifstream labels(labels_path);
    if (!labels) throw std::runtime_error("cannot open labels file: " + labels_path);
    vocab = load_label_vocabulary(labels);
  }
  return load_graph(nodes, edges, std::move(vocab));
}

}  // namespace taga
