// Hierarchical document layout over an ego-graph: tree sections numbered by
// pre-order traversal ("1", "1.1", "1.2", ...), one cross-reference per
// cross-edge placed at the later endpoint, deterministic text rendering, and
// an inverse parser that recovers the structure from the text.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <taga/graph.hpp>
#include <taga/text.hpp>

namespace taga {

struct Section {
  std::string number;  // dotted id, e.g. "1.2.1"
  NodeId node{};
  std::string text;
  std::vector<std::string> references;  // targets, each earlier in document order
};

struct HierarchicalDocument {
  NodeId root{};
  std::vector<Section> sections;                    // document (= preorder) order
  std::unordered_map<NodeId, std::string> by_node;  // node id -> section number
};

struct DocumentText {
  std::string content;
  std::size_t word_count = 0;  // maximal non-whitespace runs in content
};

namespace detail {

// "12.3.1. anything" -> number part; header requires ". " after the number.
inline std::optional<std::string> match_header_number(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t start = i;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    if (i == start) return std::nullopt;  // empty component
    if (i >= line.size() || line[i] != '.') return std::nullopt;
    ++i;  // consume '.'
    if (i < line.size() && line[i] == ' ') return std::string(line.substr(0, i - 1));
    // otherwise the '.' separated components; continue
  }
  return std::nullopt;
}

inline std::optional<std::string> match_reference_target(std::string_view line) {
  constexpr std::string_view prefix = "See also section ";
  if (line.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string_view rest = line.substr(prefix.size());
  if (rest.empty() || rest.back() != '.') return std::nullopt;
  rest.remove_suffix(1);
  if (rest.empty()) return std::nullopt;
  bool expect_digit = true;
  for (char c : rest) {
    if (c >= '0' && c <= '9') {
      expect_digit = false;
    } else if (c == '.' && !expect_digit) {
      expect_digit = true;
    } else {
      return std::nullopt;
    }
  }
  if (expect_digit) return std::nullopt;
  return std::string(rest);
}

inline bool collides_with_grammar(std::string_view line) {
  if (!line.empty() && line.front() == '\\') return true;
  return match_header_number(line).has_value() || match_reference_target(line).has_value();
}

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

inline std::string title_for(NodeId node, const std::string& text) {
  auto words = tokenize_whitespace(text);
  if (words.empty()) return "Node " + std::to_string(node);
  std::string title;
  for (std::size_t i = 0; i < words.size() && i < 8; ++i) {
    if (i) title += ' ';
    title += words[i];
  }
  return title;
}

}  // namespace detail

// Section numbering by pre-order traversal; each cross-edge becomes one
// reference at its later-in-preorder endpoint targeting the earlier one.
inline HierarchicalDocument layout(const EgoGraph& ego, const TextAttributedGraph& g) {
  HierarchicalDocument doc;
  doc.root = ego.root;

  std::unordered_map<NodeId, std::size_t> order;
  for (std::size_t i = 0; i < ego.preorder.size(); ++i) order[ego.preorder[i]] = i;

  // Numbers follow the tree: the i-th child (ascending id) of a section
  // numbered p is numbered p.i.
  doc.by_node[ego.root] = "1";
  for (NodeId v : ego.preorder) {
    const auto& kids = ego.children(v);
    for (std::size_t i = 0; i < kids.size(); ++i)
      doc.by_node[kids[i]] = doc.by_node[v] + "." + std::to_string(i + 1);
  }

  std::unordered_map<NodeId, std::vector<NodeId>> ref_targets;  // source -> earlier nodes
  for (auto [a, b] : ego.cross_edges) {
    NodeId earlier = order[a] < order[b] ? a : b;
    NodeId later = order[a] < order[b] ? b : a;
    ref_targets[later].push_back(earlier);
  }
  for (auto& [src, targets] : ref_targets)
    std::sort(targets.begin(), targets.end(),
              [&](NodeId x, NodeId y) { return order[x] < order[y]; });

  for (NodeId v : ego.preorder) {
    Section s;
    s.number = doc.by_node[v];
    s.node = v;
    s.text = g.text(v);
    for (NodeId t : ref_targets[v]) s.references.push_back(doc.by_node[t]);
    doc.sections.push_back(std::move(s));
  }
  return doc;
}

// Byte-deterministic rendering; body lines colliding with the header or
// reference grammar are escaped with a leading backslash.
inline DocumentText render(const HierarchicalDocument& doc) {
  std::string out;
  for (const auto& s : doc.sections) {
    out += s.number;
    out += ". ";
    out += detail::title_for(s.node, s.text);
    out += '\n';
    for (const auto& line : detail::split_lines(s.text)) {
      if (detail::collides_with_grammar(line)) out += '\\';
      out += line;
      out += '\n';
    }
    for (const auto& target : s.references) {
      out += "See also section ";
      out += target;
      out += ".\n";
    }
  }
  return DocumentText{out, count_words(out)};
}

// Inverse of render∘layout: recovers the tree from section-number nesting and
// the cross-edges from reference lines. Node ids in the result are document
// positions (0-based), so the root is id 0 and ids follow preorder.
inline EgoGraph parse(const DocumentText& text) {
  std::map<std::string, NodeId> section_ids;
  std::map<std::string, std::size_t> child_counts;
  EgoGraph ego;
  ego.root = 0;
  bool any = false;
  int max_depth = 0;

  for (const auto& line : detail::split_lines(text.content)) {
    if (!line.empty() && line.front() == '\\') continue;  // escaped body line
    if (auto target = detail::match_reference_target(line)) {
      if (!any) throw std::invalid_argument("reference before first section: " + line);
      auto it = section_ids.find(*target);
      if (it == section_ids.end())
        throw std::invalid_argument("reference to unknown or later section " + *target);
      NodeId self = static_cast<NodeId>(section_ids.size() - 1);
      ego.cross_edges.emplace_back(std::min(it->second, self), std::max(it->second, self));
      continue;
    }
    if (auto number = detail::match_header_number(line)) {
      if (!any) {
        if (*number != "1") throw std::invalid_argument("document must open with section 1");
        any = true;
        section_ids.emplace("1", 0);
        ego.members.push_back(0);
        continue;
      }
      if (section_ids.count(*number))
        throw std::invalid_argument("duplicate section number " + *number);
      auto dot = number->rfind('.');
      if (dot == std::string::npos)
        throw std::invalid_argument("second root section " + *number);
      const std::string parent = number->substr(0, dot);
      const std::string index = number->substr(dot + 1);
      auto pit = section_ids.find(parent);
      if (pit == section_ids.end())
        throw std::invalid_argument("section " + *number + " has no parent section");
      if (index != std::to_string(child_counts[parent] + 1))
        throw std::invalid_argument("non-contiguous child numbering at section " + *number);
      ++child_counts[parent];
      NodeId id = static_cast<NodeId>(section_ids.size());
      section_ids.emplace(*number, id);
      ego.members.push_back(id);
      ego.tree_edges.emplace_back(pit->second, id);
      int depth = 0;
      for (char c : *number)
        if (c == '.') ++depth;
      max_depth = std::max(max_depth, depth);
      continue;
    }
    // plain body line: carries no structure
  }
  if (!any) throw std::invalid_argument("document has no sections");
  ego.hops = max_depth;
  std::sort(ego.cross_edges.begin(), ego.cross_edges.end());
  ego.finalize();
  return ego;
}

// Baseline rendering that states nodes and connections in flat sentences,
// numbering members 1..n in preorder.
inline DocumentText flat_edge_listing(const EgoGraph& ego, const TextAttributedGraph& g) {
  std::unordered_map<NodeId, std::size_t> number;
  for (std::size_t i = 0; i < ego.preorder.size(); ++i) number[ego.preorder[i]] = i + 1;

  std::string out;
  for (NodeId v : ego.preorder) {
    std::string text = g.text(v);
    for (char& c : text)
      if (c == '\n') c = ' ';
    out += "Node " + std::to_string(number[v]) + ": " + text + ".\n";
  }
  std::vector<std::pair<std::size_t, std::size_t>> listed;
  for (auto [p, c] : ego.tree_edges)
    listed.emplace_back(std::min(number[p], number[c]), std::max(number[p], number[c]));
  for (auto [a, b] : ego.cross_edges)
    listed.emplace_back(std::min(number[a], number[b]), std::max(number[a], number[b]));
  std::sort(listed.begin(), listed.end());
  for (auto [a, b] : listed)
    out += "Node " + std::to_string(a) + " connects to node " + std::to_string(b) + ".\n";
  return DocumentText{out, count_words(out)};
}

}  // namespace taga
