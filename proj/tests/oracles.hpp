// Independent reference implementations used to cross-check the library.
// Everything here is written against first principles (plain BFS over raw
// edge lists, direct formula evaluation, finite differences) and must not
// reuse library code paths under test.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <taga/rng.hpp>

namespace oracle {

// Shortest-path hop distances from src over an undirected edge list.
// Unreachable nodes get -1.
inline std::vector<int> bfs_distances(std::size_t n,
                                      const std::vector<std::pair<unsigned, unsigned>>& edges,
                                      unsigned src) {
  std::vector<std::vector<unsigned>> adj(n);
  for (auto [a, b] : edges) {
    if (a == b) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> dist(n, -1);
  dist[src] = 0;
  std::queue<unsigned> q;
  q.push(src);
  while (!q.empty()) {
    unsigned u = q.front();
    q.pop();
    for (unsigned w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

// Nodes with 1 <= dist <= k, ascending.
inline std::vector<unsigned> k_hop_set(std::size_t n,
                                       const std::vector<std::pair<unsigned, unsigned>>& edges,
                                       unsigned src, int k) {
  auto dist = bfs_distances(n, edges, src);
  std::vector<unsigned> out;
  for (unsigned v = 0; v < n; ++v)
    if (dist[v] > 0 && dist[v] <= k) out.push_back(v);
  return out;
}

// G(n, p) random graph as a deduplicated undirected edge list.
inline std::vector<std::pair<unsigned, unsigned>> erdos_renyi(std::size_t n, double p,
                                                              taga::Rng& rng) {
  std::vector<std::pair<unsigned, unsigned>> edges;
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = a + 1; b < n; ++b)
      if (rng.next_double() < p) edges.emplace_back(a, b);
  return edges;
}

// Unique undirected pairs (min, max) induced on a member subset.
inline std::set<std::pair<unsigned, unsigned>> induced_edges(
    const std::vector<std::pair<unsigned, unsigned>>& edges,
    const std::set<unsigned>& members) {
  std::set<std::pair<unsigned, unsigned>> out;
  for (auto [a, b] : edges) {
    if (a == b) continue;
    if (members.count(a) && members.count(b))
      out.emplace(std::min(a, b), std::max(a, b));
  }
  return out;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: size mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Central finite difference of f along coordinate i at x.
inline double finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x, std::size_t i, double eps = 1e-5) {
  const double xi = x[i];
  x[i] = xi + eps;
  const double fp = f(x);
  x[i] = xi - eps;
  const double fm = f(x);
  return (fp - fm) / (2 * eps);
}

// 99th-percentile chi-square critical values, degrees of freedom 1..30.
// A uniformity test statistic below the critical value accepts at alpha=0.01.
inline double chi_square_critical_99(int df) {
  static const double table[30] = {
      6.6348966010,  9.2103403720,  11.3448667301, 13.2767041359, 15.0862724694,
      16.8118938297, 18.4753069066, 20.0902350297, 21.6659943334, 23.2092511590,
      24.7249703113, 26.2169673055, 27.6882496104, 29.1412377407, 30.5779141668,
      31.9999269089, 33.4086636050, 34.8053057347, 36.1908691292, 37.5662347866,
      38.9321726835, 40.2893604375, 41.6383981188, 42.9798201393, 44.3141048962,
      45.6416826662, 46.9629421247, 48.2782357703, 49.5878844728, 50.8921813115};
  if (df < 1 || df > 30) throw std::out_of_range("chi_square_critical_99: df out of range");
  return table[df - 1];
}

// Pearson chi-square statistic for observed counts against uniform expectation.
inline double chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  const double expected = static_cast<double>(total) / counts.size();
  double stat = 0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Pearson chi-square statistic against explicit expected probabilities.
inline double chi_square_expected(const std::vector<std::uint64_t>& counts,
                                  const std::vector<double>& probs) {
  if (counts.size() != probs.size())
    throw std::invalid_argument("chi_square_expected: size mismatch");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  double stat = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = static_cast<double>(total) * probs[i];
    const double d = static_cast<double>(counts[i]) - expected;
    stat += d * d / expected;
  }
  return stat;
}

}  // namespace oracle
