// Contrastive alignment objective over a batch of view sets. The positive
// term pulls every graph view b^l_k(v) toward the same node's text view
// h_k(v); the negative term pushes it away from other batch nodes' h_k. Both
// use ordered cross pairs and the 1/(K|B|) normalization. total = positive +
// negative. The l0_only switch restricts both sums to l = 0 (the
// graph-views-only ablation).
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <taga/embedding.hpp>
#include <taga/views.hpp>

namespace taga {

struct LossReport {
  double positive = 0;
  double negative = 0;
  double total = 0;
  std::map<std::pair<int, int>, double> positive_by_pair;  // (k,l) contributions
  std::map<std::pair<int, int>, double> negative_by_pair;
};

namespace detail {

template <class T>
void validate_views(const ViewEmbeddingSet<T>& views, int K) {
  if (K < 1) throw std::invalid_argument("max order must be at least 1");
  if (static_cast<int>(views.h.size()) != K + 1)
    throw std::invalid_argument("view set of node " + std::to_string(views.node) +
                                " is missing text-view orders");
  for (int k = 1; k <= K; ++k)
    for (int l = 0; l < k; ++l)
      if (!views.b.count({k, l}))
        throw std::invalid_argument("view set of node " + std::to_string(views.node) +
                                    " is missing graph view (" + std::to_string(k) + "," +
                                    std::to_string(l) + ")");
}

}  // namespace detail

template <class T>
double positive_loss(const std::vector<ViewEmbeddingSet<T>>& batch, int K,
                     bool l0_only = false) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  double acc = 0;
  for (const auto& views : batch) {
    detail::validate_views(views, K);
    for (int k = 1; k <= K; ++k)
      for (int l = 0; l < (l0_only ? 1 : k); ++l)
        acc += cosine(views.b.at({k, l}), views.h[k]);
  }
  return -acc / (static_cast<double>(K) * static_cast<double>(batch.size()));
}

template <class T>
double negative_loss(const std::vector<ViewEmbeddingSet<T>>& batch, int K,
                     bool l0_only = false) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  double acc = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    detail::validate_views(batch[i], K);
    for (std::size_t j = 0; j < batch.size(); ++j) {
      if (i == j) continue;  // ordered pairs, both directions counted
      for (int k = 1; k <= K; ++k)
        for (int l = 0; l < (l0_only ? 1 : k); ++l)
          acc += cosine(batch[i].b.at({k, l}), batch[j].h[k]);
    }
  }
  return acc / (static_cast<double>(K) * static_cast<double>(batch.size()));
}

template <class T>
LossReport total_loss(const std::vector<ViewEmbeddingSet<T>>& batch, int K,
                      bool l0_only = false) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  LossReport report;
  const double norm = static_cast<double>(K) * static_cast<double>(batch.size());
  for (const auto& views : batch) detail::validate_views(views, K);
  for (int k = 1; k <= K; ++k) {
    for (int l = 0; l < (l0_only ? 1 : k); ++l) {
      double pos = 0, neg = 0;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        pos += cosine(batch[i].b.at({k, l}), batch[i].h[k]);
        for (std::size_t j = 0; j < batch.size(); ++j)
          if (i != j) neg += cosine(batch[i].b.at({k, l}), batch[j].h[k]);
      }
      report.positive_by_pair[{k, l}] = -pos / norm;
      report.negative_by_pair[{k, l}] = neg / norm;
      report.positive += -pos / norm;
      report.negative += neg / norm;
    }
  }
  report.total = report.positive + report.negative;
  return report;
}

// d cosine(a, b) / d a = b/(|a||b|) - cos(a,b) * a/|a|^2; zero when either
// vector has zero norm (the similarity is defined as the constant 0 there).
template <class T>
std::vector<double> cosine_grad_wrt_first(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine gradient: size mismatch");
  double na2 = 0, nb2 = 0, dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = static_cast<double>(a[i]);
    const double y = static_cast<double>(b[i]);
    na2 += x * x;
    nb2 += y * y;
    dot += x * y;
  }
  std::vector<double> grad(a.size(), 0.0);
  if (na2 == 0.0 || nb2 == 0.0) return grad;
  const double na = std::sqrt(na2);
  const double nb = std::sqrt(nb2);
  const double cos = dot / (na * nb);
  for (std::size_t i = 0; i < a.size(); ++i)
    grad[i] = static_cast<double>(b[i]) / (na * nb) -
              cos * static_cast<double>(a[i]) / na2;
  return grad;
}

}  // namespace taga
