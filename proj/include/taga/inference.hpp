#pragma once

// Node classification on top of aligned embeddings: zero-shot prediction by
// softmax over label-prompt cosines, an optional few-shot residual adapter,
// seeded support/validation/test splits, and accuracy reporting.

#include <taga/checkpoint.hpp>
#include <taga/loss.hpp>
#include <taga/parallel.hpp>
#include <taga/views.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace taga {

struct LabelEmbeddings {
  std::vector<std::string> labels;
  std::vector<std::vector<float>> vectors;  // one per label, provider order
};

// Renders each label through the prompt template ("{}" is replaced by the
// label text) and embeds the results.
inline LabelEmbeddings embed_labels(EmbeddingProvider& provider,
                                    const std::vector<std::string>& labels,
                                    const std::string& prompt_template = "{}") {
  if (labels.empty()) throw std::invalid_argument("label set is empty");
  std::vector<std::string> prompts;
  prompts.reserve(labels.size());
  for (const auto& label : labels) {
    std::string prompt = prompt_template;
    if (const auto pos = prompt.find("{}"); pos != std::string::npos)
      prompt.replace(pos, 2, label);
    else
      prompt = label;
    prompts.push_back(std::move(prompt));
  }
  return {labels, provider.embed(prompts)};
}

struct NodeEmbedding {
  NodeId node = 0;
  std::vector<float> vector;
};

struct Prediction {
  NodeId node = 0;
  std::vector<double> probabilities;  // sums to 1, strictly positive
  std::size_t predicted = 0;          // argmax, ties -> lowest index
};

// How a node's final embedding is produced from a trained checkpoint.
struct EmbedMode {
  enum class Kind {
    aggregated,  // full-depth network over the raw node-text embeddings
    text_only,   // provider embedding of the hop document, no network
  };
  Kind kind = Kind::aggregated;
  int text_order = -1;  // text_only: document order; -1 means the checkpoint's max
};

inline std::vector<float> node_embedding(const Checkpoint& ckpt, TofgEmbedder& embedder,
                                         NodeId node, const EmbedMode& mode = {}) {
  const auto& g = embedder.graph();
  if (node >= g.num_nodes())
    throw std::out_of_range("unknown node " + std::to_string(node));
  const int K = ckpt.view.max_order;
  if (mode.kind == EmbedMode::Kind::text_only) {
    const int order = mode.text_order < 0 ? K : mode.text_order;
    return embedder.embed(node, order);
  }
  if (ckpt.params.dim != embedder.dimension())
    throw std::invalid_argument("checkpoint dimension " + std::to_string(ckpt.params.dim) +
                                " does not match provider dimension " +
                                std::to_string(embedder.dimension()));
  if (static_cast<int>(ckpt.params.num_layers) < K)
    throw std::invalid_argument("checkpoint is shallower than its view order");
  auto ball = ball_subgraph(g, node, K);
  std::vector<std::vector<float>> features;
  features.reserve(ball.members.size());
  for (NodeId m : ball.members) features.push_back(embedder.embed(m, 0));
  return gnn_forward(ckpt.params, K, features, ball.local_edges, ball.target_index);
}

inline std::vector<NodeEmbedding> node_embeddings(const Checkpoint& ckpt,
                                                  TofgEmbedder& embedder,
                                                  const std::vector<NodeId>& nodes,
                                                  const EmbedMode& mode = {},
                                                  int threads = 1) {
  if (mode.kind == EmbedMode::Kind::text_only) {
    const int order = mode.text_order < 0 ? ckpt.view.max_order : mode.text_order;
    embedder.prefetch(nodes, order);
  } else {
    embedder.prefetch(nodes, 0);
  }
  std::vector<NodeEmbedding> out(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) {
    out[i] = {nodes[i], node_embedding(ckpt, embedder, nodes[i], mode)};
  });
  return out;
}

namespace detail {

inline std::vector<double> label_similarities(const std::vector<float>& x,
                                              const LabelEmbeddings& labels) {
  std::vector<double> s;
  s.reserve(labels.vectors.size());
  for (const auto& l : labels.vectors) s.push_back(cosine(x, l));
  return s;
}

inline Prediction softmax_prediction(NodeId node, const std::vector<double>& similarities) {
  Prediction p;
  p.node = node;
  double denom = 0;
  for (double s : similarities) denom += std::exp(s);
  p.probabilities.reserve(similarities.size());
  for (double s : similarities) p.probabilities.push_back(std::exp(s) / denom);
  p.predicted = static_cast<std::size_t>(
      std::max_element(p.probabilities.begin(), p.probabilities.end()) -
      p.probabilities.begin());  // max_element keeps the first of equal maxima
  return p;
}

}  // namespace detail

inline std::vector<Prediction> zero_shot(const std::vector<NodeEmbedding>& embeddings,
                                         const LabelEmbeddings& labels) {
  if (labels.labels.empty() || labels.vectors.empty())
    throw std::invalid_argument("label set is empty");
  std::vector<Prediction> out;
  out.reserve(embeddings.size());
  for (const auto& e : embeddings)
    out.push_back(detail::softmax_prediction(e.node, detail::label_similarities(e.vector, labels)));
  return out;
}

// One-hidden-layer residual refinement g(x) = x + W2 tanh(W1 x + b1) + b2.
// W2, b1, b2 start at zero, so a fresh adapter is the identity map.
struct FewShotAdapter {
  Matrix<double> hidden;             // W1
  std::vector<double> hidden_bias;   // b1
  Matrix<double> output;             // W2
  std::vector<double> output_bias;   // b2
  std::size_t epochs_trained = 0;
  double learning_rate = 0;

  std::size_t dimension() const { return hidden_bias.size(); }

  std::vector<float> apply(const std::vector<float>& x) const {
    const std::size_t F = dimension();
    if (x.size() != F) throw std::invalid_argument("adapter dimension mismatch");
    std::vector<double> u(F), t(F);
    for (std::size_t i = 0; i < F; ++i) {
      double acc = hidden_bias[i];
      for (std::size_t j = 0; j < F; ++j) acc += hidden(i, j) * x[j];
      u[i] = acc;
      t[i] = std::tanh(acc);
    }
    std::vector<float> out(F);
    for (std::size_t i = 0; i < F; ++i) {
      double acc = static_cast<double>(x[i]) + output_bias[i];
      for (std::size_t j = 0; j < F; ++j) acc += output(i, j) * t[j];
      out[i] = static_cast<float>(acc);
    }
    return out;
  }
};

inline FewShotAdapter make_adapter(std::size_t dimension, std::uint64_t seed) {
  FewShotAdapter a;
  a.hidden = Matrix<double>(dimension, dimension);
  a.output = Matrix<double>(dimension, dimension);
  a.hidden_bias.assign(dimension, 0.0);
  a.output_bias.assign(dimension, 0.0);
  const double bound = std::sqrt(6.0 / (2.0 * static_cast<double>(dimension)));
  Rng rng = Rng::derive(seed, {0x61646170u /* adapter stream */});
  for (auto& v : a.hidden.data) v = rng.next_uniform(-bound, bound);
  return a;
}

struct FewShotConfig {
  std::size_t epochs = 100;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

namespace detail {

// Mean cross-entropy of the adapted softmax over the support set.
inline double support_loss(const FewShotAdapter& adapter,
                           const std::vector<NodeEmbedding>& support,
                           const std::vector<int>& support_labels,
                           const LabelEmbeddings& labels) {
  double loss = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    auto g = adapter.apply(support[i].vector);
    auto p = softmax_prediction(support[i].node, label_similarities(g, labels));
    loss += -std::log(p.probabilities[static_cast<std::size_t>(support_labels[i])]);
  }
  return loss / static_cast<double>(support.size());
}

}  // namespace detail

// Fits the adapter by full-batch gradient descent on the cross-entropy of the
// adapted softmax over the support set. Returns the best-on-support iterate,
// so the fitted loss never exceeds the identity-initialization loss.
inline FewShotAdapter few_shot_fit(const std::vector<NodeEmbedding>& support,
                                   const std::vector<int>& support_labels,
                                   const LabelEmbeddings& labels,
                                   const FewShotConfig& cfg = {}) {
  if (support.empty()) throw std::invalid_argument("support set is empty");
  if (support.size() != support_labels.size())
    throw std::invalid_argument("support set and labels differ in length");
  const std::size_t num_labels = labels.vectors.size();
  if (num_labels == 0) throw std::invalid_argument("label set is empty");
  for (int y : support_labels)
    if (y < 0 || static_cast<std::size_t>(y) >= num_labels)
      throw std::invalid_argument("support label out of range");
  const std::size_t F = support.front().vector.size();

  FewShotAdapter adapter = make_adapter(F, cfg.seed);
  adapter.learning_rate = cfg.learning_rate;
  FewShotAdapter best = adapter;
  double best_loss = detail::support_loss(adapter, support, support_labels, labels);
  if (!std::isfinite(best_loss)) throw std::runtime_error("non-finite adapter loss");

  std::vector<double> label_d;  // labels as doubles, reused per sample
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Matrix<double> d_hidden(F, F), d_output(F, F);
    std::vector<double> d_hidden_bias(F, 0.0), d_output_bias(F, 0.0);

    for (std::size_t i = 0; i < support.size(); ++i) {
      const auto& x = support[i].vector;
      std::vector<double> u(F), t(F), g(F);
      for (std::size_t r = 0; r < F; ++r) {
        double acc = adapter.hidden_bias[r];
        for (std::size_t c = 0; c < F; ++c) acc += adapter.hidden(r, c) * x[c];
        u[r] = acc;
        t[r] = std::tanh(acc);
      }
      for (std::size_t r = 0; r < F; ++r) {
        double acc = static_cast<double>(x[r]) + adapter.output_bias[r];
        for (std::size_t c = 0; c < F; ++c) acc += adapter.output(r, c) * t[c];
        g[r] = acc;
      }

      std::vector<double> sims(num_labels);
      for (std::size_t j = 0; j < num_labels; ++j) {
        label_d.assign(labels.vectors[j].begin(), labels.vectors[j].end());
        sims[j] = cosine(g, label_d);
      }
      double denom = 0;
      for (double s : sims) denom += std::exp(s);

      std::vector<double> dg(F, 0.0);
      for (std::size_t j = 0; j < num_labels; ++j) {
        const double coeff = std::exp(sims[j]) / denom -
                             (static_cast<std::size_t>(support_labels[i]) == j ? 1.0 : 0.0);
        label_d.assign(labels.vectors[j].begin(), labels.vectors[j].end());
        auto dcos = cosine_grad_wrt_first(g, label_d);
        for (std::size_t r = 0; r < F; ++r) dg[r] += coeff * dcos[r];
      }

      for (std::size_t r = 0; r < F; ++r) {
        d_output_bias[r] += dg[r];
        for (std::size_t c = 0; c < F; ++c) d_output(r, c) += dg[r] * t[c];
      }
      std::vector<double> du(F);
      for (std::size_t c = 0; c < F; ++c) {
        double acc = 0;
        for (std::size_t r = 0; r < F; ++r) acc += adapter.output(r, c) * dg[r];
        du[c] = acc * (1.0 - t[c] * t[c]);
      }
      for (std::size_t r = 0; r < F; ++r) {
        d_hidden_bias[r] += du[r];
        for (std::size_t c = 0; c < F; ++c) d_hidden(r, c) += du[r] * x[c];
      }
    }

    const double scale = cfg.learning_rate / static_cast<double>(support.size());
    for (std::size_t i = 0; i < F * F; ++i) {
      adapter.hidden.data[i] -= scale * d_hidden.data[i];
      adapter.output.data[i] -= scale * d_output.data[i];
    }
    for (std::size_t i = 0; i < F; ++i) {
      adapter.hidden_bias[i] -= scale * d_hidden_bias[i];
      adapter.output_bias[i] -= scale * d_output_bias[i];
    }
    adapter.epochs_trained = epoch + 1;

    const double loss = detail::support_loss(adapter, support, support_labels, labels);
    if (!std::isfinite(loss)) throw std::runtime_error("non-finite adapter loss");
    if (loss < best_loss) {
      best_loss = loss;
      best = adapter;
    }
  }
  best.learning_rate = cfg.learning_rate;
  return best;
}

inline std::vector<Prediction> adapted_predictions(const FewShotAdapter& adapter,
                                                   const std::vector<NodeEmbedding>& embeddings,
                                                   const LabelEmbeddings& labels) {
  std::vector<NodeEmbedding> adapted;
  adapted.reserve(embeddings.size());
  for (const auto& e : embeddings) adapted.push_back({e.node, adapter.apply(e.vector)});
  return zero_shot(adapted, labels);
}

struct EvalSplit {
  std::vector<NodeId> support;
  std::vector<NodeId> validation;
  std::vector<NodeId> test;
};

// Draws `shots` support nodes per class, then splits the remaining labeled
// nodes 1:9 into validation and test. Deterministic per seed.
inline EvalSplit make_split(const TextAttributedGraph& g, std::size_t shots,
                            std::uint64_t seed) {
  const auto labeled = g.labeled_nodes();
  if (labeled.empty()) throw std::invalid_argument("graph has no labeled nodes");

  EvalSplit split;
  std::vector<bool> in_support(g.num_nodes(), false);
  if (shots > 0) {
    const std::size_t num_labels = g.label_texts().size();
    for (std::size_t c = 0; c < num_labels; ++c) {
      std::vector<NodeId> members;
      for (NodeId v : labeled)
        if (static_cast<std::size_t>(*g.label_id(v)) == c) members.push_back(v);
      Rng rng = Rng::derive(seed, {0x73686f74u /* support stream */, c});
      rng.shuffle(members);
      for (std::size_t i = 0; i < std::min(shots, members.size()); ++i) {
        split.support.push_back(members[i]);
        in_support[members[i]] = true;
      }
    }
    std::sort(split.support.begin(), split.support.end());
  }

  std::vector<NodeId> rest;
  for (NodeId v : labeled)
    if (!in_support[v]) rest.push_back(v);
  Rng rng = Rng::derive(seed, {0x72657374u /* holdout stream */});
  rng.shuffle(rest);
  const std::size_t validation_size = rest.size() / 10;
  split.validation.assign(rest.begin(), rest.begin() + validation_size);
  split.test.assign(rest.begin() + validation_size, rest.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

struct AccuracyReport {
  double accuracy = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
};

inline AccuracyReport evaluate(const std::vector<Prediction>& predictions,
                               const TextAttributedGraph& g,
                               const std::vector<NodeId>& split) {
  std::unordered_map<NodeId, std::size_t> predicted;
  for (const auto& p : predictions) predicted[p.node] = p.predicted;
  AccuracyReport report;
  for (NodeId v : split) {
    const auto truth = g.label_id(v);
    if (!truth) throw std::invalid_argument("node " + std::to_string(v) + " has no label");
    const auto it = predicted.find(v);
    if (it == predicted.end())
      throw std::invalid_argument("no prediction for node " + std::to_string(v));
    ++report.total;
    if (it->second == static_cast<std::size_t>(*truth)) ++report.correct;
  }
  report.accuracy =
      report.total ? static_cast<double>(report.correct) / static_cast<double>(report.total) : 0.0;
  return report;
}

}  // namespace taga
