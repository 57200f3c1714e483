// Self-supervised training: sample a batch of nodes, build their views,
// evaluate the alignment objective, backpropagate through every graph-view
// term into the shared GNN stack, and step the optimizer on a decaying
// learning rate. Text-view embeddings are constants (no gradient reaches the
// provider). Single-threaded runs are bit-reproducible per seed; the parallel
// mode only fans out pure per-node view construction and merges in batch
// order, so results are identical for any thread count.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <taga/gnn.hpp>
#include <taga/loss.hpp>
#include <taga/parallel.hpp>
#include <taga/rng.hpp>
#include <taga/views.hpp>

namespace taga {

enum class Optimizer { adam, sgd };

struct TrainConfig {
  std::size_t steps = 40000;
  std::size_t batch_size = 8;
  double learning_rate = 1e-3;
  double decay = 0.999;          // multiplied in once per decay_every steps
  std::size_t decay_every = 10;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  bool l0_only = false;          // graph-views-only ablation
  std::size_t log_every = 10;
  int threads = 1;

  bool operator==(const TrainConfig&) const = default;
};

struct LossRecord {
  std::size_t step = 0;
  double lr = 0;
  double positive = 0;
  double negative = 0;
  double total = 0;
};

// Evaluates the batch objective and accumulates dLoss/dParameters into
// `grads` by running the saved tapes backward. Returns the loss report.
template <class T>
LossReport alignment_gradients(const std::vector<ViewsWithTapes<T>>& batch, int K,
                               const GnnParameters<T>& params, GnnParameters<T>& grads,
                               bool l0_only = false) {
  std::vector<ViewEmbeddingSet<T>> views;
  views.reserve(batch.size());
  for (const auto& item : batch) views.push_back(item.views);
  LossReport report = total_loss(views, K, l0_only);

  const double norm = static_cast<double>(K) * static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (int k = 1; k <= K; ++k) {
      for (int l = 0; l < (l0_only ? 1 : k); ++l) {
        const auto& b = views[i].b.at({k, l});
        std::vector<double> upstream(b.size(), 0.0);
        auto pos = cosine_grad_wrt_first(b, views[i].h[k]);
        for (std::size_t f = 0; f < b.size(); ++f) upstream[f] -= pos[f] / norm;
        for (std::size_t j = 0; j < batch.size(); ++j) {
          if (j == i) continue;
          auto neg = cosine_grad_wrt_first(b, views[j].h[k]);
          for (std::size_t f = 0; f < b.size(); ++f) upstream[f] += neg[f] / norm;
        }
        std::vector<T> upstream_t(upstream.size());
        for (std::size_t f = 0; f < upstream.size(); ++f)
          upstream_t[f] = static_cast<T>(upstream[f]);
        const auto& entry = batch[i].tapes.at({k, l});
        gnn_backward(params, entry.tape, entry.target_index, upstream_t, grads);
      }
    }
  }
  return report;
}

namespace detail {

template <class T, class Fn>
void for_each_tensor(GnnParameters<T>& a, GnnParameters<T>& b, GnnParameters<T>& c,
                     GnnParameters<T>& d, Fn&& fn) {
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    fn(a.layers[l].weight.data, b.layers[l].weight.data, c.layers[l].weight.data,
       d.layers[l].weight.data);
    if (a.layers[l].weight_neigh.rows)
      fn(a.layers[l].weight_neigh.data, b.layers[l].weight_neigh.data,
         c.layers[l].weight_neigh.data, d.layers[l].weight_neigh.data);
    fn(a.layers[l].bias, b.layers[l].bias, c.layers[l].bias, d.layers[l].bias);
    if (a.arch == GnnArch::gin) {
      std::vector<T> pe{a.layers[l].epsilon}, ge{b.layers[l].epsilon},
          me{c.layers[l].epsilon}, ve{d.layers[l].epsilon};
      fn(pe, ge, me, ve);
      a.layers[l].epsilon = pe[0];
      c.layers[l].epsilon = me[0];
      d.layers[l].epsilon = ve[0];
    }
  }
}

}  // namespace detail

// Adam/SGD over all parameter tensors; Adam keeps first/second-moment mirrors.
template <class T>
class OptimizerState {
 public:
  OptimizerState(const GnnParameters<T>& params, const TrainConfig& cfg)
      : cfg_(cfg), m_(zero_like(params)), v_(zero_like(params)) {}

  void step(GnnParameters<T>& params, GnnParameters<T>& grads, double lr) {
    ++t_;
    if (cfg_.optimizer == Optimizer::sgd) {
      detail::for_each_tensor(
          params, grads, m_, v_,
          [&](std::vector<T>& p, std::vector<T>& g, std::vector<T>&, std::vector<T>&) {
            for (std::size_t i = 0; i < p.size(); ++i)
              p[i] -= static_cast<T>(lr) * g[i];
          });
      return;
    }
    const double b1 = cfg_.beta1, b2 = cfg_.beta2, eps = cfg_.adam_eps;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    detail::for_each_tensor(
        params, grads, m_, v_,
        [&](std::vector<T>& p, std::vector<T>& g, std::vector<T>& m, std::vector<T>& v) {
          for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = static_cast<double>(g[i]);
            const double mi = b1 * static_cast<double>(m[i]) + (1 - b1) * gi;
            const double vi = b2 * static_cast<double>(v[i]) + (1 - b2) * gi * gi;
            m[i] = static_cast<T>(mi);
            v[i] = static_cast<T>(vi);
            p[i] -= static_cast<T>(lr * (mi / bc1) / (std::sqrt(vi / bc2) + eps));
          }
        });
  }

 private:
  TrainConfig cfg_;
  GnnParameters<T> m_, v_;
  std::uint64_t t_ = 0;
};

// Distinct node ids drawn uniformly; partial rejection sampling keeps the
// draw order (and therefore training) deterministic per seed.
inline std::vector<NodeId> sample_batch(std::size_t num_nodes, std::size_t batch_size,
                                        Rng& rng) {
  const std::size_t want = std::min(batch_size, num_nodes);
  std::vector<NodeId> batch;
  batch.reserve(want);
  while (batch.size() < want) {
    const auto v = static_cast<NodeId>(rng.next_below(num_nodes));
    if (std::find(batch.begin(), batch.end(), v) == batch.end()) batch.push_back(v);
  }
  return batch;
}

template <class T>
struct TrainResult {
  GnnParameters<T> params;
  std::vector<LossRecord> log;
};

template <class T = float>
TrainResult<T> train(TofgEmbedder& embedder, GnnArch arch, const TrainConfig& cfg) {
  const int K = embedder.config().max_order;
  const std::size_t F = embedder.dimension();
  const std::size_t n = embedder.graph().num_nodes();
  if (n == 0) throw std::invalid_argument("cannot train on an empty graph");

  TrainResult<T> result;
  result.params = init_params<T>(arch, static_cast<std::size_t>(K), F, cfg.seed);
  OptimizerState<T> optimizer(result.params, cfg);

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    Rng rng = Rng::derive(cfg.seed, {0x6261746368ull /* batch stream */, step});
    auto nodes = sample_batch(n, cfg.batch_size, rng);
    embedder.prefetch(nodes, K);

    std::vector<ViewsWithTapes<T>> batch(nodes.size());
    parallel_for(nodes.size(), cfg.threads, [&](std::size_t i) {
      batch[i] = build_views_with_tapes(result.params, embedder, nodes[i]);
    });

    auto grads = zero_like(result.params);
    LossReport report = alignment_gradients(batch, K, result.params, grads, cfg.l0_only);
    if (!std::isfinite(report.total))
      throw std::runtime_error("non-finite loss at step " + std::to_string(step) +
                               " (positive=" + std::to_string(report.positive) +
                               ", negative=" + std::to_string(report.negative) + ")");

    const double lr =
        cfg.learning_rate * std::pow(cfg.decay, static_cast<double>(step / cfg.decay_every));
    optimizer.step(result.params, grads, lr);

    if (cfg.log_every && (step % cfg.log_every == 0 || step + 1 == cfg.steps))
      result.log.push_back({step, lr, report.positive, report.negative, report.total});
  }
  return result;
}

}  // namespace taga
