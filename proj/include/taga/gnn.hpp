// Message-passing networks (GCN / GraphSAGE / GIN) with hand-derived exact
// reverse-mode gradients. A single stack of layers serves every depth: a
// d-layer network is the stack's first d layers, so shallower passes share
// parameters with deeper ones. Neighbor sums always accumulate in ascending
// node order for bit-reproducibility.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <taga/linalg.hpp>
#include <taga/rng.hpp>

namespace taga {

enum class GnnArch { gcn, sage, gin };

inline const char* arch_name(GnnArch a) {
  switch (a) {
    case GnnArch::gcn: return "gcn";
    case GnnArch::sage: return "sage";
    default: return "gin";
  }
}

inline GnnArch arch_from_name(const std::string& name) {
  if (name == "gcn") return GnnArch::gcn;
  if (name == "sage") return GnnArch::sage;
  if (name == "gin") return GnnArch::gin;
  throw std::invalid_argument("unknown architecture: " + name);
}

enum class Activation { tanh, identity };

template <class T>
struct GnnLayer {
  Matrix<T> weight;        // gcn/gin: the linear map; sage: the self block
  Matrix<T> weight_neigh;  // sage only: the neighbor-mean block
  std::vector<T> bias;
  T epsilon = T(0);        // gin only
};

template <class T>
struct GnnParameters {
  GnnArch arch = GnnArch::gcn;
  std::size_t num_layers = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<GnnLayer<T>> layers;
};

// Glorot-style uniform init in [-sqrt(6/(2F)), +sqrt(6/(2F))]; biases and
// epsilons zero. Each matrix draws from its own (seed, layer, slot) stream.
template <class T>
GnnParameters<T> init_params(GnnArch arch, std::size_t num_layers, std::size_t dim,
                             std::uint64_t seed) {
  if (num_layers < 1) throw std::invalid_argument("num_layers must be positive");
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  GnnParameters<T> params;
  params.arch = arch;
  params.num_layers = num_layers;
  params.dim = dim;
  params.seed = seed;
  const double bound = std::sqrt(6.0 / (2.0 * static_cast<double>(dim)));
  for (std::size_t l = 0; l < num_layers; ++l) {
    GnnLayer<T> layer;
    auto fill = [&](Matrix<T>& m, std::uint64_t slot) {
      m = Matrix<T>(dim, dim);
      Rng rng = Rng::derive(seed, {l, slot});
      for (auto& v : m.data) v = static_cast<T>(rng.next_uniform(-bound, bound));
    };
    fill(layer.weight, 0);
    if (arch == GnnArch::sage) fill(layer.weight_neigh, 1);
    layer.bias.assign(dim, T(0));
    layer.epsilon = T(0);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

// Zero-filled gradients with the same shapes as the parameters.
template <class T>
GnnParameters<T> zero_like(const GnnParameters<T>& params) {
  GnnParameters<T> grads;
  grads.arch = params.arch;
  grads.num_layers = params.num_layers;
  grads.dim = params.dim;
  grads.seed = params.seed;
  for (const auto& layer : params.layers) {
    GnnLayer<T> g;
    g.weight = Matrix<T>(layer.weight.rows, layer.weight.cols);
    if (layer.weight_neigh.rows)
      g.weight_neigh = Matrix<T>(layer.weight_neigh.rows, layer.weight_neigh.cols);
    g.bias.assign(layer.bias.size(), T(0));
    g.epsilon = T(0);
    grads.layers.push_back(std::move(g));
  }
  return grads;
}

template <class T, class U>
GnnParameters<U> convert_params(const GnnParameters<T>& params) {
  GnnParameters<U> out;
  out.arch = params.arch;
  out.num_layers = params.num_layers;
  out.dim = params.dim;
  out.seed = params.seed;
  for (const auto& layer : params.layers) {
    GnnLayer<U> c;
    c.weight = Matrix<U>(layer.weight.rows, layer.weight.cols);
    for (std::size_t i = 0; i < layer.weight.data.size(); ++i)
      c.weight.data[i] = static_cast<U>(layer.weight.data[i]);
    if (layer.weight_neigh.rows) {
      c.weight_neigh = Matrix<U>(layer.weight_neigh.rows, layer.weight_neigh.cols);
      for (std::size_t i = 0; i < layer.weight_neigh.data.size(); ++i)
        c.weight_neigh.data[i] = static_cast<U>(layer.weight_neigh.data[i]);
    }
    c.bias.reserve(layer.bias.size());
    for (T b : layer.bias) c.bias.push_back(static_cast<U>(b));
    c.epsilon = static_cast<U>(layer.epsilon);
    out.layers.push_back(std::move(c));
  }
  return out;
}

// Saved activations from a forward pass, consumed by the backward pass.
// inputs[l] feeds layer l; neighbor_agg[l] is the layer's aggregation result
// (GCN: normalized sum, SAGE: neighbor mean, GIN: (1+eps)self + sum);
// outputs[l] is the layer's activation output.
template <class T>
struct GnnTape {
  std::size_t depth = 0;
  Activation activation = Activation::tanh;
  std::vector<std::vector<std::size_t>> adj;  // sorted local adjacency
  std::vector<Matrix<T>> inputs, neighbor_agg, outputs;
};

namespace detail {

template <class T>
std::vector<std::vector<std::size_t>> build_local_adjacency(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw std::invalid_argument("edge endpoint outside node set");
    if (a == b) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return adj;
}

template <class T>
T activate(T z, Activation act) {
  return act == Activation::tanh ? std::tanh(z) : z;
}

// Derivative expressed through the layer output y (tanh' = 1 - y^2).
template <class T>
T activate_grad_from_output(T y, Activation act) {
  return act == Activation::tanh ? T(1) - y * y : T(1);
}

}  // namespace detail

// Runs `depth` layers of the stack over a local subgraph and returns the
// target node's final vector. With a tape, saves everything backward needs.
template <class T>
std::vector<T> gnn_forward(const GnnParameters<T>& params, std::size_t depth,
                           const std::vector<std::vector<T>>& features,
                           const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                           std::size_t target, Activation act = Activation::tanh,
                           GnnTape<T>* tape = nullptr) {
  const std::size_t n = features.size();
  const std::size_t F = params.dim;
  if (depth < 1 || depth > params.num_layers)
    throw std::invalid_argument("depth must be in [1, num_layers]");
  if (target >= n) throw std::invalid_argument("unknown target node");
  for (const auto& f : features)
    if (f.size() != F) throw std::invalid_argument("feature dimension mismatch");

  auto adj = detail::build_local_adjacency<T>(n, edges);

  Matrix<T> x(n, F);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < F; ++j) x(i, j) = features[i][j];

  if (tape) {
    *tape = GnnTape<T>{};
    tape->depth = depth;
    tape->activation = act;
    tape->adj = adj;
  }

  for (std::size_t l = 0; l < depth; ++l) {
    const auto& layer = params.layers[l];
    Matrix<T> agg(n, F);
    for (std::size_t i = 0; i < n; ++i) {
      T* out = agg.row(i);
      const T* self = x.row(i);
      switch (params.arch) {
        case GnnArch::gcn: {
          // Symmetric normalization with an implicit self-loop:
          // agg_i = sum_{j in N(i) u {i}} x_j / sqrt((d_i+1)(d_j+1))
          const double di = static_cast<double>(adj[i].size()) + 1.0;
          for (std::size_t f = 0; f < F; ++f) out[f] = static_cast<T>(self[f] / di);
          for (std::size_t j : adj[i]) {
            const double dj = static_cast<double>(adj[j].size()) + 1.0;
            const T coeff = static_cast<T>(1.0 / std::sqrt(di * dj));
            const T* nb = x.row(j);
            for (std::size_t f = 0; f < F; ++f) out[f] += coeff * nb[f];
          }
          break;
        }
        case GnnArch::sage: {
          // Neighbor mean only; the self term has its own weight block.
          if (!adj[i].empty()) {
            for (std::size_t j : adj[i]) {
              const T* nb = x.row(j);
              for (std::size_t f = 0; f < F; ++f) out[f] += nb[f];
            }
            const T inv = T(1) / static_cast<T>(adj[i].size());
            for (std::size_t f = 0; f < F; ++f) out[f] *= inv;
          }
          break;
        }
        case GnnArch::gin: {
          const T scale = T(1) + layer.epsilon;
          for (std::size_t f = 0; f < F; ++f) out[f] = scale * self[f];
          for (std::size_t j : adj[i]) {
            const T* nb = x.row(j);
            for (std::size_t f = 0; f < F; ++f) out[f] += nb[f];
          }
          break;
        }
      }
    }

    Matrix<T> y(n, F);
    std::vector<T> z(F), neigh_part(F);
    for (std::size_t i = 0; i < n; ++i) {
      if (params.arch == GnnArch::sage) {
        // z = W_self x_i + W_neigh mean(neighbors)
        matvec(layer.weight, x.row(i), z.data());
        matvec(layer.weight_neigh, agg.row(i), neigh_part.data());
        for (std::size_t f = 0; f < F; ++f) z[f] += neigh_part[f];
      } else {
        matvec(layer.weight, agg.row(i), z.data());
      }
      for (std::size_t f = 0; f < F; ++f)
        y(i, f) = detail::activate(z[f] + layer.bias[f], act);
    }

    if (tape) {
      tape->inputs.push_back(x);
      tape->neighbor_agg.push_back(agg);
      tape->outputs.push_back(y);
    }
    x = std::move(y);
  }

  std::vector<T> result(F);
  for (std::size_t f = 0; f < F; ++f) result[f] = x(target, f);
  return result;
}

// Reverse-mode pass: upstream is dLoss/d(output of target node). Parameter
// gradients are accumulated into `grads` (callers zero it or accumulate over a
// batch deliberately).
template <class T>
void gnn_backward(const GnnParameters<T>& params, const GnnTape<T>& tape, std::size_t target,
                  const std::vector<T>& upstream, GnnParameters<T>& grads) {
  if (tape.inputs.size() != tape.depth || tape.outputs.size() != tape.depth)
    throw std::invalid_argument("tape is incomplete; run forward with a tape first");
  const std::size_t F = params.dim;
  const std::size_t n = tape.adj.size();
  if (upstream.size() != F) throw std::invalid_argument("upstream gradient dimension mismatch");
  if (target >= n) throw std::invalid_argument("unknown target node");
  const auto& adj = tape.adj;

  Matrix<T> dy(n, F);
  for (std::size_t f = 0; f < F; ++f) dy(target, f) = upstream[f];

  std::vector<T> dz(F), tmp(F);
  for (std::size_t l = tape.depth; l-- > 0;) {
    const auto& layer = params.layers[l];
    auto& glayer = grads.layers[l];
    const auto& x = tape.inputs[l];
    const auto& agg = tape.neighbor_agg[l];
    const auto& y = tape.outputs[l];

    Matrix<T> dagg(n, F);
    Matrix<T> dx(n, F);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t f = 0; f < F; ++f)
        dz[f] = dy(i, f) * detail::activate_grad_from_output(y(i, f), tape.activation);
      for (std::size_t f = 0; f < F; ++f) glayer.bias[f] += dz[f];

      if (params.arch == GnnArch::sage) {
        add_outer(glayer.weight, dz.data(), x.row(i));
        add_outer(glayer.weight_neigh, dz.data(), agg.row(i));
        matvec_transposed(layer.weight, dz.data(), tmp.data());
        for (std::size_t f = 0; f < F; ++f) dx(i, f) += tmp[f];
        matvec_transposed(layer.weight_neigh, dz.data(), tmp.data());
      } else {
        add_outer(glayer.weight, dz.data(), agg.row(i));
        matvec_transposed(layer.weight, dz.data(), tmp.data());
      }
      for (std::size_t f = 0; f < F; ++f) dagg(i, f) = tmp[f];
    }

    // Push aggregation gradients back onto the layer inputs.
    for (std::size_t i = 0; i < n; ++i) {
      const T* da = dagg.row(i);
      switch (params.arch) {
        case GnnArch::gcn: {
          const double di = static_cast<double>(adj[i].size()) + 1.0;
          for (std::size_t f = 0; f < F; ++f) dx(i, f) += static_cast<T>(da[f] / di);
          for (std::size_t j : adj[i]) {
            const double dj = static_cast<double>(adj[j].size()) + 1.0;
            const T coeff = static_cast<T>(1.0 / std::sqrt(di * dj));
            for (std::size_t f = 0; f < F; ++f) dx(j, f) += coeff * da[f];
          }
          break;
        }
        case GnnArch::sage: {
          if (!adj[i].empty()) {
            const T inv = T(1) / static_cast<T>(adj[i].size());
            for (std::size_t j : adj[i])
              for (std::size_t f = 0; f < F; ++f) dx(j, f) += inv * da[f];
          }
          break;
        }
        case GnnArch::gin: {
          const T scale = T(1) + layer.epsilon;
          T deps = T(0);
          for (std::size_t f = 0; f < F; ++f) {
            dx(i, f) += scale * da[f];
            deps += da[f] * x(i, f);
          }
          glayer.epsilon += deps;
          for (std::size_t j : adj[i])
            for (std::size_t f = 0; f < F; ++f) dx(j, f) += da[f];
          break;
        }
      }
    }
    dy = std::move(dx);
  }
}

}  // namespace taga
