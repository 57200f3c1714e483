// Text-embedding providers and the similarity function. The hash provider is
// a fully deterministic signed-feature-hashing encoder used offline; real
// models are reached through the remote client (remote.hpp). Both share a
// persistent on-disk cache keyed by (model name, dimension, content hash).
#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <taga/rng.hpp>
#include <taga/text.hpp>

namespace taga {

enum class ProviderKind { hash, remote };

struct ProviderDescriptor {
  ProviderKind kind = ProviderKind::hash;
  std::size_t dimension = 256;
  std::string model_name = "hash-256";
  std::string endpoint;     // remote only
  bool normalize = true;

  bool operator==(const ProviderDescriptor&) const = default;
};

// dot(a,b) / (|a||b|), accumulated in double; 0 when either norm is 0.
template <class T>
double cosine(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = static_cast<double>(a[i]);
    const double y = static_cast<double>(b[i]);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Signed feature hashing: lowercase alphanumeric tokens, bucket g mod F,
// sign from the hash's top bit, result L2-normalized (or exactly zero).
inline std::vector<float> hash_embed(std::string_view text, std::size_t F) {
  if (F < 1) throw std::invalid_argument("hash_embed: dimension must be positive");
  std::vector<double> acc(F, 0.0);
  bool any = false;
  for (const auto& token : tokenize_alnum(text)) {
    const std::uint64_t g = mix64(fnv1a64(token));
    const std::size_t bucket = static_cast<std::size_t>(g % F);
    acc[bucket] += (g >> 63) ? -1.0 : 1.0;
    any = true;
  }
  std::vector<float> out(F, 0.0f);
  if (!any) return out;
  double norm = 0;
  for (double v : acc) norm += v * v;
  if (norm == 0.0) return out;  // signs cancelled exactly
  norm = std::sqrt(norm);
  for (std::size_t i = 0; i < F; ++i) out[i] = static_cast<float>(acc[i] / norm);
  return out;
}

// Append-only binary cache of embedding vectors. Each record:
//   u32 model-name length, model-name bytes, u32 dimension,
//   two u64 content hashes, dimension * f32 values (little-endian).
class EmbeddingCache {
 public:
  EmbeddingCache() = default;
  explicit EmbeddingCache(std::string path) : path_(std::move(path)) { load(); }

  std::optional<std::vector<float>> lookup(const std::string& model, std::size_t F,
                                           std::string_view text) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = store_.find(key_for(model, F, text));
    if (it == store_.end()) return std::nullopt;
    return it->second;
  }

  void store(const std::string& model, std::size_t F, std::string_view text,
             const std::vector<float>& vec) {
    if (vec.size() != F) throw std::invalid_argument("cache: vector dimension mismatch");
    std::lock_guard<std::mutex> lock(mu_);
    auto key = key_for(model, F, text);
    if (!store_.emplace(key, vec).second) return;  // already present
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cache: cannot open " + path_);
    write_u32(out, static_cast<std::uint32_t>(model.size()));
    out.write(model.data(), static_cast<std::streamsize>(model.size()));
    write_u32(out, static_cast<std::uint32_t>(F));
    write_u64(out, std::get<2>(key));
    write_u64(out, std::get<3>(key));
    for (float v : vec) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      write_u32(out, bits);
    }
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return store_.size();
  }

 private:
  using Key = std::tuple<std::string, std::size_t, std::uint64_t, std::uint64_t>;

  static Key key_for(const std::string& model, std::size_t F, std::string_view text) {
    return {model, F, fnv1a64(text), fnv1a64_seeded(text, 0x5851f42d4c957f2dull)};
  }

  static void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                 static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
    out.write(b, 4);
  }
  static void write_u64(std::ostream& out, std::uint64_t v) {
    write_u32(out, static_cast<std::uint32_t>(v));
    write_u32(out, static_cast<std::uint32_t>(v >> 32));
  }
  static std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  static std::uint64_t read_u64(std::istream& in) {
    const std::uint64_t lo = read_u32(in);
    const std::uint64_t hi = read_u32(in);
    return lo | (hi << 32);
  }

  void load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;  // fresh cache
    while (true) {
      const std::uint32_t name_len = read_u32(in);
      if (!in) break;
      std::string model(name_len, '\0');
      in.read(model.data(), name_len);
      const std::uint32_t F = read_u32(in);
      const std::uint64_t h1 = read_u64(in);
      const std::uint64_t h2 = read_u64(in);
      std::vector<float> vec(F);
      for (std::uint32_t i = 0; i < F; ++i) {
        const std::uint32_t bits = read_u32(in);
        std::memcpy(&vec[i], &bits, 4);
      }
      if (!in) throw std::runtime_error("cache: truncated record in " + path_);
      store_[{std::move(model), F, h1, h2}] = std::move(vec);
    }
  }

  std::string path_;
  mutable std::mutex mu_;
  std::map<Key, std::vector<float>> store_;
};

// Uniform interface over embedding backends; batch in, vectors out, input order.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) = 0;
  virtual std::size_t dimension() const = 0;
  virtual const std::string& model_name() const = 0;
};

class HashProvider final : public EmbeddingProvider {
 public:
  explicit HashProvider(std::size_t F = 256, std::string name = "")
      : F_(F), name_(name.empty() ? "hash-" + std::to_string(F) : std::move(name)) {}

  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(hash_embed(t, F_));
    return out;
  }
  std::size_t dimension() const override { return F_; }
  const std::string& model_name() const override { return name_; }

 private:
  std::size_t F_;
  std::string name_;
};

}  // namespace taga
