// HTTP client for remote embedding endpoints. Requests carry
// {"model": ..., "input": [texts]}; responses return {"data": [{"index",
// "embedding"}]}. Uncached texts are batched, retried with exponential
// backoff, validated against the declared dimension, and written through to
// the shared cache.
#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include <taga/embedding.hpp>

namespace taga {

struct RemoteOptions {
  std::size_t batch_size = 32;
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{200};  // doubles per retry
};

class RemoteProvider final : public EmbeddingProvider {
 public:
  RemoteProvider(ProviderDescriptor desc, EmbeddingCache* cache,
                 RemoteOptions options = {})
      : desc_(std::move(desc)), cache_(cache), options_(options) {
    if (desc_.endpoint.empty())
      throw std::invalid_argument("remote provider requires an endpoint URL");
    split_endpoint(desc_.endpoint, base_, path_);
  }

  std::size_t dimension() const override { return desc_.dimension; }
  const std::string& model_name() const override { return desc_.model_name; }

  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
    std::vector<std::vector<float>> out(texts.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (cache_) {
        if (auto hit = cache_->lookup(desc_.model_name, desc_.dimension, texts[i])) {
          out[i] = std::move(*hit);
          continue;
        }
      }
      missing.push_back(i);
    }
    for (std::size_t start = 0; start < missing.size(); start += options_.batch_size) {
      const std::size_t end = std::min(missing.size(), start + options_.batch_size);
      std::vector<std::string> batch;
      for (std::size_t j = start; j < end; ++j) batch.push_back(texts[missing[j]]);
      auto vectors = request_batch(batch);
      for (std::size_t j = start; j < end; ++j) {
        auto& vec = vectors[j - start];
        if (desc_.normalize) l2_normalize(vec);
        if (cache_) cache_->store(desc_.model_name, desc_.dimension, texts[missing[j]], vec);
        out[missing[j]] = std::move(vec);
      }
    }
    return out;
  }

 private:
  static void l2_normalize(std::vector<float>& v) {
    double norm = 0;
    for (float x : v) norm += static_cast<double>(x) * x;
    if (norm == 0.0) return;
    norm = std::sqrt(norm);
    for (float& x : v) x = static_cast<float>(x / norm);
  }

  // "http://host:port/some/path" -> ("http://host:port", "/some/path")
  static void split_endpoint(const std::string& url, std::string& base, std::string& path) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos)
      throw std::invalid_argument("endpoint must include a scheme: " + url);
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) {
      base = url;
      path = "/";
    } else {
      base = url.substr(0, slash);
      path = url.substr(slash);
    }
  }

  std::vector<std::vector<float>> request_batch(const std::vector<std::string>& batch) {
    nlohmann::json body;
    body["model"] = desc_.model_name;
    body["input"] = batch;
    const std::string payload = body.dump();

    std::string last_error;
    auto delay = options_.backoff_base;
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(delay);
        delay *= 2;
      }
      httplib::Client client(base_);
      client.set_read_timeout(60, 0);
      auto res = client.Post(path_, payload, "application/json");
      if (!res) {
        last_error = "connection failed: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP status " + std::to_string(res->status);
        continue;
      }
      return parse_response(res->body, batch.size());
    }
    throw std::runtime_error("embedding request failed after " +
                             std::to_string(options_.max_retries + 1) +
                             " attempts: " + last_error);
  }

  std::vector<std::vector<float>> parse_response(const std::string& body,
                                                 std::size_t expected) const {
    nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("data") || !parsed["data"].is_array())
      throw std::runtime_error("embedding response is not a data array");
    const auto& data = parsed["data"];
    std::vector<std::vector<float>> vectors(expected);
    std::vector<bool> seen(expected, false);
    for (const auto& item : data) {
      if (!item.contains("index") || !item.contains("embedding"))
        throw std::runtime_error("embedding response item missing index or embedding");
      const std::size_t idx = item["index"].get<std::size_t>();
      if (idx >= expected || seen[idx])
        throw std::runtime_error("embedding response index out of range or duplicated");
      auto vec = item["embedding"].get<std::vector<float>>();
      if (vec.size() != desc_.dimension)
        throw std::runtime_error("embedding dimension mismatch: expected " +
                                 std::to_string(desc_.dimension) + ", got " +
                                 std::to_string(vec.size()));
      vectors[idx] = std::move(vec);
      seen[idx] = true;
    }
    for (std::size_t i = 0; i < expected; ++i)
      if (!seen[i])
        throw std::runtime_error("embedding response missing index " + std::to_string(i));
    return vectors;
  }

  ProviderDescriptor desc_;
  EmbeddingCache* cache_;
  RemoteOptions options_;
  std::string base_;
  std::string path_;
};

inline std::unique_ptr<EmbeddingProvider> make_provider(const ProviderDescriptor& desc,
                                                        EmbeddingCache* cache = nullptr,
                                                        RemoteOptions options = {}) {
  if (desc.kind == ProviderKind::hash)
    return std::make_unique<HashProvider>(desc.dimension, desc.model_name);
  return std::make_unique<RemoteProvider>(desc, cache, options);
}

}  // namespace taga
