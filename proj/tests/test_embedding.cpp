#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include <taga/embedding.hpp>

#include "oracles.hpp"

namespace {

std::string temp_path(const char* stem) {
  auto dir = std::filesystem::temp_directory_path() / "taga_embed_tests";
  std::filesystem::create_directories(dir);
  return (dir / stem).string();
}

double norm(const std::vector<float>& v) {
  double s = 0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("cosine closed forms") {
  std::vector<double> x{3.0, -1.0, 2.0};
  CHECK(taga::cosine(x, x) == Catch::Approx(1.0).margin(1e-12));

  std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0}, diag{1.0, 1.0};
  CHECK(taga::cosine(e1, e2) == Catch::Approx(0.0).margin(1e-15));
  CHECK(taga::cosine(e1, diag) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("cosine handles zero vectors and rejects dimension mismatch") {
  std::vector<double> z{0.0, 0.0}, x{1.0, 2.0};
  CHECK(taga::cosine(z, x) == 0.0);
  CHECK(taga::cosine(x, z) == 0.0);
  std::vector<double> longer{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(taga::cosine(x, longer), std::invalid_argument);
}

TEST_CASE("cosine is symmetric, bounded and scale-invariant") {
  taga::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(16), b(16);
    for (auto& v : a) v = rng.next_uniform(-2, 2);
    for (auto& v : b) v = rng.next_uniform(-2, 2);
    const double c = taga::cosine(a, b);
    CHECK(c >= -1.0 - 1e-12);
    CHECK(c <= 1.0 + 1e-12);
    CHECK(taga::cosine(b, a) == Catch::Approx(c).margin(1e-12));
    const double alpha = rng.next_uniform(0.1, 5.0);
    std::vector<double> scaled(a);
    for (auto& v : scaled) v *= alpha;
    CHECK(taga::cosine(scaled, b) == Catch::Approx(c).margin(1e-9));
    CHECK(c == Catch::Approx(oracle::cosine(a, b)).margin(1e-12));
  }
}

TEST_CASE("hash embedding of empty text is the zero vector") {
  auto v = taga::hash_embed("", 64);
  REQUIRE(v.size() == 64);
  for (float x : v) CHECK(x == 0.0f);
  auto punct = taga::hash_embed("...!!!---", 64);
  for (float x : punct) CHECK(x == 0.0f);
}

TEST_CASE("hash embedding is deterministic and unit-norm") {
  const std::string text = "Graphs, with TEXT attributes; and 42 tokens!";
  auto a = taga::hash_embed(text, 128);
  auto b = taga::hash_embed(text, 128);
  REQUIRE(a == b);
  CHECK(norm(a) == Catch::Approx(1.0).margin(1e-6));
  // Case and punctuation are folded away by tokenization.
  auto c = taga::hash_embed("graphs with text attributes and 42 tokens", 128);
  REQUIRE(a == c);
}

TEST_CASE("token overlap orders cosine similarity") {
  // Two documents sharing 90% of their tokens versus two sharing none.
  std::string shared, extra_a, extra_b, disjoint_a, disjoint_b;
  for (int i = 0; i < 90; ++i) shared += " common" + std::to_string(i);
  extra_a = shared;
  extra_b = shared;
  for (int i = 0; i < 10; ++i) {
    extra_a += " onlya" + std::to_string(i);
    extra_b += " onlyb" + std::to_string(i);
    disjoint_a += " left" + std::to_string(i);
    disjoint_b += " right" + std::to_string(i);
  }
  auto a1 = taga::hash_embed(extra_a, 256);
  auto a2 = taga::hash_embed(extra_b, 256);
  auto d1 = taga::hash_embed(disjoint_a, 256);
  auto d2 = taga::hash_embed(disjoint_b, 256);
  const double overlapping = taga::cosine(a1, a2);
  const double disjoint = taga::cosine(d1, d2);
  CHECK(overlapping > disjoint);
  CHECK(overlapping > 0.5);
  CHECK(std::abs(disjoint) < 0.5);
}

TEST_CASE("hash provider embeds batches in input order") {
  taga::HashProvider provider(64);
  auto got = provider.embed({"first text", "second text"});
  REQUIRE(got.size() == 2);
  CHECK(got[0] == taga::hash_embed("first text", 64));
  CHECK(got[1] == taga::hash_embed("second text", 64));
  CHECK(provider.dimension() == 64);
}

TEST_CASE("cache stores and returns bit-identical vectors across reopen") {
  const std::string path = temp_path("cache_roundtrip.bin");
  std::remove(path.c_str());

  std::vector<float> vec{1.5f, -2.25f, 0.0f, 3.0e-7f};
  {
    taga::EmbeddingCache cache(path);
    CHECK_FALSE(cache.lookup("model-a", 4, "some text").has_value());
    cache.store("model-a", 4, "some text", vec);
    cache.store("model-b", 4, "some text", {4.0f, 3.0f, 2.0f, 1.0f});
    auto hit = cache.lookup("model-a", 4, "some text");
    REQUIRE(hit.has_value());
    CHECK(*hit == vec);
  }
  {
    taga::EmbeddingCache reopened(path);
    CHECK(reopened.size() == 2);
    auto hit = reopened.lookup("model-a", 4, "some text");
    REQUIRE(hit.has_value());
    CHECK(*hit == vec);  // bit-identical after restart
    // Same text under a different model or dimension is a distinct entry.
    CHECK_FALSE(reopened.lookup("model-a", 8, "some text").has_value());
    auto other = reopened.lookup("model-b", 4, "some text");
    REQUIRE(other.has_value());
    CHECK((*other)[0] == 4.0f);
  }
  std::remove(path.c_str());
}

TEST_CASE("cache rejects vectors of the wrong dimension") {
  taga::EmbeddingCache cache;
  CHECK_THROWS_AS(cache.store("m", 4, "text", {1.0f, 2.0f}), std::invalid_argument);
}
