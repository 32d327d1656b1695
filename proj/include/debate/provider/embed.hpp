#pragma once

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace debate::provider {

struct EmbeddingVector {
  std::vector<double> values;
  std::string model_tag;

  std::size_t dimension() const { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) = 0;
  virtual std::string model_tag() const = 0;
  virtual std::size_t dimension() const = 0;
};

/// Offline stub: each text maps to a pseudo-random vector derived from
/// sha256(text). Identical texts collide exactly; distinct texts are
/// near-orthogonal.
class HashEmbedder : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dimension = 64);

  EmbeddingVector embed(std::string_view text) override;
  std::string model_tag() const override;
  std::size_t dimension() const override { return dim_; }

 private:
  std::size_t dim_;
};

/// Offline embedder with some lexical signal: lowercase word tokens hashed
/// into signed buckets. Texts sharing vocabulary get positive cosine.
class TokenHashEmbedder : public Embedder {
 public:
  explicit TokenHashEmbedder(std::size_t dimension = 256);

  EmbeddingVector embed(std::string_view text) override;
  std::string model_tag() const override;
  std::size_t dimension() const override { return dim_; }

 private:
  std::size_t dim_;
};

/// Memoizes an embedder by (model_tag, sha256(text)). Concurrent readers,
/// serialized writers.
class CachingEmbedder : public Embedder {
 public:
  explicit CachingEmbedder(Embedder& inner) : inner_(inner) {}

  EmbeddingVector embed(std::string_view text) override;
  std::string model_tag() const override { return inner_.model_tag(); }
  std::size_t dimension() const override { return inner_.dimension(); }

  std::size_t cache_size() const;
  std::size_t inner_calls() const;

 private:
  Embedder& inner_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::vector<double>> cache_;
  std::size_t inner_calls_ = 0;
};

}  // namespace debate::provider
