#include "debate/provider/embed.hpp"

#include <cctype>
#include <mutex>

#include "debate/core/errors.hpp"
#include "debate/provider/chat.hpp"
#include "debate/util/hash.hpp"

namespace debate::provider {

namespace {

std::uint32_t read_u32(const std::array<std::uint8_t, 32>& d, std::size_t offset) {
  return (static_cast<std::uint32_t>(d[offset]) << 24) | (static_cast<std::uint32_t>(d[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(d[offset + 2]) << 8) | static_cast<std::uint32_t>(d[offset + 3]);
}

}  // namespace

HashEmbedder::HashEmbedder(std::size_t dimension) : dim_(dimension) {
  if (dim_ == 0) throw PreconditionError("embedding dimension must be positive");
}

std::string HashEmbedder::model_tag() const { return "hash-sha256-d" + std::to_string(dim_); }

EmbeddingVector HashEmbedder::embed(std::string_view text) {
  EmbeddingVector v;
  v.model_tag = model_tag();
  v.values.reserve(dim_);
  for (std::size_t block = 0; v.values.size() < dim_; ++block) {
    std::string input(text);
    input += '\x1f';
    input += std::to_string(block);
    const auto digest = sha256(input);
    for (std::size_t off = 0; off < 32 && v.values.size() < dim_; off += 4) {
      v.values.push_back(static_cast<double>(read_u32(digest, off)) / 2147483647.5 - 1.0);
    }
  }
  return v;
}

TokenHashEmbedder::TokenHashEmbedder(std::size_t dimension) : dim_(dimension) {
  if (dim_ == 0) throw PreconditionError("embedding dimension must be positive");
}

std::string TokenHashEmbedder::model_tag() const { return "token-hash-d" + std::to_string(dim_); }

EmbeddingVector TokenHashEmbedder::embed(std::string_view text) {
  EmbeddingVector v;
  v.model_tag = model_tag();
  v.values.assign(dim_, 0.0);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const auto d = sha256(token);
    const auto bucket = read_u32(d, 0) % dim_;
    v.values[bucket] += (d[4] & 1) ? 1.0 : -1.0;
    token.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      token += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  bool all_zero = true;
  for (double x : v.values) all_zero = all_zero && x == 0.0;
  // Texts without tokens (or whose tokens cancel) still need a usable vector.
  if (all_zero) v.values[sha256(text)[0] % dim_] = 1.0;
  return v;
}

EmbeddingVector CachingEmbedder::embed(std::string_view text) {
  const auto key = inner_.model_tag() + ":" + sha256_hex(text);
  {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return {it->second, inner_.model_tag()};
  }
  auto v = inner_.embed(text);
  std::unique_lock lock(mu_);
  ++inner_calls_;
  cache_.emplace(key, v.values);
  return v;
}

std::size_t CachingEmbedder::cache_size() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

std::size_t CachingEmbedder::inner_calls() const {
  std::shared_lock lock(mu_);
  return inner_calls_;
}

}  // namespace debate::provider
