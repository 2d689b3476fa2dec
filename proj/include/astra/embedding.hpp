#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace astra {

/// Fixed-length vector of finite reals.
class EmbeddingVector {
public:
    EmbeddingVector() = default;
    /// Throws DimensionMismatch on an empty vector and InvalidArgument on
    /// non-finite entries.
    explicit EmbeddingVector(std::vector<double> values);

    std::size_t dimension() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    std::vector<double> values_;
};

enum class EmbedderKind { Deterministic, Remote };

struct EmbedderConfig {
    EmbedderKind kind = EmbedderKind::Deterministic;
    std::size_t dimension = 384;
    std::optional<std::string> endpoint;
    std::optional<std::string> model_name;

    /// Throws InvalidConfig when remote settings are incomplete or the
    /// dimension is zero.
    void validate() const;
};

std::string_view to_string(EmbedderKind kind);
std::optional<EmbedderKind> parse_embedder_kind(std::string_view s);

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual EmbeddingVector embed(std::string_view text) const = 0;
    virtual std::size_t dimension() const noexcept = 0;
    /// Identifies provider and configuration; indexes and reports carry it so
    /// vectors from different providers never get compared.
    virtual std::string id() const = 0;
};

/// Hashed bag-of-tokens: lowercase, split on non-alphanumerics, FNV-1a 64
/// per token into bucket h % dimension with the sign taken from bit 63,
/// then L2-normalize. Pure and thread-safe.
class HashedBowEmbedder final : public Embedder {
public:
    explicit HashedBowEmbedder(std::size_t dimension = 384);

    EmbeddingVector embed(std::string_view text) const override;
    std::size_t dimension() const noexcept override { return dimension_; }
    std::string id() const override;

private:
    std::size_t dimension_;
};

/// Client for `POST {endpoint}/api/embeddings` with
/// `{"model": ..., "prompt": ...}` -> `{"embedding": [...]}`.
class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(std::string endpoint, std::string model_name, std::size_t dimension);

    EmbeddingVector embed(std::string_view text) const override;
    std::size_t dimension() const noexcept override { return dimension_; }
    std::string id() const override;

private:
    std::string endpoint_;
    std::string model_name_;
    std::size_t dimension_;
};

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config);

/// One-shot convenience over make_embedder(config)->embed(text).
EmbeddingVector embed_text(std::string_view text, const EmbedderConfig& config);

/// dot(a, b) / (|a| |b|), clamped to [-1, 1].
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

std::uint64_t fnv1a64(std::string_view data) noexcept;

/// Tokens used by the hashed provider, in input order.
std::vector<std::string> hash_tokens(std::string_view text);

}  // namespace astra
