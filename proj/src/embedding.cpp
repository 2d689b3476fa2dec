#include "astra/embedding.hpp"

#include "astra/error.hpp"
#include "astra/http.hpp"
#include "astra/util.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace astra {

namespace {
constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

bool is_alnum_ascii(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

const char* kModule = "embedding";
}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorKind::DimensionMismatch, kModule, "embedding must be non-empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::InvalidArgument, kModule,
                        "non-finite embedding value at position " + std::to_string(i));
        }
    }
}

std::string_view to_string(EmbedderKind kind) {
    return kind == EmbedderKind::Deterministic ? "deterministic" : "remote";
}

std::optional<EmbedderKind> parse_embedder_kind(std::string_view s) {
    if (s == "deterministic") return EmbedderKind::Deterministic;
    if (s == "remote") return EmbedderKind::Remote;
    return std::nullopt;
}

void EmbedderConfig::validate() const {
    if (dimension == 0) throw Error(ErrorKind::InvalidConfig, kModule, "dimension must be positive");
    if (kind == EmbedderKind::Remote) {
        if (!endpoint || endpoint->empty()) {
            throw Error(ErrorKind::InvalidConfig, kModule, "remote embedder requires an endpoint");
        }
        if (!model_name || model_name->empty()) {
            throw Error(ErrorKind::InvalidConfig, kModule, "remote embedder requires a model_name");
        }
    }
}

std::uint64_t fnv1a64(std::string_view data) noexcept {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::vector<std::string> hash_tokens(std::string_view text) {
    const std::string lowered = util::to_lower_ascii(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < lowered.size()) {
        if (!is_alnum_ascii(lowered[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < lowered.size() && is_alnum_ascii(lowered[j])) ++j;
        tokens.emplace_back(lowered.substr(i, j - i));
        i = j;
    }
    if (tokens.empty()) {
        auto whole = util::trim(lowered);
        if (!whole.empty()) tokens.emplace_back(whole);
    }
    return tokens;
}

HashedBowEmbedder::HashedBowEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw Error(ErrorKind::InvalidConfig, kModule, "dimension must be positive");
}

EmbeddingVector HashedBowEmbedder::embed(std::string_view text) const {
    if (util::is_blank(text)) throw Error(ErrorKind::BlankInput, kModule, "text is blank");
    std::vector<double> acc(dimension_, 0.0);
    for (const auto& token : hash_tokens(text)) {
        const std::uint64_t h = fnv1a64(token);
        acc[h % dimension_] += (h >> 63) ? -1.0 : 1.0;
    }
    // Opposite-signed tokens can cancel every bucket; fall back to the
    // whole-text hash so non-blank input never yields a zero vector.
    if (std::all_of(acc.begin(), acc.end(), [](double v) { return v == 0.0; })) {
        const auto whole = util::to_lower_ascii(util::trim(text));
        acc[fnv1a64(whole) % dimension_] = 1.0;
    }
    double sum_sq = 0.0;
    for (double v : acc) sum_sq += v * v;
    const double norm = std::sqrt(sum_sq);
    for (double& v : acc) v /= norm;
    return EmbeddingVector(std::move(acc));
}

std::string HashedBowEmbedder::id() const { return "hashed-bow-fnv1a64/" + std::to_string(dimension_); }

RemoteEmbedder::RemoteEmbedder(std::string endpoint, std::string model_name, std::size_t dimension)
    : endpoint_(std::move(endpoint)), model_name_(std::move(model_name)), dimension_(dimension) {
    http::parse_base_url(endpoint_);
}

EmbeddingVector RemoteEmbedder::embed(std::string_view text) const {
    if (util::is_blank(text)) throw Error(ErrorKind::BlankInput, kModule, "text is blank");
    const auto base = http::parse_base_url(endpoint_);
    httplib::Client client(base.scheme_host_port);
    client.set_connection_timeout(30);
    client.set_read_timeout(300);

    nlohmann::json body = {{"model", model_name_}, {"prompt", std::string(text)}};
    auto res = client.Post(base.path("/api/embeddings"), body.dump(), "application/json");
    if (!res) {
        throw Error(ErrorKind::RemoteUnavailable, kModule,
                    endpoint_ + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw Error(ErrorKind::RemoteUnavailable, kModule,
                    endpoint_ + ": HTTP status " + std::to_string(res->status));
    }
    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("embedding") ||
        !parsed["embedding"].is_array()) {
        throw Error(ErrorKind::RemoteUnavailable, kModule, endpoint_ + ": malformed embedding response");
    }
    std::vector<double> values;
    values.reserve(parsed["embedding"].size());
    for (const auto& v : parsed["embedding"]) {
        if (!v.is_number()) {
            throw Error(ErrorKind::RemoteUnavailable, kModule, endpoint_ + ": non-numeric embedding value");
        }
        values.push_back(v.get<double>());
    }
    if (values.size() != dimension_) {
        throw Error(ErrorKind::DimensionMismatch, kModule,
                    "remote returned " + std::to_string(values.size()) + " values, expected " +
                        std::to_string(dimension_));
    }
    return EmbeddingVector(std::move(values));
}

std::string RemoteEmbedder::id() const { return "remote:" + model_name_ + "/" + std::to_string(dimension_); }

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config) {
    config.validate();
    if (config.kind == EmbedderKind::Remote) {
        return std::make_unique<RemoteEmbedder>(*config.endpoint, *config.model_name, config.dimension);
    }
    return std::make_unique<HashedBowEmbedder>(config.dimension);
}

EmbeddingVector embed_text(std::string_view text, const EmbedderConfig& config) {
    return make_embedder(config)->embed(text);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, kModule,
                    std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()));
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw Error(ErrorKind::ZeroVector, kModule, "cosine of a zero vector");
    double denom = std::sqrt(na * nb);
    if (denom == 0.0 || !std::isfinite(denom)) denom = std::sqrt(na) * std::sqrt(nb);
    return std::clamp(dot / denom, -1.0, 1.0);
}

}  // namespace astra
