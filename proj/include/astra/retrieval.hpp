#pragma once

#include "astra/corpus_indexer.hpp"
#include "astra/embedding.hpp"

#include <optional>
#include <string>
#include <vector>

namespace astra {

struct RetrievalResult {
    std::string chunk_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based

    friend bool operator==(const RetrievalResult&, const RetrievalResult&) = default;
};

inline constexpr std::size_t kDefaultTopK = 3;

/// Exact linear scan. Results are sorted by score descending with ties kept
/// in index order; `min_score`, when set, drops anything below it.
std::vector<RetrievalResult> retrieve_top_k(const ChunkIndex& index, const EmbeddingVector& query, std::size_t k,
                                            std::optional<double> min_score = std::nullopt);

/// `### Retrieved example <rank> (task_type: <t>, score: <s.ssss>)` followed by
/// the chunk text.
std::string format_rag_block(const ChunkIndex& index, const RetrievalResult& result);

/// Blocks in rank order separated by one blank line; empty for no results.
std::string format_rag_context(const ChunkIndex& index, const std::vector<RetrievalResult>& results);

}  // namespace astra
