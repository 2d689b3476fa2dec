#include "astra/retrieval.hpp"

#include "astra/error.hpp"
#include "astra/util.hpp"

#include <algorithm>
#include <numeric>

namespace astra {

namespace {
const char* kModule = "retrieval";
}

std::vector<RetrievalResult> retrieve_top_k(const ChunkIndex& index, const EmbeddingVector& query, std::size_t k,
                                            std::optional<double> min_score) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, kModule, "k must be at least 1");
    if (index.size() == 0) throw Error(ErrorKind::EmptyIndex, kModule, "index has no chunks");
    if (query.dimension() != index.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, kModule,
                    "query has dimension " + std::to_string(query.dimension()) + ", index has " +
                        std::to_string(index.dimension()));
    }

    const auto& chunks = index.chunks();
    std::vector<double> scores(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) scores[i] = cosine_similarity(query, chunks[i].embedding);

    std::vector<std::size_t> order(chunks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });

    std::vector<RetrievalResult> results;
    for (std::size_t r = 0; r < take; ++r) {
        const std::size_t i = order[r];
        if (min_score && scores[i] < *min_score) break;
        results.push_back(RetrievalResult{chunks[i].id, scores[i], results.size() + 1});
    }
    return results;
}

std::string format_rag_block(const ChunkIndex& index, const RetrievalResult& result) {
    const CodeChunk* chunk = index.find(result.chunk_id);
    if (!chunk) throw Error(ErrorKind::UnknownChunkId, kModule, result.chunk_id);
    std::string text = chunk->text;
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return "### Retrieved example " + std::to_string(result.rank) + " (task_type: " + chunk->metadata.task_type +
           ", score: " + util::fixed(result.score, 4) + ")\n" + text;
}

std::string format_rag_context(const ChunkIndex& index, const std::vector<RetrievalResult>& results) {
    std::vector<std::string> blocks;
    blocks.reserve(results.size());
    for (const auto& r : results) blocks.push_back(format_rag_block(index, r));
    return util::join(blocks, "\n\n");
}

}  // namespace astra
