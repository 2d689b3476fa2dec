#pragma once

#include "astra/embedding.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace astra {

/// Annotation carried by an `// AI_METADATA` comment header.
struct ChunkMetadata {
    std::string example;
    std::string task_type;
    std::vector<std::string> user_intent;
    std::string keywords;
    std::string inputs;
    std::string outputs;
    std::map<std::string, std::string> extra;  // unrecognized keys, kept verbatim

    /// user_intent entries joined by '\n'; this is the only text that gets embedded.
    std::string joined_intent() const;

    friend bool operator==(const ChunkMetadata&, const ChunkMetadata&) = default;
};

bool is_valid_task_type(std::string_view task_type);

struct ParsedSnippet {
    ChunkMetadata metadata;
    std::string body;                   // code after the header, blank lines trimmed
    std::string header;                 // the header comment block as written
    std::vector<std::string> warnings;  // e.g. missing optional keys
};

/// Parses one snippet that starts with an `AI_METADATA` comment block.
/// `first_line` offsets line numbers reported in errors.
ParsedSnippet parse_annotated_snippet(std::string_view text, std::size_t first_line = 1);

/// Splits a file at every `AI_METADATA` comment line and parses each block.
/// Content before the first marker is ignored. Throws MissingMarker when the
/// file has no marker at all.
std::vector<ParsedSnippet> parse_annotated_file(std::string_view text);

struct CodeChunk {
    std::string id;  // "<relative path>#<ordinal>"
    std::string text;
    ChunkMetadata metadata;
    EmbeddingVector embedding;

    friend bool operator==(const CodeChunk&, const CodeChunk&) = default;
};

/// Immutable after construction; safe for concurrent readers.
class ChunkIndex {
public:
    /// Validates dimension consistency and id uniqueness.
    ChunkIndex(std::size_t dimension, std::string embedder_id, std::vector<CodeChunk> chunks);

    std::size_t dimension() const noexcept { return dimension_; }
    const std::string& embedder_id() const noexcept { return embedder_id_; }
    const std::vector<CodeChunk>& chunks() const noexcept { return chunks_; }
    std::size_t size() const noexcept { return chunks_.size(); }

    /// nullptr when absent.
    const CodeChunk* find(std::string_view id) const;

    friend bool operator==(const ChunkIndex&, const ChunkIndex&) = default;

private:
    std::size_t dimension_;
    std::string embedder_id_;
    std::vector<CodeChunk> chunks_;
};

/// Input to build_index: one annotated snippet with its stable id.
struct SourceSnippet {
    std::string id;
    ChunkMetadata metadata;
    std::string text;
};

ChunkIndex build_index(const std::vector<SourceSnippet>& snippets, const Embedder& embedder);

struct CorpusOptions {
    bool keep_header = false;
};

struct CorpusScan {
    std::vector<SourceSnippet> snippets;
    std::vector<std::string> warnings;
};

/// Walks `root` recursively (files in sorted relative-path order), parsing
/// every C/C++ source or header that carries AI_METADATA blocks.
CorpusScan scan_corpus(const std::filesystem::path& root, const CorpusOptions& options = {});

inline constexpr int kIndexFormatVersion = 1;

std::string serialize_index(const ChunkIndex& index);
ChunkIndex deserialize_index(std::string_view json_text);
void save_index(const ChunkIndex& index, const std::filesystem::path& path);
ChunkIndex load_index(const std::filesystem::path& path);

}  // namespace astra
