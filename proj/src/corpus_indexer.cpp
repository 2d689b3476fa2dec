#include "astra/corpus_indexer.hpp"

#include "astra/error.hpp"
#include "astra/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>
#include <set>
#include <unordered_set>

namespace astra {

namespace {

const char* kModule = "corpus_indexer";

bool is_marker_line(std::string_view line) {
    auto t = util::trim(line);
    return t.starts_with("//") && t.find("AI_METADATA") != std::string_view::npos;
}

bool is_comment_line(std::string_view line) { return util::trim(line).starts_with("//"); }

std::string comment_content(std::string_view line) {
    auto t = util::trim(line);
    return std::string(util::trim(t.substr(2)));
}

const std::regex& numbered_re() {
    static const std::regex re(R"(^(\d+)\)\s*(.*)$)");
    return re;
}

const std::regex& key_re() {
    static const std::regex re(R"(^([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$)");
    return re;
}

const std::set<std::string>& source_extensions() {
    static const std::set<std::string> exts = {".c",  ".cc",  ".cpp", ".cxx", ".C", ".h",
                                               ".hh", ".hpp", ".hxx", ".H",   ".cu", ".inl"};
    return exts;
}

}  // namespace

std::string ChunkMetadata::joined_intent() const { return util::join(user_intent, "\n"); }

bool is_valid_task_type(std::string_view task_type) {
    if (task_type.empty()) return false;
    return std::all_of(task_type.begin(), task_type.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

ParsedSnippet parse_annotated_snippet(std::string_view text, std::size_t first_line) {
    const auto lines = util::split_lines(text);
    std::size_t i = 0;
    while (i < lines.size() && util::is_blank(lines[i])) ++i;
    if (i == lines.size() || !is_marker_line(lines[i])) {
        throw Error(ErrorKind::MissingMarker, kModule,
                    "expected an AI_METADATA comment at line " + std::to_string(first_line + i));
    }
    const std::size_t marker = i;
    std::size_t header_end = marker + 1;
    while (header_end < lines.size() && is_comment_line(lines[header_end])) ++header_end;

    ParsedSnippet out;
    std::set<std::string> seen;
    std::string current_key;
    std::size_t task_type_line = 0;

    auto assign = [&](const std::string& key, const std::string& value, std::size_t line_no) {
        if (!seen.insert(key).second && key != "user_intent") {
            out.warnings.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key +
                                   "', later value kept");
        }
        auto& md = out.metadata;
        if (key == "example") md.example = value;
        else if (key == "task_type") {
            md.task_type = value;
            task_type_line = line_no;
        } else if (key == "keywords") md.keywords = value;
        else if (key == "inputs") md.inputs = value;
        else if (key == "outputs") md.outputs = value;
        else md.extra[key] = value;
    };

    for (std::size_t j = marker + 1; j < header_end; ++j) {
        const std::size_t line_no = first_line + j;
        const std::string content = comment_content(lines[j]);
        if (content.empty()) continue;
        std::smatch m;
        if (std::regex_match(content, m, numbered_re())) {
            if (current_key != "user_intent") {
                throw Error(ErrorKind::MalformedPair, kModule,
                            "line " + std::to_string(line_no) + ": numbered entry outside user_intent");
            }
            out.metadata.user_intent.emplace_back(util::trim(m[2].str()));
            continue;
        }
        if (std::regex_match(content, m, key_re())) {
            current_key = m[1].str();
            std::string value(util::trim(m[2].str()));
            if (current_key == "user_intent") {
                seen.insert(current_key);
                if (!value.empty()) {
                    std::smatch n;
                    if (std::regex_match(value, n, numbered_re())) value = util::trim(n[2].str());
                    out.metadata.user_intent.push_back(value);
                }
            } else {
                assign(current_key, value, line_no);
            }
            continue;
        }
        if (current_key == "user_intent" && !out.metadata.user_intent.empty()) {
            auto& last = out.metadata.user_intent.back();
            if (!last.empty()) last += ' ';
            last += content;
            continue;
        }
        throw Error(ErrorKind::MalformedPair, kModule,
                    "line " + std::to_string(line_no) + ": expected 'key: value', got '" + content + "'");
    }

    auto& intents = out.metadata.user_intent;
    intents.erase(std::remove_if(intents.begin(), intents.end(),
                                 [](const std::string& s) { return util::is_blank(s); }),
                  intents.end());
    if (intents.empty()) {
        throw Error(ErrorKind::EmptyIntent, kModule,
                    "no user_intent entries in block at line " + std::to_string(first_line + marker));
    }
    if (seen.count("task_type") && !is_valid_task_type(out.metadata.task_type)) {
        throw Error(ErrorKind::MalformedPair, kModule,
                    "line " + std::to_string(task_type_line) + ": task_type '" + out.metadata.task_type +
                        "' must match [A-Z0-9_]+");
    }
    for (const char* key : {"task_type", "keywords", "inputs", "outputs"}) {
        if (!seen.count(key)) {
            out.warnings.push_back("block at line " + std::to_string(first_line + marker) + ": missing key '" +
                                   key + "'");
        }
    }

    std::vector<std::string> body(lines.begin() + static_cast<std::ptrdiff_t>(header_end), lines.end());
    out.body = util::trim_blank_lines(util::join(body, "\n"));
    std::vector<std::string> header(lines.begin() + static_cast<std::ptrdiff_t>(marker),
                                    lines.begin() + static_cast<std::ptrdiff_t>(header_end));
    out.header = util::join(header, "\n");
    return out;
}

std::vector<ParsedSnippet> parse_annotated_file(std::string_view text) {
    const auto lines = util::split_lines(text);
    std::vector<std::size_t> markers;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_marker_line(lines[i])) markers.push_back(i);
    }
    if (markers.empty()) throw Error(ErrorKind::MissingMarker, kModule, "no AI_METADATA block found");
    std::vector<ParsedSnippet> out;
    for (std::size_t k = 0; k < markers.size(); ++k) {
        const std::size_t end = k + 1 < markers.size() ? markers[k + 1] : lines.size();
        std::vector<std::string> slice(lines.begin() + static_cast<std::ptrdiff_t>(markers[k]),
                                       lines.begin() + static_cast<std::ptrdiff_t>(end));
        out.push_back(parse_annotated_snippet(util::join(slice, "\n"), markers[k] + 1));
    }
    return out;
}

ChunkIndex::ChunkIndex(std::size_t dimension, std::string embedder_id, std::vector<CodeChunk> chunks)
    : dimension_(dimension), embedder_id_(std::move(embedder_id)), chunks_(std::move(chunks)) {
    if (dimension_ == 0) throw Error(ErrorKind::DimensionMismatch, kModule, "dimension must be positive");
    std::unordered_set<std::string> ids;
    for (const auto& chunk : chunks_) {
        if (chunk.embedding.dimension() != dimension_) {
            throw Error(ErrorKind::DimensionMismatch, kModule,
                        "chunk " + chunk.id + " has dimension " + std::to_string(chunk.embedding.dimension()) +
                            ", index has " + std::to_string(dimension_));
        }
        if (!ids.insert(chunk.id).second) throw Error(ErrorKind::DuplicateId, kModule, chunk.id);
    }
}

const CodeChunk* ChunkIndex::find(std::string_view id) const {
    for (const auto& chunk : chunks_) {
        if (chunk.id == id) return &chunk;
    }
    return nullptr;
}

ChunkIndex build_index(const std::vector<SourceSnippet>& snippets, const Embedder& embedder) {
    std::vector<CodeChunk> chunks;
    chunks.reserve(snippets.size());
    std::unordered_set<std::string> ids;
    std::size_t dimension = embedder.dimension();
    for (const auto& snippet : snippets) {
        if (!ids.insert(snippet.id).second) throw Error(ErrorKind::DuplicateId, kModule, snippet.id);
        if (snippet.metadata.user_intent.empty()) {
            throw Error(ErrorKind::EmptyIntent, kModule, "snippet " + snippet.id + " has no user_intent");
        }
        if (!is_valid_task_type(snippet.metadata.task_type)) {
            throw Error(ErrorKind::InvalidMetadata, kModule,
                        "snippet " + snippet.id + " has task_type '" + snippet.metadata.task_type +
                            "', expected [A-Z0-9_]+");
        }
        if (util::is_blank(snippet.text)) {
            throw Error(ErrorKind::EmptyBody, kModule, "snippet " + snippet.id + " has no code");
        }
        auto embedding = embedder.embed(snippet.metadata.joined_intent());
        if (embedding.dimension() != dimension) {
            throw Error(ErrorKind::DimensionMismatch, kModule,
                        "embedder returned " + std::to_string(embedding.dimension()) + " values for " +
                            snippet.id + ", expected " + std::to_string(dimension));
        }
        chunks.push_back(CodeChunk{snippet.id, snippet.text, snippet.metadata, std::move(embedding)});
    }
    return ChunkIndex(dimension, embedder.id(), std::move(chunks));
}

CorpusScan scan_corpus(const std::filesystem::path& root, const CorpusOptions& options) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw Error(ErrorKind::Unreadable, kModule, "not a directory: " + root.string());
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (!source_extensions().count(entry.path().extension().string())) continue;
        files.push_back(fs::relative(entry.path(), root).generic_string());
    }
    std::sort(files.begin(), files.end());

    CorpusScan scan;
    for (const auto& rel : files) {
        const std::string text = util::read_file(root / rel);
        if (text.find("AI_METADATA") == std::string::npos) {
            scan.warnings.push_back(rel + ": no AI_METADATA block, skipped");
            continue;
        }
        std::vector<ParsedSnippet> parsed;
        try {
            parsed = parse_annotated_file(text);
        } catch (const Error& e) {
            throw Error(e.kind(), kModule, rel + ": " + e.detail());
        }
        for (std::size_t k = 0; k < parsed.size(); ++k) {
            auto& p = parsed[k];
            const std::string id = rel + "#" + std::to_string(k);
            for (const auto& w : p.warnings) scan.warnings.push_back(rel + ": " + w);
            if (p.body.empty()) throw Error(ErrorKind::EmptyBody, kModule, "snippet " + id + " has no code");
            std::string chunk_text = options.keep_header ? p.header + "\n\n" + p.body : p.body;
            scan.snippets.push_back(SourceSnippet{id, std::move(p.metadata), std::move(chunk_text)});
        }
    }
    return scan;
}

std::string serialize_index(const ChunkIndex& index) {
    using nlohmann::ordered_json;
    ordered_json chunks = ordered_json::array();
    for (const auto& c : index.chunks()) {
        ordered_json extra = ordered_json::object();
        for (const auto& [k, v] : c.metadata.extra) extra[k] = v;
        ordered_json md;
        md["example"] = c.metadata.example;
        md["task_type"] = c.metadata.task_type;
        md["keywords"] = c.metadata.keywords;
        md["inputs"] = c.metadata.inputs;
        md["outputs"] = c.metadata.outputs;
        md["user_intent"] = c.metadata.user_intent;
        md["extra"] = std::move(extra);
        ordered_json chunk;
        chunk["id"] = c.id;
        chunk["text"] = c.text;
        chunk["metadata"] = std::move(md);
        chunk["embedding"] = std::vector<double>(c.embedding.values().begin(), c.embedding.values().end());
        chunks.push_back(std::move(chunk));
    }
    ordered_json doc;
    doc["version"] = kIndexFormatVersion;
    doc["dimension"] = index.dimension();
    doc["embedder_id"] = index.embedder_id();
    doc["chunks"] = std::move(chunks);
    return doc.dump(2) + "\n";
}

namespace {

std::string string_field(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) return {};
    if (!obj[key].is_string()) {
        throw Error(ErrorKind::MalformedIndex, kModule, where + ": field '" + key + "' must be a string");
    }
    return obj[key].get<std::string>();
}

}  // namespace

ChunkIndex deserialize_index(std::string_view json_text) {
    auto doc = nlohmann::json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorKind::MalformedIndex, kModule, "index is not a JSON object");
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != kIndexFormatVersion) {
        throw Error(ErrorKind::FormatVersionMismatch, kModule,
                    "expected version " + std::to_string(kIndexFormatVersion) + ", got " +
                        (doc.contains("version") ? doc["version"].dump() : std::string("none")));
    }
    if (!doc.contains("dimension") || !doc["dimension"].is_number_unsigned() || doc["dimension"].get<std::size_t>() == 0) {
        throw Error(ErrorKind::MalformedIndex, kModule, "'dimension' must be a positive integer");
    }
    if (!doc.contains("chunks") || !doc["chunks"].is_array()) {
        throw Error(ErrorKind::MalformedIndex, kModule, "'chunks' must be an array");
    }
    const auto dimension = doc["dimension"].get<std::size_t>();
    const std::string embedder_id = string_field(doc, "embedder_id", "index");

    std::vector<CodeChunk> chunks;
    for (std::size_t i = 0; i < doc["chunks"].size(); ++i) {
        const auto& c = doc["chunks"][i];
        const std::string where = "chunk " + std::to_string(i);
        if (!c.is_object() || !c.contains("id") || !c["id"].is_string()) {
            throw Error(ErrorKind::MalformedIndex, kModule, where + ": missing string 'id'");
        }
        CodeChunk chunk;
        chunk.id = c["id"].get<std::string>();
        chunk.text = string_field(c, "text", chunk.id);
        if (!c.contains("metadata") || !c["metadata"].is_object()) {
            throw Error(ErrorKind::MalformedIndex, kModule, chunk.id + ": missing 'metadata' object");
        }
        const auto& md = c["metadata"];
        chunk.metadata.example = string_field(md, "example", chunk.id);
        chunk.metadata.task_type = string_field(md, "task_type", chunk.id);
        chunk.metadata.keywords = string_field(md, "keywords", chunk.id);
        chunk.metadata.inputs = string_field(md, "inputs", chunk.id);
        chunk.metadata.outputs = string_field(md, "outputs", chunk.id);
        if (md.contains("user_intent")) {
            if (!md["user_intent"].is_array()) {
                throw Error(ErrorKind::MalformedIndex, kModule, chunk.id + ": 'user_intent' must be an array");
            }
            for (const auto& s : md["user_intent"]) {
                if (!s.is_string()) {
                    throw Error(ErrorKind::MalformedIndex, kModule, chunk.id + ": user_intent entries must be strings");
                }
                chunk.metadata.user_intent.push_back(s.get<std::string>());
            }
        }
        if (md.contains("extra")) {
            if (!md["extra"].is_object()) {
                throw Error(ErrorKind::MalformedIndex, kModule, chunk.id + ": 'extra' must be an object");
            }
            for (const auto& [k, v] : md["extra"].items()) {
                chunk.metadata.extra[k] = v.is_string() ? v.get<std::string>() : v.dump();
            }
        }
        if (!c.contains("embedding") || !c["embedding"].is_array()) {
            throw Error(ErrorKind::CorruptEmbedding, kModule, chunk.id + ": missing embedding array");
        }
        const auto& emb = c["embedding"];
        if (emb.size() != dimension) {
            throw Error(ErrorKind::CorruptEmbedding, kModule,
                        chunk.id + ": embedding has " + std::to_string(emb.size()) + " values, expected " +
                            std::to_string(dimension));
        }
        std::vector<double> values;
        values.reserve(dimension);
        for (const auto& v : emb) {
            if (!v.is_number()) {
                throw Error(ErrorKind::CorruptEmbedding, kModule, chunk.id + ": non-numeric embedding value");
            }
            values.push_back(v.get<double>());
        }
        try {
            chunk.embedding = EmbeddingVector(std::move(values));
        } catch (const Error& e) {
            throw Error(ErrorKind::CorruptEmbedding, kModule, chunk.id + ": " + e.detail());
        }
        chunks.push_back(std::move(chunk));
    }
    return ChunkIndex(dimension, embedder_id, std::move(chunks));
}

void save_index(const ChunkIndex& index, const std::filesystem::path& path) {
    util::write_file(path, serialize_index(index));
}

ChunkIndex load_index(const std::filesystem::path& path) { return deserialize_index(util::read_file(path)); }

}  // namespace astra
