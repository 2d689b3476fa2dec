#pragma once

#include "astra/corpus_indexer.hpp"
#include "astra/prompt.hpp"
#include "astra/structure.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace astra::fixtures {

struct EditCase {
    std::string file_text;
    SourceRange range;
    std::string replacement;
};

inline std::string random_line(std::mt19937_64& rng) {
    static const std::vector<std::string> pieces = {"int x = 1;", "  return y;", "}", "{", "", "    // comment",
                                                    "\tfoo(bar);", "amrex::ParallelFor(bx, f);", "   ", "\"str\";"};
    return pieces[rng() % pieces.size()] + (rng() % 3 == 0 ? " " + std::to_string(rng() % 100) : "");
}

/// Random file (CRLF-free, with or without a trailing newline), a valid range
/// and a non-blank replacement.
inline EditCase random_edit_case(std::mt19937_64& rng) {
    EditCase c;
    const std::size_t n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) c.file_text += "\n";
        c.file_text += random_line(rng);
    }
    if (rng() % 4 != 0) c.file_text += "\n";
    const std::size_t a = 1 + rng() % n;
    const std::size_t b = a + rng() % (n - a + 1);
    c.range = SourceRange{a, b};
    const std::size_t m = 1 + rng() % 8;
    for (std::size_t i = 0; i < m; ++i) c.replacement += "new_" + std::to_string(i) + "(" + random_line(rng) + ");\n";
    return c;
}

/// Lines [start, end] of `text` replaced by `replacement` (its trailing
/// newline dropped), keeping the file's final newline state.
inline std::string replace_lines(const std::string& text, SourceRange range, std::string replacement) {
    while (!replacement.empty() && replacement.back() == '\n') replacement.pop_back();
    const bool trailing = !text.empty() && text.back() == '\n';
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    std::vector<std::string> out(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(range.start_line - 1));
    out.push_back(replacement);
    out.insert(out.end(), lines.begin() + static_cast<std::ptrdiff_t>(range.end_line), lines.end());
    std::string joined;
    for (std::size_t i = 0; i < out.size(); ++i) joined += (i ? "\n" : "") + out[i];
    if (trailing) joined += "\n";
    return joined;
}

inline std::string random_text(std::mt19937_64& rng) {
    static const std::vector<std::string> pieces = {"MultiFab", "ParallelFor", "\"quoted\"", "back\\slash", "tab\t",
                                                    "line\nbreak", "\u00e9t\u00e9", "\u2192", "{", "}", " ", "x = 1;",
                                                    "// note", "", "\x01"};
    std::string out;
    const std::size_t n = 1 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i) out += pieces[rng() % pieces.size()];
    return out;
}

/// Random but well-formed index: 1-12 chunks, arbitrary finite embedding
/// values spanning many magnitudes, metadata full of escapes and non-ASCII.
inline ChunkIndex random_index(std::mt19937_64& rng) {
    const std::size_t dim = 1 + rng() % 48;
    const std::size_t n = 1 + rng() % 12;
    std::normal_distribution<double> normal;
    std::vector<CodeChunk> chunks;
    for (std::size_t c = 0; c < n; ++c) {
        CodeChunk chunk;
        chunk.id = "dir " + std::to_string(rng() % 5) + "/file" + std::to_string(c) + ".cpp#" + std::to_string(rng() % 4);
        chunk.text = random_text(rng) + "\n" + random_text(rng);
        chunk.metadata.example = random_text(rng);
        chunk.metadata.task_type = "TASK_" + std::to_string(rng() % 100);
        for (std::size_t i = 0, k = 1 + rng() % 3; i < k; ++i) chunk.metadata.user_intent.push_back(random_text(rng));
        chunk.metadata.keywords = random_text(rng);
        chunk.metadata.inputs = random_text(rng);
        chunk.metadata.outputs = rng() % 4 == 0 ? "" : random_text(rng);
        if (rng() % 3 == 0) chunk.metadata.extra["note " + std::to_string(c)] = random_text(rng);
        std::vector<double> v(dim);
        for (auto& x : v) {
            const auto r = rng() % 10;
            x = r == 0 ? 0.0 : std::ldexp(normal(rng), static_cast<int>(rng() % 200) - 100);
        }
        chunk.embedding = EmbeddingVector(std::move(v));
        chunks.push_back(std::move(chunk));
    }
    return ChunkIndex(dim, "random-" + std::to_string(dim), std::move(chunks));
}

inline std::string random_body(std::mt19937& rng) {
    static const std::vector<std::string> words = {"MultiFab", "for", "{", "}", "// note", "-----", "x = 1;", "",
                                                   "----- User prompt -----", "  indented", "ParallelFor"};
    std::string out;
    const int lines = static_cast<int>(rng() % 5);
    for (int i = 0; i < lines; ++i) {
        if (i) out += "\n";
        out += words[rng() % words.size()] + " " + words[rng() % words.size()];
    }
    return out;
}

inline PromptBundle random_bundle(std::mt19937& rng) {
    return PromptBundle{random_body(rng), random_body(rng), random_body(rng), "user " + random_body(rng)};
}

/// The four delimiter lines, in the order they occur as whole lines.
inline std::vector<std::string_view> delimiter_lines(std::string_view prompt) {
    static const std::array<std::string_view, 4> delims = {kGeneralDelimiter, kRagDelimiter, kAstDelimiter,
                                                           kUserDelimiter};
    std::vector<std::string_view> seen;
    std::size_t pos = 0;
    while (pos < prompt.size()) {
        auto nl = prompt.find('\n', pos);
        if (nl == std::string_view::npos) nl = prompt.size();
        const auto line = prompt.substr(pos, nl - pos);
        for (auto d : delims) {
            if (line == d) seen.push_back(d);
        }
        pos = nl + 1;
    }
    return seen;
}

}  // namespace astra::fixtures
