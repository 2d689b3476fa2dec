#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace astra::cpp {

enum class TokenKind { Identifier, Number, String, Char, Punct, Comment, Preprocessor };

/// A token's text views into the source passed to lex(); keep that source alive.
struct Token {
    TokenKind kind;
    std::string_view text;
    std::size_t offset;     // byte offset into the source
    std::size_t line;       // 1-based line of the first byte
    std::size_t end_line;   // 1-based line of the last byte

    bool is(std::string_view s) const noexcept { return text == s; }
    bool is_ident() const noexcept { return kind == TokenKind::Identifier; }
    bool is_trivia() const noexcept { return kind == TokenKind::Comment || kind == TokenKind::Preprocessor; }
};

/// Total over arbitrary input: unterminated literals and comments run to the
/// end of the text. Raw strings, digit separators and line continuations in
/// directives are recognized.
std::vector<Token> lex(std::string_view source);

/// lex() without comments and preprocessor directives.
std::vector<Token> significant_tokens(std::string_view source);

bool is_keyword(std::string_view word);

/// Index of the bracket closing the one at `open` (`(`, `[`, `{`), or npos
/// when it is never closed. Computed for the whole token list at once.
std::vector<std::size_t> match_brackets(const std::vector<Token>& tokens);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

}  // namespace astra::cpp
