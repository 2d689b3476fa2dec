#include "astra/cpp_lexer.hpp"

#include <array>
#include <cctype>
#include <set>
#include <string>

namespace astra::cpp {

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

constexpr std::array<std::string_view, 26> kPunct = {
    ">>=", "<<=", "<=>", "->*", "...", "::", "->", "++", "--", "<<", ">>", "<=", ">=",
    "==",  "!=",  "&&",  "||",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=", "##"};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        bool line_start = true;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
                line_start = true;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
                continue;
            }
            if (c == '\\' && peek(1) == '\n') {
                pos_ += 2;
                ++line_;
                continue;
            }
            const std::size_t start = pos_;
            const std::size_t start_line = line_;
            TokenKind kind;
            if (c == '#' && line_start) {
                directive();
                kind = TokenKind::Preprocessor;
            } else if (c == '/' && peek(1) == '/') {
                line_comment();
                kind = TokenKind::Comment;
            } else if (c == '/' && peek(1) == '*') {
                block_comment();
                kind = TokenKind::Comment;
            } else if (auto prefix = string_prefix(); prefix != npos) {
                pos_ += prefix;
                if (src_[pos_ - 1] == 'R' && src_[pos_] == '"') raw_string();
                else quoted(src_[pos_]);
                kind = src_[start + prefix] == '\'' ? TokenKind::Char : TokenKind::String;
            } else if (c == '"' || c == '\'') {
                quoted(c);
                kind = c == '"' ? TokenKind::String : TokenKind::Char;
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
                number();
                kind = TokenKind::Number;
            } else if (ident_start(static_cast<unsigned char>(c))) {
                while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
                kind = TokenKind::Identifier;
            } else {
                punct();
                kind = TokenKind::Punct;
            }
            line_start = false;
            out.push_back(Token{kind, src_.substr(start, pos_ - start), start, start_line, line_});
        }
        return out;
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance_to(std::size_t end) {
        for (; pos_ < end && pos_ < src_.size(); ++pos_) {
            if (src_[pos_] == '\n') ++line_;
        }
    }

    void directive() {
        std::size_t p = pos_;
        while (p < src_.size()) {
            if (src_[p] == '\\' && p + 1 < src_.size() && src_[p + 1] == '\n') {
                p += 2;
                continue;
            }
            if (src_[p] == '\\' && p + 2 < src_.size() && src_[p + 1] == '\r' && src_[p + 2] == '\n') {
                p += 3;
                continue;
            }
            if (src_[p] == '/' && p + 1 < src_.size() && src_[p + 1] == '*') {
                auto close = src_.find("*/", p + 2);
                p = close == std::string_view::npos ? src_.size() : close + 2;
                continue;
            }
            if (src_[p] == '\n') break;
            ++p;
        }
        advance_to(p);
    }

    void line_comment() {
        std::size_t p = pos_;
        while (p < src_.size() && src_[p] != '\n') {
            if (src_[p] == '\\' && p + 1 < src_.size() && src_[p + 1] == '\n') ++p;
            ++p;
        }
        advance_to(p);
    }

    void block_comment() {
        auto close = src_.find("*/", pos_ + 2);
        advance_to(close == std::string_view::npos ? src_.size() : close + 2);
    }

    /// Length of an encoding prefix (u8, u, U, L, R, u8R, ...) directly
    /// followed by a quote, else npos.
    std::size_t string_prefix() const {
        static const std::array<std::string_view, 10> prefixes = {"u8R", "uR", "UR", "LR", "u8", "R",
                                                                  "u",   "U",  "L",  ""};
        for (auto p : prefixes) {
            if (p.empty()) break;
            if (src_.substr(pos_, p.size()) != p) continue;
            const char q = peek(p.size());
            if (q == '"' || (q == '\'' && p.back() != 'R')) {
                if (pos_ > 0 && ident_char(static_cast<unsigned char>(src_[pos_ - 1]))) return npos;
                return p.size();
            }
        }
        return npos;
    }

    void quoted(char quote) {
        std::size_t p = pos_ + 1;
        while (p < src_.size() && src_[p] != quote) {
            if (src_[p] == '\\') ++p;
            else if (src_[p] == '\n') break;  // unterminated: stop at end of line
            ++p;
        }
        if (p < src_.size() && src_[p] == quote) ++p;
        advance_to(p);
    }

    void raw_string() {
        std::size_t p = pos_ + 1;
        const std::size_t paren = src_.find('(', p);
        if (paren == std::string_view::npos || paren - p > 16) {
            quoted('"');
            return;
        }
        const std::string terminator = ")" + std::string(src_.substr(p, paren - p)) + "\"";
        const auto close = src_.find(terminator, paren + 1);
        advance_to(close == std::string_view::npos ? src_.size() : close + terminator.size());
    }

    void number() {
        std::size_t p = pos_;
        while (p < src_.size()) {
            const char c = src_[p];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_') {
                ++p;
            } else if (c == '\'' && p + 1 < src_.size() && std::isalnum(static_cast<unsigned char>(src_[p + 1]))) {
                p += 2;
            } else if ((c == '+' || c == '-') && p > pos_ &&
                       (src_[p - 1] == 'e' || src_[p - 1] == 'E' || src_[p - 1] == 'p' || src_[p - 1] == 'P') &&
                       !(src_[pos_] == '0' && p > pos_ + 1 && (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X') &&
                         (src_[p - 1] == 'e' || src_[p - 1] == 'E'))) {
                ++p;
            } else {
                break;
            }
        }
        advance_to(p);
    }

    void punct() {
        for (auto p : kPunct) {
            if (src_.substr(pos_, p.size()) == p) {
                pos_ += p.size();
                return;
            }
        }
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

std::vector<Token> significant_tokens(std::string_view source) {
    std::vector<Token> out;
    for (const auto& t : lex(source)) {
        if (!t.is_trivia()) out.push_back(t);
    }
    return out;
}

bool is_keyword(std::string_view word) {
    static const std::set<std::string_view> keywords = {
        "alignas",   "alignof",      "and",         "asm",          "auto",       "bool",
        "break",     "case",         "catch",       "char",         "char8_t",    "char16_t",
        "char32_t",  "class",        "co_await",    "co_return",    "co_yield",   "concept",
        "const",     "consteval",    "constexpr",   "constinit",    "const_cast", "continue",
        "decltype",  "default",      "delete",      "do",           "double",     "dynamic_cast",
        "else",      "enum",         "explicit",    "export",       "extern",     "false",
        "float",     "for",          "friend",      "goto",         "if",         "inline",
        "int",       "long",         "mutable",     "namespace",    "new",        "noexcept",
        "not",       "nullptr",      "operator",    "or",           "private",    "protected",
        "public",    "register",     "reinterpret_cast", "requires", "return",    "short",
        "signed",    "sizeof",       "static",      "static_assert", "static_cast", "struct",
        "switch",    "template",     "this",        "thread_local", "throw",      "true",
        "try",       "typedef",      "typeid",      "typename",     "union",      "unsigned",
        "using",     "virtual",      "void",        "volatile",     "wchar_t",    "while"};
    return keywords.count(word) > 0;
}

std::vector<std::size_t> match_brackets(const std::vector<Token>& tokens) {
    std::vector<std::size_t> match(tokens.size(), npos);
    std::vector<std::size_t> stack;
    auto opener_for = [](std::string_view close) -> char {
        if (close == ")") return '(';
        if (close == "]") return '[';
        return '{';
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& t = tokens[i];
        if (t.kind != TokenKind::Punct) continue;
        if (t.is("(") || t.is("[") || t.is("{")) {
            stack.push_back(i);
        } else if (t.is(")") || t.is("]") || t.is("}")) {
            const char want = opener_for(t.text);
            std::size_t depth = stack.size();
            while (depth > 0 && tokens[stack[depth - 1]].text[0] != want) --depth;
            if (depth == 0) continue;  // stray closer
            const std::size_t open = stack[depth - 1];
            stack.resize(depth - 1);
            match[open] = i;
            match[i] = open;
        }
    }
    return match;
}

}  // namespace astra::cpp
