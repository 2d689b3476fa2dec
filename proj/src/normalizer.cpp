#include "astra/structure.hpp"

#include "astra/cpp_lexer.hpp"
#include "astra/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace astra {

namespace {

using cpp::npos;
using cpp::Token;
using cpp::TokenKind;

const char* kModule = "structure_extractor";

bool is_builtin_type(const Token& t) {
    static const std::set<std::string_view> words = {"auto",  "bool",     "char",     "char8_t", "char16_t",
                                                     "char32_t", "double", "float",   "int",     "long",
                                                     "short", "signed",   "unsigned", "void",    "wchar_t"};
    return t.is_ident() && words.count(t.text) > 0;
}

bool is_type_qualifier(const Token& t) {
    static const std::set<std::string_view> words = {"const",    "constexpr",    "static", "volatile",
                                                     "register", "thread_local", "typename", "mutable"};
    return t.is_ident() && words.count(t.text) > 0;
}

bool is_plain_name(const Token& t) { return t.is_ident() && !cpp::is_keyword(t.text); }

struct Declared {
    std::string name;
    std::size_t token;
};

class Normalizer {
public:
    Normalizer(std::string_view text, const std::vector<std::string>& preserve)
        : src_(text), toks_(cpp::significant_tokens(text)), match_(cpp::match_brackets(toks_)),
          preserve_(preserve.begin(), preserve.end()) {}

    NormalizedFunction run() {
        locate_function();
        collect_parameters();
        collect_locals(body_open_ + 1, body_close_);

        NormalizedFunction out;
        std::set<std::string> local_names;
        for (const auto& d : declared_) local_names.insert(d.name);
        std::set<std::string> other_names;
        for (const auto& t : toks_) {
            if (t.is_ident() && !local_names.count(std::string(t.text))) other_names.insert(std::string(t.text));
        }

        std::map<std::string, std::string> rename;
        std::size_t next = 1;
        for (const auto& d : declared_) {
            std::string placeholder;
            do {
                placeholder = "VAR" + std::to_string(next++);
            } while (other_names.count(placeholder));
            rename[d.name] = placeholder;
            out.locals.push_back(d.name);
        }

        std::string text;
        std::size_t copied = 0;
        for (std::size_t k = body_open_ + 1; k < body_close_; ++k) {
            const auto& t = toks_[k];
            if (!t.is_ident()) continue;
            auto it = rename.find(std::string(t.text));
            if (it == rename.end()) continue;
            if (k > 0 && (toks_[k - 1].is(".") || toks_[k - 1].is("->") || toks_[k - 1].is("::"))) continue;
            if (k + 1 < toks_.size() && toks_[k + 1].is("::")) continue;
            text.append(src_.substr(copied, t.offset - copied));
            text += it->second;
            copied = t.offset + t.text.size();
        }
        text.append(src_.substr(copied));
        out.text = std::move(text);
        out.warnings = std::move(warnings_);
        return out;
    }

private:
    std::size_t jump(std::size_t i) const { return match_[i] == npos ? toks_.size() : match_[i] + 1; }

    std::size_t skip_angles(std::size_t i, std::size_t end) const {
        int depth = 0;
        std::size_t j = i;
        while (j < end) {
            const auto& t = toks_[j];
            if (t.is("<")) {
                ++depth;
            } else if (t.is(">")) {
                if (--depth == 0) return j + 1;
            } else if (t.is(">>")) {
                depth -= 2;
                if (depth <= 0) return j + 1;
            } else if (t.is("(") || t.is("[")) {
                j = jump(j);
                continue;
            } else if (t.is(";") || t.is("{") || t.is("}") || t.is(")") || t.is("]") || t.is("=") ||
                       t.is("&&") || t.is("||")) {
                return npos;
            }
            ++j;
        }
        return npos;
    }

    void locate_function() {
        std::size_t last_paren = npos;
        for (std::size_t k = 0; k < toks_.size();) {
            const auto& t = toks_[k];
            if (t.is("(")) {
                static const std::set<std::string_view> not_params = {"noexcept", "decltype", "alignas",
                                                                      "__attribute__", "requires", "throw"};
                if (k == 0 || !not_params.count(toks_[k - 1].text)) {
                    if (last_paren == npos || !body_candidate_seen_) last_paren = k;
                }
                k = jump(k);
                continue;
            }
            if (t.is("[")) {
                k = jump(k);
                continue;
            }
            if (t.is("{")) {
                const bool after_init_item = k > 0 && toks_[k - 1].is_ident() && in_init_list_;
                if (last_paren != npos && !after_init_item) {
                    params_open_ = last_paren;
                    body_open_ = k;
                    body_close_ = match_[k] == npos ? toks_.size() : match_[k];
                    return;
                }
                k = jump(k);
                continue;
            }
            if (t.is(":") && last_paren != npos) {
                in_init_list_ = true;
                body_candidate_seen_ = true;
            }
            if (t.is(";")) last_paren = npos;
            ++k;
        }
        throw Error(ErrorKind::NotAFunction, kModule, "no parameter list followed by a body");
    }

    void collect_parameters() {
        const std::size_t close = match_[params_open_] == npos ? body_open_ : match_[params_open_];
        std::size_t seg = params_open_ + 1;
        auto take = [&](std::size_t a, std::size_t b) {
            std::size_t name = npos;
            for (std::size_t k = a; k < b; ++k) {
                if (toks_[k].is("=")) break;
                if (toks_[k].is("(") || toks_[k].is("[")) {
                    k = jump(k) - 1;
                    continue;
                }
                if (is_plain_name(toks_[k])) name = k;
            }
            if (name != npos) params_.insert(std::string(toks_[name].text));
        };
        int angle = 0;
        for (std::size_t k = seg; k < close; ++k) {
            const auto& t = toks_[k];
            if (t.is("(") || t.is("[") || t.is("{")) {
                k = jump(k) - 1;
                continue;
            }
            if (t.is("<")) ++angle;
            else if (t.is(">")) angle = std::max(0, angle - 1);
            else if (t.is(">>")) angle = std::max(0, angle - 2);
            else if (t.is(",") && angle == 0) {
                take(seg, k);
                seg = k + 1;
            }
        }
        take(seg, close);
    }

    void declare(std::size_t token) {
        const std::string name(toks_[token].text);
        if (preserve_.count(name)) return;
        if (params_.count(name)) {
            warnings_.push_back("line " + std::to_string(toks_[token].line) + ": local '" + name +
                                "' shadows a parameter; left unchanged");
            return;
        }
        for (const auto& d : declared_) {
            if (d.name == name) {
                warnings_.push_back("line " + std::to_string(toks_[token].line) + ": '" + name +
                                    "' redeclared; first declaration wins");
                return;
            }
        }
        declared_.push_back(Declared{name, token});
    }

    /// Length of a type-specifier sequence starting at `k`, or 0.
    std::size_t type_length(std::size_t k, std::size_t end) const {
        std::size_t j = k;
        bool have_name = false;
        while (j < end && is_type_qualifier(toks_[j])) ++j;
        while (j < end) {
            const auto& t = toks_[j];
            if (is_builtin_type(t)) {
                have_name = true;
                ++j;
            } else if (t.is("::")) {
                ++j;
                if (j < end && is_plain_name(toks_[j])) {
                    have_name = true;
                    ++j;
                } else {
                    return 0;
                }
            } else if (is_plain_name(t) && !have_name) {
                have_name = true;
                ++j;
            } else if (t.is("<") && have_name) {
                const std::size_t close = skip_angles(j, end);
                if (close == npos) return 0;
                j = close;
            } else if (is_type_qualifier(t)) {
                ++j;
            } else {
                break;
            }
            // a name directly followed by another plain name ends the type
            if (j < end && have_name && is_plain_name(toks_[j]) && !toks_[j - 1].is("::")) break;
        }
        while (j < end && (toks_[j].is("*") || toks_[j].is("&") || toks_[j].is("&&") || is_type_qualifier(toks_[j]))) {
            ++j;
        }
        return have_name ? j - k : 0;
    }

    /// Tries a declaration statement at `k`; returns the index where scanning
    /// should continue or npos when this is not a declaration.
    std::size_t try_declaration(std::size_t k, std::size_t end, bool in_for_header) {
        const std::size_t type_len = type_length(k, end);
        if (type_len == 0) return npos;
        std::size_t j = k + type_len;
        if (j >= end) return npos;

        if (toks_[j].is("[")) {  // structured binding
            bool is_auto = false;
            for (std::size_t a = k; a < j; ++a) is_auto = is_auto || toks_[a].is("auto");
            if (!is_auto) return npos;
            const std::size_t close = match_[j];
            if (close == npos || close + 1 >= end) return npos;
            if (!(toks_[close + 1].is("=") || toks_[close + 1].is("{") || (in_for_header && toks_[close + 1].is(":")))) {
                return npos;
            }
            for (std::size_t b = j + 1; b < close; ++b) {
                if (is_plain_name(toks_[b])) declare(b);
            }
            return close + 1;
        }

        if (!is_plain_name(toks_[j]) || j + 1 >= end) return npos;
        const auto& after = toks_[j + 1];
        const bool ok = after.is("=") || after.is(";") || after.is("(") || after.is("{") || after.is("[") ||
                        after.is(",") || (in_for_header && after.is(":"));
        if (!ok) return npos;
        if (after.is("(") && toks_[j - 1].is("*")) return npos;  // `a * b(...)` is an expression
        declare(j);

        // further declarators
        std::size_t p = j + 1;
        while (p < end) {
            const auto& t = toks_[p];
            if (t.is(";") || (in_for_header && t.is(":"))) break;
            if (t.is("(") || t.is("[") || t.is("{")) {
                p = jump(p);
                continue;
            }
            if (t.is(",")) {
                std::size_t q = p + 1;
                while (q < end && (toks_[q].is("*") || toks_[q].is("&") || toks_[q].is("&&"))) ++q;
                if (q < end && is_plain_name(toks_[q])) declare(q);
                p = q + 1;
                continue;
            }
            ++p;
        }
        return j + 1;
    }

    void collect_locals(std::size_t begin, std::size_t end) {
        bool at_start = true;
        bool pending_case = false;
        std::vector<std::size_t> control_closes;
        for (std::size_t k = begin; k < end;) {
            const auto& t = toks_[k];
            if (at_start) {
                at_start = false;
                if (!t.is("{") && !t.is("}") && !t.is(";")) {
                    const std::size_t next = try_declaration(k, end, false);
                    if (next != npos) {
                        k = next;
                        continue;
                    }
                }
            }
            if ((t.is("for") || t.is("if") || t.is("while") || t.is("switch")) && k + 1 < end &&
                toks_[k + 1].is("(")) {
                const std::size_t open = k + 1;
                const std::size_t close = match_[open] == npos ? end : match_[open];
                scan_header(open + 1, close, t.is("for"));
                k = close + 1;
                at_start = true;
                continue;
            }
            if (t.is("catch") && k + 1 < end && toks_[k + 1].is("(")) {
                const std::size_t open = k + 1;
                const std::size_t close = match_[open] == npos ? end : match_[open];
                const std::size_t type_len = type_length(open + 1, close);
                if (type_len > 0 && open + 1 + type_len + 1 == close && is_plain_name(toks_[close - 1])) {
                    declare(close - 1);
                }
                k = close + 1;
                continue;
            }
            if (t.is("if") && k + 2 < end && toks_[k + 1].is("constexpr") && toks_[k + 2].is("(")) {
                ++k;
                continue;
            }
            if (t.is("case") || t.is("default")) pending_case = true;
            if (t.is(":") && pending_case) {
                pending_case = false;
                at_start = true;
            }
            if (t.is("{") || t.is("}") || t.is(";") || t.is("else") || t.is("do") || t.is("try")) at_start = true;
            ++k;
        }
    }

    void scan_header(std::size_t begin, std::size_t end, bool is_for) {
        std::size_t k = begin;
        const std::size_t next = try_declaration(k, end, is_for);
        if (next != npos) k = next;
        // C++17 init-statement: `if (init; cond)`
        for (; k < end; ++k) {
            if (toks_[k].is("(") || toks_[k].is("[") || toks_[k].is("{")) {
                k = jump(k) - 1;
                continue;
            }
            if (toks_[k].is(";")) {
                if (k + 1 < end && !is_for) {
                    const std::size_t n = try_declaration(k + 1, end, false);
                    if (n != npos) k = n - 1;
                }
                if (!is_for) break;
            }
        }
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::vector<std::size_t> match_;
    std::set<std::string> preserve_;
    std::set<std::string> params_;
    std::vector<Declared> declared_;
    std::vector<std::string> warnings_;
    std::size_t params_open_ = npos;
    std::size_t body_open_ = npos;
    std::size_t body_close_ = npos;
    bool in_init_list_ = false;
    bool body_candidate_seen_ = false;
};

}  // namespace

NormalizedFunction normalize_function(std::string_view function_text, const std::vector<std::string>& preserve) {
    return Normalizer(function_text, preserve).run();
}

std::string normalize_identifiers(std::string_view function_text, const std::vector<std::string>& preserve) {
    return normalize_function(function_text, preserve).text;
}

}  // namespace astra
