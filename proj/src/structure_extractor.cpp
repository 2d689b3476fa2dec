#include "astra/structure.hpp"

#include "astra/cpp_lexer.hpp"
#include "astra/error.hpp"
#include "astra/util.hpp"

#include <algorithm>
#include <set>

namespace astra {

namespace {

using cpp::npos;
using cpp::Token;
using cpp::TokenKind;

const char* kModule = "structure_extractor";

bool is_access_keyword(const Token& t) { return t.is("public") || t.is("private") || t.is("protected"); }

Access access_of(const Token& t) {
    if (t.is("public")) return Access::Public;
    if (t.is("protected")) return Access::Protected;
    return Access::Private;
}

bool is_ptr_op(const Token& t) { return t.is("*") || t.is("&") || t.is("&&"); }

/// Names before a '(' that never introduce a function's parameter list.
bool is_paren_keyword(const Token& t) {
    static const std::set<std::string_view> words = {"decltype",  "alignas", "alignof",    "sizeof",
                                                     "noexcept",  "requires", "__attribute__",
                                                     "__declspec", "throw",   "typeid",     "static_assert"};
    return t.is_ident() && words.count(t.text) > 0;
}

struct Scope {
    bool in_class = false;
    std::size_t class_index = 0;
    Access access = Access::Public;
    std::string class_prefix;
    std::string class_short_name;
};

class StructureParser {
public:
    StructureParser(std::string_view source, StructuralReport& report)
        : src_(source), toks_(cpp::significant_tokens(source)), match_(cpp::match_brackets(toks_)), rep_(report) {}

    void run() {
        check_balance();
        parse_scope(0, toks_.size(), Scope{});
        attach_out_of_line_definitions();
        std::stable_sort(rep_.classes.begin(), rep_.classes.end(), [](const ClassInfo& a, const ClassInfo& b) {
            return a.range.start_line < b.range.start_line;
        });
    }

private:
    void check_balance() {
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            const auto& t = toks_[i];
            if (t.kind != TokenKind::Punct || match_[i] != npos) continue;
            if (t.is("{") || t.is("}")) {
                rep_.warnings.push_back("UnbalancedBraces: unmatched '" + std::string(t.text) + "' at line " +
                                        std::to_string(t.line));
            } else if (t.is("(") || t.is(")") || t.is("[") || t.is("]")) {
                rep_.warnings.push_back("unmatched '" + std::string(t.text) + "' at line " + std::to_string(t.line));
            }
        }
    }

    std::size_t jump(std::size_t i) const { return match_[i] == npos ? toks_.size() : match_[i] + 1; }

    std::size_t close_line(std::size_t open) const {
        return match_[open] == npos ? toks_.back().line : toks_[match_[open]].line;
    }

    /// `i` at '<'. Index just past the matching '>' or npos when this does not
    /// look like a template argument list.
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
            } else if (t.is(";") || t.is("{") || t.is("}") || t.is(")") || t.is("]")) {
                return npos;
            }
            ++j;
        }
        return npos;
    }

    /// Tokens [b, e) joined with a single space wherever the source had
    /// whitespace or comments between them.
    std::string render(std::size_t b, std::size_t e, std::size_t skip = npos) const {
        std::string out;
        std::size_t prev_end = npos;
        for (std::size_t k = b; k < e && k < toks_.size(); ++k) {
            const auto& t = toks_[k];
            if (k == skip) {
                if (prev_end != npos) prev_end = t.offset + t.text.size();
                continue;
            }
            if (prev_end != npos && t.offset > prev_end) out += ' ';
            out += t.text;
            prev_end = t.offset + t.text.size();
        }
        return out;
    }

    std::size_t skip_statement(std::size_t i, std::size_t end) const {
        while (i < end) {
            if (toks_[i].is(";")) return i + 1;
            if (toks_[i].is("(") || toks_[i].is("[") || toks_[i].is("{")) {
                i = jump(i);
                continue;
            }
            if (toks_[i].is("}")) return i;
            ++i;
        }
        return end;
    }

    void parse_scope(std::size_t begin, std::size_t end, Scope scope) {
        std::size_t i = begin;
        std::string tmpl;
        std::size_t tmpl_line = 0;
        while (i < end) {
            const auto& t = toks_[i];
            if (t.is(";")) {
                ++i;
                continue;
            }
            if (t.is("}") || t.is(")") || t.is("]")) {
                ++i;
                continue;
            }
            if (scope.in_class && is_access_keyword(t) && i + 1 < end && toks_[i + 1].is(":")) {
                scope.access = access_of(t);
                i += 2;
                continue;
            }
            if (t.is("template")) {
                std::size_t k = i + 1;
                if (k < end && toks_[k].is("<")) {
                    const std::size_t close = skip_angles(k, end);
                    k = close == npos ? k + 1 : close;
                }
                tmpl = render(i, k);
                tmpl_line = t.line;
                i = k;
                continue;
            }
            if (t.is("namespace")) {
                std::size_t j = i + 1;
                while (j < end && !toks_[j].is("{") && !toks_[j].is(";")) ++j;
                if (j < end && toks_[j].is("{")) {
                    const std::size_t close = std::min(jump(j), end);
                    parse_scope(j + 1, close == end ? end : close - 1, scope);
                    i = close;
                } else {
                    i = j + 1;
                }
                tmpl.clear();
                continue;
            }
            if (t.is("extern") && i + 2 < end && toks_[i + 1].kind == TokenKind::String && toks_[i + 2].is("{")) {
                const std::size_t close = std::min(jump(i + 2), end);
                parse_scope(i + 3, close == end ? end : close - 1, scope);
                i = close;
                continue;
            }
            if (t.is("using") || t.is("typedef") || t.is("static_assert") || t.is("enum")) {
                i = skip_statement(i, end);
                tmpl.clear();
                continue;
            }
            if (t.is("class") || t.is("struct") || t.is("union")) {
                if (auto next = try_parse_class(i, end, scope, tmpl, tmpl_line)) {
                    i = *next;
                    tmpl.clear();
                    continue;
                }
            }
            const std::size_t next = parse_declaration(i, end, scope, tmpl, tmpl_line);
            i = std::max(next, i + 1);
            tmpl.clear();
        }
    }

    std::optional<std::size_t> try_parse_class(std::size_t i, std::size_t end, const Scope& scope,
                                               const std::string& tmpl, std::size_t tmpl_line) {
        std::size_t j = i + 1;
        while (j < end) {
            const auto& t = toks_[j];
            if (t.is("{")) break;
            if (t.is(";")) return j + 1;  // forward declaration
            if (t.is("(") || t.is("=") || t.is(")") || t.is("}")) return std::nullopt;
            if (t.is("[")) {
                j = jump(j);
                continue;
            }
            if (t.is("<")) {
                const std::size_t close = skip_angles(j, end);
                j = close == npos ? j + 1 : close;
                continue;
            }
            ++j;
        }
        if (j >= end) return std::nullopt;

        // Name sits before any base clause; for specializations it precedes '<'.
        std::size_t head_end = j;
        for (std::size_t k = i + 1; k < j; ++k) {
            if (toks_[k].is(":")) {
                head_end = k;
                break;
            }
        }
        std::string name;
        for (std::size_t k = i + 1; k < head_end; ++k) {
            const auto& t = toks_[k];
            if (t.is("<")) break;
            if (t.is("[")) {
                k = jump(k) - 1;
                continue;
            }
            if (t.is_ident() && !cpp::is_keyword(t.text) && !t.is("final")) name = std::string(t.text);
        }

        const std::size_t body_close = match_[j] == npos ? end : match_[j];
        std::size_t after = body_close == end ? end : body_close + 1;
        after = after < end && toks_[after].is(";") ? after + 1 : skip_statement(after, end);

        if (toks_[i].is("union")) {
            rep_.warnings.push_back("line " + std::to_string(toks_[i].line) + ": union " + (name.empty() ? "" : name + " ") +
                                    "skipped (unsupported)");
            return after;
        }
        if (name.empty()) {
            rep_.warnings.push_back("line " + std::to_string(toks_[i].line) + ": anonymous " +
                                    std::string(toks_[i].text) + " skipped");
            return after;
        }

        ClassInfo info;
        info.name = scope.class_prefix + name;
        info.kind = toks_[i].is("struct") ? ClassKind::Struct : ClassKind::Class;
        info.template_header = tmpl;
        info.range = SourceRange{tmpl.empty() ? toks_[i].line : tmpl_line, close_line(j)};
        rep_.classes.push_back(std::move(info));
        const std::size_t index = rep_.classes.size() - 1;

        Scope inner;
        inner.in_class = true;
        inner.class_index = index;
        inner.access = toks_[i].is("struct") ? Access::Public : Access::Private;
        inner.class_prefix = scope.class_prefix + name + "::";
        inner.class_short_name = name;
        if (scope.in_class) {
            rep_.warnings.push_back("line " + std::to_string(toks_[i].line) + ": nested class " +
                                    rep_.classes[index].name + " reported separately");
        }
        parse_scope(j + 1, body_close, inner);
        return after;
    }

    std::size_t count_params(std::size_t open) const {
        const std::size_t close = match_[open];
        if (close == npos || close == open + 1) return 0;
        if (close == open + 2 && toks_[open + 1].is("void")) return 0;
        std::size_t count = 1;
        int angle = 0;
        for (std::size_t k = open + 1; k < close; ++k) {
            const auto& t = toks_[k];
            if (t.is("(") || t.is("[") || t.is("{")) {
                k = jump(k) - 1;
                continue;
            }
            if (t.is("<")) ++angle;
            else if (t.is(">")) angle = std::max(0, angle - 1);
            else if (t.is(">>")) angle = std::max(0, angle - 2);
            else if (t.is(",") && angle == 0) ++count;
        }
        return count;
    }

    std::size_t parse_declaration(std::size_t start, std::size_t end, const Scope& scope, const std::string& tmpl,
                                  std::size_t tmpl_line) {
        std::size_t j = start;
        std::size_t paren = npos;
        std::size_t sig_end = npos;
        std::size_t body_open = npos;
        std::size_t operator_at = npos;
        bool seen_assign = false;
        bool assign_before_paren = false;
        bool pointer_declarator = false;
        const bool is_friend = toks_[start].is("friend");

        while (j < end) {
            const auto& t = toks_[j];
            if (t.is(";") || t.is("}")) break;
            if (t.is("operator") && paren == npos && !seen_assign) {
                operator_at = j;
                std::size_t k = j + 1;
                if (k + 1 < end && toks_[k].is("(") && toks_[k + 1].is(")")) {
                    k += 2;
                } else if (k + 1 < end && toks_[k].is("[") && toks_[k + 1].is("]")) {
                    k += 2;
                } else {
                    while (k < end && !toks_[k].is("(") && !toks_[k].is(";")) ++k;
                }
                j = k;
                continue;
            }
            if (t.is("(")) {
                if (paren == npos && !seen_assign && j > start && !is_paren_keyword(toks_[j - 1])) {
                    paren = j;
                    pointer_declarator =
                        j + 1 < end && (toks_[j + 1].is("*") || toks_[j + 1].is("&") || toks_[j + 1].is("^"));
                }
                j = jump(j);
                continue;
            }
            if (t.is("[")) {
                j = jump(j);
                continue;
            }
            if (t.is("<") && paren == npos && !seen_assign) {
                const std::size_t close = skip_angles(j, end);
                j = close == npos ? j + 1 : close;
                continue;
            }
            if (t.is("{")) {
                if (paren != npos && !seen_assign && !pointer_declarator) {
                    body_open = j;
                    if (sig_end == npos) sig_end = j;
                    break;
                }
                j = jump(j);
                continue;
            }
            if (t.is("=")) {
                if (!seen_assign) {
                    seen_assign = true;
                    if (paren == npos) assign_before_paren = true;
                    else if (sig_end == npos) sig_end = j;
                }
                ++j;
                continue;
            }
            if (t.is(":") && paren != npos && !seen_assign && !pointer_declarator) {
                if (sig_end == npos) sig_end = j;
                std::size_t k = j + 1;
                while (k < end) {
                    const auto& u = toks_[k];
                    if (u.is(";") || u.is("}")) break;
                    if (u.is("(") || u.is("[")) {
                        k = jump(k);
                        continue;
                    }
                    if (u.is("<")) {
                        const std::size_t close = skip_angles(k, end);
                        k = close == npos ? k + 1 : close;
                        continue;
                    }
                    if (u.is("{")) {
                        const auto& prev = toks_[k - 1];
                        if (prev.is(")") || prev.is("}") || prev.is("...")) {
                            body_open = k;
                            break;
                        }
                        k = jump(k);
                        continue;
                    }
                    ++k;
                }
                j = k;
                if (body_open != npos) break;
                continue;
            }
            ++j;
        }

        const std::size_t stmt_end = std::min(j, end);
        std::size_t next;
        std::size_t end_line;
        if (body_open != npos) {
            const std::size_t close = match_[body_open];
            end_line = close_line(body_open);
            next = close == npos ? end : close + 1;
        } else {
            end_line = toks_[std::min(stmt_end, toks_.size() - 1)].line;
            next = stmt_end < end && toks_[stmt_end].is(";") ? stmt_end + 1 : stmt_end;
        }
        if (is_friend) return next;

        const std::size_t start_line = tmpl.empty() ? toks_[start].line : tmpl_line;

        if (paren != npos && !assign_before_paren && !pointer_declarator) {
            record_function(start, paren, operator_at, sig_end == npos ? stmt_end : sig_end, body_open != npos,
                            SourceRange{start_line, std::max(start_line, end_line)}, scope, tmpl);
            return next;
        }
        if (scope.in_class) record_fields(start, stmt_end, scope, pointer_declarator ? paren : npos);
        return next;
    }

    void record_function(std::size_t start, std::size_t paren, std::size_t operator_at, std::size_t sig_end,
                         bool is_definition, SourceRange range, const Scope& scope, const std::string& tmpl) {
        std::string name;
        std::size_t name_at = npos;
        if (operator_at != npos) {
            name = render(operator_at, paren);
            name_at = operator_at;
        } else {
            std::size_t p = paren - 1;
            if (toks_[p].is(">")) {
                while (p > start && !toks_[p].is("<")) --p;
                if (p > start) --p;
            }
            if (!toks_[p].is_ident() || cpp::is_keyword(toks_[p].text)) {
                rep_.warnings.push_back("line " + std::to_string(range.start_line) + ": unrecognized declaration");
                return;
            }
            name = std::string(toks_[p].text);
            name_at = p;
            if (p > start && toks_[p - 1].is("~")) {
                name = "~" + name;
                name_at = p - 1;
            }
        }

        std::vector<std::string> qualifier_parts;
        std::size_t q = name_at;
        while (q >= start + 2 && toks_[q - 1].is("::")) {
            std::size_t r = q - 2;
            if (toks_[r].is(">")) {
                int depth = 0;
                while (r > start) {
                    if (toks_[r].is(">")) ++depth;
                    else if (toks_[r].is("<") && --depth == 0) break;
                    --r;
                }
                if (r == start) break;
                --r;
            }
            if (!toks_[r].is_ident()) break;
            qualifier_parts.insert(qualifier_parts.begin(), std::string(toks_[r].text));
            q = r;
        }
        const std::string qualifier = util::join(qualifier_parts, "::");

        // Anything without a return type is a macro invocation, unless it is a
        // constructor or destructor.
        const bool has_return_type = q > start;
        const bool is_ctor_like =
            (scope.in_class && (name == scope.class_short_name || name == "~" + scope.class_short_name)) ||
            (!qualifier_parts.empty() &&
             (name == qualifier_parts.back() || name == "~" + qualifier_parts.back()));
        if (!has_return_type && !is_ctor_like && operator_at == npos) {
            rep_.warnings.push_back("line " + std::to_string(range.start_line) + ": skipped '" + name +
                                    "(...)' (no return type, likely a macro)");
            return;
        }
        if (!scope.in_class && !is_definition) {
            const std::size_t close = match_[paren];
            for (std::size_t k = paren + 1; close != npos && k < close; ++k) {
                const auto kind = toks_[k].kind;
                if (kind == TokenKind::Number || kind == TokenKind::String || kind == TokenKind::Char) {
                    return;  // `Type var(1, 2);` at namespace scope
                }
            }
        }

        MethodInfo m;
        m.name = name;
        m.signature_text = render(start, sig_end);
        m.access = scope.in_class ? scope.access : Access::Public;
        m.range = range;
        m.is_definition = is_definition;
        m.qualifier = qualifier;
        m.template_header = tmpl;
        m.param_count = count_params(paren);
        if (scope.in_class) rep_.classes[scope.class_index].methods.push_back(std::move(m));
        else rep_.free_functions.push_back(std::move(m));
    }

    void record_fields(std::size_t start, std::size_t stmt_end, const Scope& scope, std::size_t fp_paren) {
        auto& fields = rep_.classes[scope.class_index].fields;
        if (fp_paren != npos) {
            const std::size_t close = match_[fp_paren];
            std::size_t name_at = npos;
            for (std::size_t k = fp_paren + 1; close != npos && k < close; ++k) {
                if (toks_[k].is_ident() && !cpp::is_keyword(toks_[k].text)) name_at = k;
            }
            if (name_at == npos) return;
            std::size_t stop = stmt_end;
            for (std::size_t k = close == npos ? stmt_end : close + 1; k < stmt_end; ++k) {
                if (toks_[k].is("(")) {
                    k = jump(k) - 1;
                    continue;
                }
                if (toks_[k].is("=") || toks_[k].is("{")) {
                    stop = k;
                    break;
                }
            }
            fields.push_back(FieldInfo{std::string(toks_[name_at].text), render(start, stop, name_at), scope.access});
            return;
        }

        // Split declarators at depth-0 commas.
        std::vector<std::pair<std::size_t, std::size_t>> declarators;
        std::size_t decl_begin = start;
        bool in_init = false;
        for (std::size_t k = start; k < stmt_end;) {
            const auto& t = toks_[k];
            if (t.is("(") || t.is("[") || t.is("{")) {
                k = jump(k);
                continue;
            }
            if (t.is("<") && !in_init) {
                const std::size_t close = skip_angles(k, stmt_end);
                k = close == npos ? k + 1 : close;
                continue;
            }
            if (t.is("=")) in_init = true;
            if (t.is(",")) {
                declarators.emplace_back(decl_begin, k);
                decl_begin = k + 1;
                in_init = false;
            }
            ++k;
        }
        declarators.emplace_back(decl_begin, stmt_end);

        std::string base_type;
        for (std::size_t d = 0; d < declarators.size(); ++d) {
            const auto [a, b] = declarators[d];
            std::size_t stop = b;
            for (std::size_t k = a; k < b;) {
                const auto& t = toks_[k];
                if (t.is("=") || t.is("{") || t.is("[") || t.is(":")) {
                    stop = k;
                    break;
                }
                if (t.is("<")) {
                    const std::size_t close = skip_angles(k, b);
                    k = close == npos ? k + 1 : close;
                    continue;
                }
                if (t.is("(")) {
                    k = jump(k);
                    continue;
                }
                ++k;
            }
            std::size_t name_at = npos;
            for (std::size_t k = a; k < stop; ++k) {
                if (toks_[k].is("<")) {
                    const std::size_t close = skip_angles(k, stop);
                    if (close != npos) {
                        k = close - 1;
                        continue;
                    }
                }
                if (toks_[k].is_ident() && !cpp::is_keyword(toks_[k].text)) name_at = k;
            }
            if (name_at == npos) {
                rep_.warnings.push_back("line " + std::to_string(toks_[a < toks_.size() ? a : start].line) +
                                        ": unrecognized member declaration");
                continue;
            }
            std::string type;
            if (d == 0) {
                type = render(a, name_at);
                std::size_t base_end = name_at;
                while (base_end > a && is_ptr_op(toks_[base_end - 1])) --base_end;
                base_type = render(a, base_end);
            } else {
                type = base_type + render(a, name_at);
            }
            std::size_t k = stop;
            while (k < b && toks_[k].is("[")) {
                const std::size_t close = jump(k);
                type += render(k, close);
                k = close;
            }
            fields.push_back(FieldInfo{std::string(toks_[name_at].text), std::string(util::trim(type)), scope.access});
        }
    }

    static bool qualifier_matches(const std::string& qualifier, const std::string& class_name) {
        if (qualifier == class_name) return true;
        const auto ends_with = [](const std::string& s, const std::string& suffix) {
            return s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0 &&
                   s[s.size() - suffix.size() - 1] == ':';
        };
        return ends_with(qualifier, class_name) || ends_with(class_name, qualifier);
    }

    void attach_out_of_line_definitions() {
        auto& fns = rep_.free_functions;
        for (auto it = fns.begin(); it != fns.end();) {
            bool merged = false;
            if (!it->qualifier.empty() && it->is_definition) {
                for (auto& cls : rep_.classes) {
                    if (!qualifier_matches(it->qualifier, cls.name)) continue;
                    std::vector<MethodInfo*> candidates;
                    for (auto& m : cls.methods) {
                        if (m.name == it->name && !m.is_definition) candidates.push_back(&m);
                    }
                    if (candidates.size() > 1) {
                        std::erase_if(candidates,
                                      [&](const MethodInfo* m) { return m->param_count != it->param_count; });
                    }
                    if (candidates.size() == 1) {
                        candidates.front()->range = it->range;
                        candidates.front()->is_definition = true;
                        merged = true;
                    }
                    break;
                }
            }
            it = merged ? fns.erase(it) : it + 1;
        }
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::vector<std::size_t> match_;
    StructuralReport& rep_;
};

bool class_name_matches(const std::string& reported, const std::string& wanted) {
    if (reported == wanted) return true;
    return reported.size() > wanted.size() + 2 &&
           reported.compare(reported.size() - wanted.size(), wanted.size(), wanted) == 0 &&
           reported.compare(reported.size() - wanted.size() - 2, 2, "::") == 0;
}

bool qualifier_is(const std::string& qualifier, const std::string& wanted) {
    return class_name_matches(qualifier, wanted);
}

struct Candidate {
    const MethodInfo* method;
    Access access;
};

std::vector<Candidate> function_candidates(const std::vector<const StructuralReport*>& reports,
                                           const std::optional<std::string>& class_name, const std::string& fn) {
    std::vector<Candidate> out;
    for (const auto* report : reports) {
        if (class_name) {
            for (const auto& cls : report->classes) {
                if (!class_name_matches(cls.name, *class_name)) continue;
                for (const auto& m : cls.methods) {
                    if (m.name == fn) out.push_back({&m, m.access});
                }
            }
            for (const auto& f : report->free_functions) {
                if (f.name == fn && qualifier_is(f.qualifier, *class_name)) out.push_back({&f, f.access});
            }
        } else {
            for (const auto& f : report->free_functions) {
                if (f.name == fn && f.qualifier.empty()) out.push_back({&f, f.access});
            }
        }
    }
    if (out.empty() && !class_name) {
        for (const auto* report : reports) {
            for (const auto& f : report->free_functions) {
                if (f.name == fn) out.push_back({&f, f.access});
            }
            for (const auto& cls : report->classes) {
                for (const auto& m : cls.methods) {
                    if (m.name == fn) out.push_back({&m, m.access});
                }
            }
        }
    }
    return out;
}

std::string lines_text(const SourceRange& r) {
    return "(lines " + std::to_string(r.start_line) + "–" + std::to_string(r.end_line) + ")";
}

std::string describe(const std::optional<std::string>& class_name, const std::string& fn) {
    return class_name ? *class_name + "::" + fn : fn;
}

}  // namespace

std::string_view to_string(Access access) {
    switch (access) {
    case Access::Public: return "public";
    case Access::Private: return "private";
    case Access::Protected: return "protected";
    }
    return "public";
}

const ClassInfo* StructuralReport::find_class(std::string_view name) const {
    for (const auto& c : classes) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

StructuralReport extract_structure(std::string_view source, std::string path) {
    StructuralReport report;
    report.file = std::move(path);
    StructureParser(source, report).run();
    return report;
}

SourceRange find_function_range(const StructuralReport& report, const std::optional<std::string>& class_name,
                                const std::string& fn_name) {
    const auto candidates = function_candidates({&report}, class_name, fn_name);
    if (candidates.empty()) throw Error(ErrorKind::NotFound, kModule, describe(class_name, fn_name));
    std::vector<const MethodInfo*> defs;
    for (const auto& c : candidates) {
        if (c.method->is_definition) defs.push_back(c.method);
    }
    if (defs.empty()) {
        throw Error(ErrorKind::NotADefinition, kModule,
                    describe(class_name, fn_name) + " is only declared " + lines_text(candidates.front().method->range));
    }
    if (defs.size() > 1) {
        std::string list;
        for (const auto* d : defs) {
            if (!list.empty()) list += "; ";
            list += d->signature_text + " " + lines_text(d->range);
        }
        throw Error(ErrorKind::Ambiguous, kModule, describe(class_name, fn_name) + " has " +
                                                       std::to_string(defs.size()) + " definitions: " + list);
    }
    return defs.front()->range;
}

std::string format_ast_context(const StructuralReport& report, const std::optional<Focus>& focus) {
    return format_ast_context(std::vector<StructuralReport>{report}, focus);
}

std::vector<AstBlock> ast_context_blocks(const std::vector<StructuralReport>& reports,
                                         const std::optional<Focus>& focus,
                                         const std::vector<std::string>& focus_classes) {
    std::vector<AstBlock> blocks;
    std::vector<const MethodInfo*> focus_methods;
    if (focus) {
        std::vector<const StructuralReport*> ptrs;
        for (const auto& r : reports) ptrs.push_back(&r);
        auto candidates = function_candidates(ptrs, focus->class_name, focus->function);
        if (candidates.empty()) {
            throw Error(ErrorKind::FocusNotFound, kModule, describe(focus->class_name, focus->function));
        }
        std::stable_partition(candidates.begin(), candidates.end(),
                              [](const Candidate& c) { return c.method->is_definition; });
        std::string text = "TARGET FUNCTION:";
        for (const auto& c : candidates) {
            text += "\n  " + c.method->signature_text + " " + lines_text(c.method->range);
            focus_methods.push_back(c.method);
        }
        blocks.push_back(AstBlock{std::move(text), true});
    }
    for (const auto& report : reports) {
        for (const auto& cls : report.classes) {
            bool focused = std::any_of(focus_classes.begin(), focus_classes.end(),
                                       [&](const std::string& c) { return class_name_matches(cls.name, c); });
            if (focus && focus->class_name && class_name_matches(cls.name, *focus->class_name)) focused = true;
            std::string text = "class " + cls.name + " " + lines_text(cls.range) + "\nfields:";
            for (const auto& f : cls.fields) {
                text += "\n  " + std::string(to_string(f.access)) + " " + f.type_text + " " + f.name;
            }
            text += "\nmethods:";
            for (const auto& m : cls.methods) {
                if (std::find(focus_methods.begin(), focus_methods.end(), &m) != focus_methods.end()) focused = true;
                text += "\n  " + std::string(to_string(m.access)) + " " + m.signature_text + " " + lines_text(m.range);
            }
            blocks.push_back(AstBlock{std::move(text), focused});
        }
        if (!report.free_functions.empty()) {
            std::string text = "functions:";
            for (const auto& f : report.free_functions) text += "\n  " + f.signature_text + " " + lines_text(f.range);
            blocks.push_back(AstBlock{std::move(text), true});
        }
    }
    return blocks;
}

std::string format_ast_context(const std::vector<StructuralReport>& reports, const std::optional<Focus>& focus) {
    std::vector<std::string> parts;
    for (auto& b : ast_context_blocks(reports, focus)) parts.push_back(std::move(b.text));
    return util::join(parts, "\n\n");
}

}  // namespace astra
