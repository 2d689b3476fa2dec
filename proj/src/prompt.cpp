#include "astra/prompt.hpp"

#include "astra/error.hpp"
#include "astra/util.hpp"

#include <array>
#include <regex>

namespace astra {

namespace {

const char* kModule = "prompt_composer";

constexpr std::array<std::string_view, 4> kDelimiters = {kGeneralDelimiter, kRagDelimiter, kAstDelimiter,
                                                         kUserDelimiter};

bool looks_like_delimiter(std::string_view line) {
    static const std::regex pattern("^-----.*-----$");
    const auto t = util::trim(line);
    return std::regex_match(t.begin(), t.end(), pattern);
}

std::string escape_body(std::string_view body) {
    std::string_view b = body;
    while (!b.empty() && (b.back() == '\n' || b.back() == '\r')) b.remove_suffix(1);
    if (b.empty()) return {};
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (true) {
        const auto nl = b.find('\n', start);
        std::string line(b.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        if (looks_like_delimiter(line)) line.insert(line.begin(), ' ');
        lines.push_back(std::move(line));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return util::join(lines, "\n");
}

/// True when `text` contains `phrase` with word boundaries on both ends.
bool contains_phrase(std::string_view text, std::string_view phrase) {
    std::size_t pos = 0;
    while ((pos = text.find(phrase, pos)) != std::string_view::npos) {
        const bool left = pos == 0 || !util::is_identifier_char(text[pos - 1]);
        const std::size_t end = pos + phrase.size();
        const bool right = end >= text.size() || !util::is_identifier_char(text[end]);
        if (left && right) return true;
        ++pos;
    }
    return false;
}

std::vector<std::string> mentioned(std::string_view prompt, const std::vector<std::string>& symbols) {
    std::vector<std::string> out;
    for (const auto& s : symbols) {
        if (s.empty() || std::find(out.begin(), out.end(), s) != out.end()) continue;
        if (util::contains_word(prompt, s)) out.push_back(s);
    }
    return out;
}

}  // namespace

std::string_view to_string(IntentKind kind) {
    switch (kind) {
    case IntentKind::Generate: return "generate";
    case IntentKind::Edit: return "edit";
    case IntentKind::Explain: return "explain";
    }
    return "generate";
}

Intent classify_intent(std::string_view user_prompt, const std::vector<std::string>& known_classes,
                       const std::vector<std::string>& known_functions) {
    if (util::is_blank(user_prompt)) throw Error(ErrorKind::BlankPrompt, kModule, "user prompt is blank");
    const std::string lower = util::to_lower_ascii(user_prompt);
    Intent intent;
    static const std::array<std::string_view, 6> edit_words = {"modify", "change", "replace", "port", "rewrite", "edit"};
    static const std::array<std::string_view, 3> explain_words = {"explain", "what does", "describe"};
    const auto any = [&](const auto& words) {
        return std::any_of(words.begin(), words.end(), [&](std::string_view w) { return contains_phrase(lower, w); });
    };
    if (any(edit_words)) intent.kind = IntentKind::Edit;
    else if (any(explain_words)) intent.kind = IntentKind::Explain;
    intent.mentioned_classes = mentioned(user_prompt, known_classes);
    intent.mentioned_functions = mentioned(user_prompt, known_functions);
    return intent;
}

std::string compose_prompt(const PromptBundle& bundle) {
    if (util::is_blank(bundle.user_prompt)) throw Error(ErrorKind::EmptyUserPrompt, kModule, "user prompt is empty");
    const std::array<const std::string*, 4> bodies = {&bundle.general_instructions, &bundle.rag_context,
                                                      &bundle.ast_context, &bundle.user_prompt};
    std::string out;
    for (std::size_t i = 0; i < kDelimiters.size(); ++i) {
        out += kDelimiters[i];
        out += '\n';
        out += escape_body(*bodies[i]);
        out += '\n';
    }
    return out;
}

PromptBundle parse_prompt(std::string_view text) {
    const auto lines = util::split_lines(text);
    std::array<std::size_t, 4> at{};
    std::size_t next = 0;
    for (std::size_t i = 0; i < lines.size() && next < kDelimiters.size(); ++i) {
        if (lines[i] == kDelimiters[next]) at[next++] = i;
    }
    if (next != kDelimiters.size()) {
        throw Error(ErrorKind::InvalidArgument, kModule,
                    "prompt is missing delimiter \"" + std::string(kDelimiters[next]) + "\"");
    }
    std::array<std::string, 4> bodies;
    for (std::size_t s = 0; s < 4; ++s) {
        const std::size_t from = at[s] + 1;
        const std::size_t to = s + 1 < 4 ? at[s + 1] : lines.size();
        std::vector<std::string> body;
        for (std::size_t i = from; i < to; ++i) {
            std::string line = lines[i];
            if (looks_like_delimiter(line) && !line.empty() && line.front() == ' ') line.erase(line.begin());
            body.push_back(std::move(line));
        }
        bodies[s] = util::join(body, "\n");
    }
    return PromptBundle{bodies[0], bodies[1], bodies[2], bodies[3]};
}

std::string default_general_instructions() {
    return "You are assisting with C++ code in a high-performance computing application.\n"
           "Follow the coding style, naming and framework idioms of the surrounding code and the retrieved examples.\n"
           "Modify only the requested function; keep its name, signature and parameters unchanged.\n"
           "Return the complete function in a single fenced ```cpp code block.";
}

BudgetedPrompt assemble_prompt(std::string general_instructions, const std::vector<std::string>& rag_blocks,
                               const std::vector<AstBlock>& ast_blocks, std::string user_prompt,
                               std::size_t char_budget) {
    std::vector<std::string> rag = rag_blocks;
    std::vector<AstBlock> ast = ast_blocks;
    BudgetedPrompt out;
    const auto build = [&] {
        std::vector<std::string> ast_text;
        for (const auto& b : ast) ast_text.push_back(b.text);
        return PromptBundle{general_instructions, util::join(rag, "\n\n"), util::join(ast_text, "\n\n"), user_prompt};
    };
    out.bundle = build();
    if (char_budget == 0) return out;
    while (compose_prompt(out.bundle).size() > char_budget) {
        if (!rag.empty()) {
            rag.pop_back();
            ++out.dropped_rag_blocks;
        } else {
            auto it = std::find_if(ast.rbegin(), ast.rend(), [](const AstBlock& b) { return !b.focused; });
            if (it == ast.rend()) {
                out.over_budget = true;
                break;
            }
            ast.erase(std::next(it).base());
            ++out.dropped_ast_blocks;
        }
        out.bundle = build();
    }
    return out;
}

}  // namespace astra
