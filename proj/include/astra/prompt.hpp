#pragma once

#include "astra/structure.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace astra {

enum class IntentKind { Generate, Edit, Explain };
std::string_view to_string(IntentKind kind);

struct Intent {
    IntentKind kind = IntentKind::Generate;
    std::vector<std::string> mentioned_classes;
    std::vector<std::string> mentioned_functions;
};

/// Keyword heuristic. Edit words win over explain words; symbols are matched
/// as whole, case-sensitive words. Throws BlankPrompt.
Intent classify_intent(std::string_view user_prompt, const std::vector<std::string>& known_classes = {},
                       const std::vector<std::string>& known_functions = {});

inline constexpr std::string_view kGeneralDelimiter = "----- General instructions -----";
inline constexpr std::string_view kRagDelimiter =
    "----- Context derived from Retrieval Augmented Generation (RAG) -----";
inline constexpr std::string_view kAstDelimiter =
    "----- Information derived from Abstract Syntax Tree (AST) analysis -----";
inline constexpr std::string_view kUserDelimiter = "----- User prompt -----";

struct PromptBundle {
    std::string general_instructions;
    std::string rag_context;
    std::string ast_context;
    std::string user_prompt;

    friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

/// Four sections in fixed order, each as `<delimiter>\n<body>\n`. Trailing
/// newlines of a body are dropped; body lines that look like a delimiter
/// (`-----...-----` after trimming) get one leading space. Throws
/// EmptyUserPrompt.
std::string compose_prompt(const PromptBundle& bundle);

/// Inverse of compose_prompt for bodies without trailing newlines. Throws
/// InvalidArgument when the four delimiters are not present in order.
PromptBundle parse_prompt(std::string_view text);

std::string default_general_instructions();

struct BudgetedPrompt {
    PromptBundle bundle;
    std::size_t dropped_rag_blocks = 0;
    std::size_t dropped_ast_blocks = 0;
    bool over_budget = false;  // still too long after every allowed drop
};

/// Builds the bundle from ranked RAG blocks and AST blocks. With a nonzero
/// `char_budget`, drops the lowest-ranked RAG blocks first, then unfocused
/// AST blocks from the end, until compose_prompt fits.
BudgetedPrompt assemble_prompt(std::string general_instructions, const std::vector<std::string>& rag_blocks,
                               const std::vector<AstBlock>& ast_blocks, std::string user_prompt,
                               std::size_t char_budget);

}  // namespace astra
