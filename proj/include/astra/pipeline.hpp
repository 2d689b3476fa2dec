#pragma once

#include "astra/config.hpp"
#include "astra/edit.hpp"
#include "astra/prompt.hpp"
#include "astra/retrieval.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace astra {

enum class EditDecision {
    Interactive,  // ask [a]ccept / [r]eject / [s]kip
    Accept,       // --yes
    RecordOnly,   // --no: write artifacts, leave the target alone
    Markers,      // apply markers and leave them for later resolution
};

struct RunOptions {
    std::filesystem::path prompt_file;
    std::optional<std::filesystem::path> target_file;
    std::optional<Focus> focus;  // overrides the function named in the prompt
    EditDecision decision = EditDecision::Markers;
    std::optional<std::filesystem::path> record_dir;  // store responses for replay
    std::ostream* out = nullptr;                      // streamed response and notes
    std::istream* in = nullptr;                       // interactive answers
};

struct RunOutcome {
    std::filesystem::path run_dir;
    Intent intent;
    std::vector<RetrievalResult> retrieved;
    std::string prompt;
    GenerationResult generation;
    std::string code;
    std::optional<EditProposal> proposal;
    std::string action;  // none | recorded | markers | accepted | rejected | skipped
    std::vector<std::string> warnings;
};

/// classify -> retrieve -> extract -> compose -> generate -> extract code ->
/// (edit intent with a resolvable target) propose and apply. Every artifact
/// lands in a fresh directory under config.run_root.
RunOutcome run_pipeline(const RunOptions& options, const PipelineConfig& config);

/// The prompt the pipeline would send, without generating.
struct ComposedRun {
    Intent intent;
    std::vector<RetrievalResult> retrieved;
    std::string prompt;
    std::optional<Focus> focus;
    std::vector<StructuralReport> reports;
    std::vector<std::string> warnings;
};

ComposedRun compose_for(std::string_view user_prompt, const std::optional<std::filesystem::path>& target_file,
                        const std::optional<Focus>& focus, const PipelineConfig& config);

/// Opens config.index_path and checks that its embedder matches config.embedder.
ChunkIndex open_index(const PipelineConfig& config, const Embedder& embedder);

}  // namespace astra
