#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace astra {

/// Every failure the library reports. Names follow the contracts of the
/// module that raises them.
enum class ErrorKind {
    // corpus_indexer
    MissingMarker,
    EmptyIntent,
    MalformedPair,
    EmptyBody,
    InvalidMetadata,
    DuplicateId,
    FormatVersionMismatch,
    CorruptEmbedding,
    MalformedIndex,
    // embedding
    BlankInput,
    RemoteUnavailable,
    DimensionMismatch,
    ZeroVector,
    InvalidConfig,
    // retrieval
    EmptyIndex,
    UnknownChunkId,
    InvalidArgument,
    // structure_extractor
    NotAnArray,
    Unreadable,
    NotFound,
    Ambiguous,
    NotADefinition,
    NotAFunction,
    FocusNotFound,
    // prompt_composer
    BlankPrompt,
    EmptyUserPrompt,
    // model_client
    EndpointUnreachable,
    AuthMissing,
    ReplayMiss,
    ProtocolError,
    EmptyResponse,
    // edit_applier
    StaleProposal,
    RangeOutOfBounds,
    NoMarkers,
    MalformedMarkers,
    MultipleBlocks,
    // evaluator
    MissingGeneration,
    InvalidTask,
    // cli_driver
    UnreadableConfig,
    InvalidValue,
    EmbedderMismatch,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& detail)
        : std::runtime_error("[" + module + "] " + std::string(to_string(kind)) + ": " + detail),
          kind_(kind),
          module_(std::move(module)),
          detail_(detail) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string module_;
    std::string detail_;
};

}  // namespace astra
