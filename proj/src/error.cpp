#include "astra/error.hpp"

namespace astra {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::MissingMarker: return "MissingMarker";
    case ErrorKind::EmptyIntent: return "EmptyIntent";
    case ErrorKind::MalformedPair: return "MalformedPair";
    case ErrorKind::EmptyBody: return "EmptyBody";
    case ErrorKind::InvalidMetadata: return "InvalidMetadata";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorKind::CorruptEmbedding: return "CorruptEmbedding";
    case ErrorKind::MalformedIndex: return "MalformedIndex";
    case ErrorKind::BlankInput: return "BlankInput";
    case ErrorKind::RemoteUnavailable: return "RemoteUnavailable";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::EmptyIndex: return "EmptyIndex";
    case ErrorKind::UnknownChunkId: return "UnknownChunkId";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotAnArray: return "NotAnArray";
    case ErrorKind::Unreadable: return "Unreadable";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::Ambiguous: return "Ambiguous";
    case ErrorKind::NotADefinition: return "NotADefinition";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::FocusNotFound: return "FocusNotFound";
    case ErrorKind::BlankPrompt: return "BlankPrompt";
    case ErrorKind::EmptyUserPrompt: return "EmptyUserPrompt";
    case ErrorKind::EndpointUnreachable: return "EndpointUnreachable";
    case ErrorKind::AuthMissing: return "AuthMissing";
    case ErrorKind::ReplayMiss: return "ReplayMiss";
    case ErrorKind::ProtocolError: return "ProtocolError";
    case ErrorKind::EmptyResponse: return "EmptyResponse";
    case ErrorKind::StaleProposal: return "StaleProposal";
    case ErrorKind::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorKind::NoMarkers: return "NoMarkers";
    case ErrorKind::MalformedMarkers: return "MalformedMarkers";
    case ErrorKind::MultipleBlocks: return "MultipleBlocks";
    case ErrorKind::MissingGeneration: return "MissingGeneration";
    case ErrorKind::InvalidTask: return "InvalidTask";
    case ErrorKind::UnreadableConfig: return "UnreadableConfig";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::EmbedderMismatch: return "EmbedderMismatch";
    }
    return "Unknown";
}

}  // namespace astra
