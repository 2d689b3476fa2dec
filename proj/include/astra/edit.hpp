#pragma once

#include "astra/structure.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace astra {

inline constexpr std::string_view kMarkerOpen = "<<<<<<< current";
inline constexpr std::string_view kMarkerSeparator = "=======";
inline constexpr std::string_view kMarkerClosePrefix = ">>>>>>> astra:";

struct EditProposal {
    std::filesystem::path file;
    SourceRange range;
    std::string original_text;     // lines [start, end] joined by '\n', no trailing newline
    std::string replacement_text;  // trailing newlines are not significant
    std::string marker_label;      // usually the model name
};

/// Snapshots the lines at `range`. Throws RangeOutOfBounds or InvalidArgument
/// (empty replacement).
EditProposal make_proposal(std::filesystem::path file, std::string_view file_text, SourceRange range,
                           std::string replacement_text, std::string marker_label);

/// Replaces the range by a conflict block. Throws RangeOutOfBounds,
/// StaleProposal (range no longer holds original_text).
std::string apply_with_markers(std::string_view file_text, const EditProposal& proposal);

enum class Resolution { Accept, Reject };

/// Throws NoMarkers, MalformedMarkers, MultipleBlocks.
std::string resolve(std::string_view file_text, Resolution decision);

bool has_markers(std::string_view file_text);

/// Lines the replacement occupies after an accept.
SourceRange accepted_range(const EditProposal& proposal);

/// Unbalanced (), [] and {} inside `range_hint` of `text`, one message per
/// problem naming its line. Literals and comments are ignored. Empty = ok.
std::vector<std::string> verify_braces(std::string_view text, SourceRange range_hint);

std::filesystem::path backup_path(const std::filesystem::path& file);

/// apply_with_markers on disk; writes `<file>.astra.bak` first unless one exists.
void apply_to_file(const EditProposal& proposal);

/// resolve on disk; removes the backup once no markers remain.
void resolve_file(const std::filesystem::path& file, Resolution decision);

}  // namespace astra
