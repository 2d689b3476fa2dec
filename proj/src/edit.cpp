#include "astra/edit.hpp"

#include "astra/cpp_lexer.hpp"
#include "astra/error.hpp"
#include "astra/util.hpp"

namespace astra {

namespace fs = std::filesystem;

namespace {

const char* kModule = "edit_applier";

struct Lines {
    std::vector<std::string> lines;
    bool trailing_newline = false;

    explicit Lines(std::string_view text)
        : lines(util::split_lines(text)), trailing_newline(!text.empty() && text.back() == '\n') {}

    std::string render() const {
        std::string out = util::join(lines, "\n");
        if (trailing_newline && !lines.empty()) out += '\n';
        return out;
    }
};

std::vector<std::string> replacement_lines(std::string_view text) {
    std::string_view t = text;
    while (!t.empty() && t.back() == '\n') t.remove_suffix(1);
    return util::split_lines(t);
}

void check_range(const SourceRange& range, std::size_t line_count) {
    if (range.start_line < 1 || range.end_line < range.start_line || range.end_line > line_count) {
        throw Error(ErrorKind::RangeOutOfBounds, kModule,
                    "lines " + std::to_string(range.start_line) + "-" + std::to_string(range.end_line) +
                        " outside a file of " + std::to_string(line_count) + " lines");
    }
}

std::string slice(const std::vector<std::string>& lines, const SourceRange& range) {
    return util::join(std::vector<std::string>(lines.begin() + static_cast<std::ptrdiff_t>(range.start_line - 1),
                                               lines.begin() + static_cast<std::ptrdiff_t>(range.end_line)),
                      "\n");
}

bool marker_line(const std::string& line, char c) {
    if (line.size() < 7 || line.compare(0, 7, std::string(7, c)) != 0) return false;
    return line.size() == 7 || line[7] == ' ';
}

struct Block {
    std::size_t open, separator, close;
};

std::vector<Block> find_blocks(const std::vector<std::string>& lines, bool& saw_any) {
    std::vector<Block> blocks;
    saw_any = false;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (marker_line(lines[i], '>')) {
            throw Error(ErrorKind::MalformedMarkers, kModule,
                        "line " + std::to_string(i + 1) + ": closing marker without an opening marker");
        }
        if (!marker_line(lines[i], '<')) {
            ++i;
            continue;
        }
        saw_any = true;
        Block b{i, std::string::npos, std::string::npos};
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (marker_line(lines[j], '<')) {
                throw Error(ErrorKind::MalformedMarkers, kModule,
                            "line " + std::to_string(j + 1) + ": nested opening marker");
            }
            if (b.separator == std::string::npos && lines[j] == kMarkerSeparator) {
                b.separator = j;
            } else if (marker_line(lines[j], '>')) {
                if (b.separator == std::string::npos) {
                    throw Error(ErrorKind::MalformedMarkers, kModule,
                                "line " + std::to_string(j + 1) + ": closing marker before separator");
                }
                b.close = j;
                break;
            }
        }
        if (b.close == std::string::npos) {
            throw Error(ErrorKind::MalformedMarkers, kModule,
                        "line " + std::to_string(i + 1) + ": opening marker is never closed");
        }
        blocks.push_back(b);
        i = b.close + 1;
    }
    return blocks;
}

}  // namespace

EditProposal make_proposal(fs::path file, std::string_view file_text, SourceRange range, std::string replacement_text,
                           std::string marker_label) {
    if (util::is_blank(replacement_text)) throw Error(ErrorKind::InvalidArgument, kModule, "replacement is empty");
    const Lines lines(file_text);
    check_range(range, lines.lines.size());
    return EditProposal{std::move(file), range, slice(lines.lines, range), std::move(replacement_text),
                        std::move(marker_label)};
}

std::string apply_with_markers(std::string_view file_text, const EditProposal& proposal) {
    if (util::is_blank(proposal.replacement_text)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "replacement is empty");
    }
    Lines file(file_text);
    check_range(proposal.range, file.lines.size());
    if (slice(file.lines, proposal.range) != proposal.original_text) {
        throw Error(ErrorKind::StaleProposal, kModule,
                    proposal.file.string() + ": lines " + std::to_string(proposal.range.start_line) + "-" +
                        std::to_string(proposal.range.end_line) + " changed since the proposal was made");
    }
    const auto begin = file.lines.begin() + static_cast<std::ptrdiff_t>(proposal.range.start_line - 1);
    const auto end = file.lines.begin() + static_cast<std::ptrdiff_t>(proposal.range.end_line);
    std::vector<std::string> block;
    block.emplace_back(kMarkerOpen);
    block.insert(block.end(), begin, end);
    block.emplace_back(kMarkerSeparator);
    for (auto& l : replacement_lines(proposal.replacement_text)) block.push_back(std::move(l));
    block.push_back(std::string(kMarkerClosePrefix) + proposal.marker_label);
    file.lines.erase(begin, end);
    file.lines.insert(file.lines.begin() + static_cast<std::ptrdiff_t>(proposal.range.start_line - 1), block.begin(),
                      block.end());
    return file.render();
}

bool has_markers(std::string_view file_text) {
    for (const auto& l : util::split_lines(file_text)) {
        if (marker_line(l, '<') || marker_line(l, '>')) return true;
    }
    return false;
}

std::string resolve(std::string_view file_text, Resolution decision) {
    Lines file(file_text);
    bool saw_any = false;
    const auto blocks = find_blocks(file.lines, saw_any);
    if (blocks.empty()) throw Error(ErrorKind::NoMarkers, kModule, "no conflict markers found");
    if (blocks.size() > 1) {
        throw Error(ErrorKind::MultipleBlocks, kModule,
                    std::to_string(blocks.size()) + " marker blocks; resolve them one at a time");
    }
    const Block& b = blocks.front();
    std::vector<std::string> out(file.lines.begin(), file.lines.begin() + static_cast<std::ptrdiff_t>(b.open));
    const std::size_t from = decision == Resolution::Accept ? b.separator + 1 : b.open + 1;
    const std::size_t to = decision == Resolution::Accept ? b.close : b.separator;
    out.insert(out.end(), file.lines.begin() + static_cast<std::ptrdiff_t>(from),
               file.lines.begin() + static_cast<std::ptrdiff_t>(to));
    out.insert(out.end(), file.lines.begin() + static_cast<std::ptrdiff_t>(b.close + 1), file.lines.end());
    file.lines = std::move(out);
    return file.render();
}

SourceRange accepted_range(const EditProposal& proposal) {
    const std::size_t n = std::max<std::size_t>(1, replacement_lines(proposal.replacement_text).size());
    return SourceRange{proposal.range.start_line, proposal.range.start_line + n - 1};
}

std::vector<std::string> verify_braces(std::string_view text, SourceRange range_hint) {
    const auto lines = util::split_lines(text);
    std::vector<std::string> warnings;
    if (lines.empty()) return warnings;
    const std::size_t start = std::clamp<std::size_t>(range_hint.start_line, 1, lines.size());
    const std::size_t end = std::clamp<std::size_t>(range_hint.end_line, start, lines.size());
    const std::string region = slice(lines, SourceRange{start, end});

    std::vector<cpp::Token> stack;
    const auto at = [&](const cpp::Token& t) { return "line " + std::to_string(start + t.line - 1); };
    for (const auto& t : cpp::significant_tokens(region)) {
        if (t.kind != cpp::TokenKind::Punct) continue;
        if (t.is("(") || t.is("[") || t.is("{")) {
            stack.push_back(t);
        } else if (t.is(")") || t.is("]") || t.is("}")) {
            const char want = t.is(")") ? '(' : t.is("]") ? '[' : '{';
            if (!stack.empty() && stack.back().text[0] == want) {
                stack.pop_back();
            } else {
                warnings.push_back(at(t) + ": unmatched '" + std::string(t.text) + "'");
            }
        }
    }
    for (const auto& t : stack) warnings.push_back(at(t) + ": '" + std::string(t.text) + "' is never closed");
    return warnings;
}

fs::path backup_path(const fs::path& file) { return fs::path(file.string() + ".astra.bak"); }

void apply_to_file(const EditProposal& proposal) {
    const std::string text = util::read_file(proposal.file);
    const std::string updated = apply_with_markers(text, proposal);
    const fs::path bak = backup_path(proposal.file);
    std::error_code ec;
    if (!fs::exists(bak, ec)) util::write_file(bak, text);
    util::write_file(proposal.file, updated);
}

void resolve_file(const fs::path& file, Resolution decision) {
    const std::string updated = resolve(util::read_file(file), decision);
    util::write_file(file, updated);
    if (!has_markers(updated)) {
        std::error_code ec;
        fs::remove(backup_path(file), ec);
    }
}

}  // namespace astra
