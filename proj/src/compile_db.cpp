#include "astra/structure.hpp"

#include "astra/error.hpp"
#include "astra/util.hpp"

#include <json.hpp>

#include <set>

namespace astra {

namespace fs = std::filesystem;

namespace {

const char* kModule = "structure_extractor";

/// POSIX-shell style word splitting: single quotes, double quotes, backslash escapes.
std::vector<std::string> shell_split(const std::string& command) {
    std::vector<std::string> words;
    std::string cur;
    bool have = false;
    char quote = 0;
    for (std::size_t i = 0; i < command.size(); ++i) {
        const char c = command[i];
        if (quote == '\'') {
            if (c == '\'') quote = 0;
            else cur += c;
        } else if (quote == '"') {
            if (c == '"') {
                quote = 0;
            } else if (c == '\\' && i + 1 < command.size() &&
                       (command[i + 1] == '"' || command[i + 1] == '\\' || command[i + 1] == '$')) {
                cur += command[++i];
            } else {
                cur += c;
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
            have = true;
        } else if (c == '\\' && i + 1 < command.size()) {
            cur += command[++i];
            have = true;
        } else if (c == ' ' || c == '\t' || c == '\n') {
            if (have) words.push_back(cur);
            cur.clear();
            have = false;
        } else {
            cur += c;
            have = true;
        }
    }
    if (have) words.push_back(cur);
    return words;
}

std::string normal_key(const fs::path& p) {
    std::error_code ec;
    auto canon = fs::weakly_canonical(p, ec);
    return (ec ? p.lexically_normal() : canon).string();
}

}  // namespace

std::vector<std::string> CompileDbEntry::argv() const {
    if (!arguments.empty()) return arguments;
    return shell_split(command);
}

const CompileDbEntry* CompileDb::find(const fs::path& file) const {
    const std::string key = normal_key(file);
    for (const auto& e : entries) {
        if (normal_key(e.file) == key) return &e;
    }
    return nullptr;
}

CompileDb parse_compile_db(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::NotAnArray, kModule, std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw Error(ErrorKind::NotAnArray, kModule, "compile database must be a JSON array");

    CompileDb db;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& obj = doc[i];
        const std::string where = "entry " + std::to_string(i);
        if (!obj.is_object()) {
            db.warnings.push_back(where + ": not an object, skipped");
            continue;
        }
        if (!obj.contains("file") || !obj["file"].is_string() || obj["file"].get<std::string>().empty()) {
            db.warnings.push_back(where + ": missing \"file\", skipped");
            continue;
        }
        CompileDbEntry entry;
        entry.directory = obj.value("directory", std::string{});
        if (obj.contains("arguments") && obj["arguments"].is_array()) {
            for (const auto& a : obj["arguments"]) {
                if (a.is_string()) entry.arguments.push_back(a.get<std::string>());
            }
        }
        if (obj.contains("command") && obj["command"].is_string()) entry.command = obj["command"].get<std::string>();
        if (entry.arguments.empty() && entry.command.empty()) {
            db.warnings.push_back(where + ": neither \"arguments\" nor \"command\", skipped");
            continue;
        }
        fs::path file = obj["file"].get<std::string>();
        if (file.is_relative() && !entry.directory.empty()) file = fs::path(entry.directory) / file;
        entry.file = file.lexically_normal().string();
        if (!seen.insert(normal_key(entry.file)).second) {
            db.warnings.push_back(where + ": duplicate file " + entry.file + ", keeping the first entry");
            continue;
        }
        db.entries.push_back(std::move(entry));
    }
    return db;
}

CompileDb load_compile_db(const fs::path& path) {
    std::string text;
    try {
        text = util::read_file(path);
    } catch (const Error& e) {
        throw Error(ErrorKind::Unreadable, kModule, e.detail());
    }
    return parse_compile_db(text);
}

std::vector<fs::path> companion_headers(const fs::path& source) {
    std::vector<fs::path> out;
    std::set<std::string> seen;
    for (const char* ext : {".H", ".h", ".hpp", ".hh", ".hxx"}) {
        fs::path candidate = source;
        candidate.replace_extension(ext);
        if (candidate == source) continue;
        std::error_code ec;
        if (!fs::is_regular_file(candidate, ec)) continue;
        if (seen.insert(normal_key(candidate)).second) out.push_back(candidate);
    }
    return out;
}

}  // namespace astra
