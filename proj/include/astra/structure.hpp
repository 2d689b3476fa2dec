#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace astra {

/// 1-based inclusive line range.
struct SourceRange {
    std::size_t start_line = 1;
    std::size_t end_line = 1;

    std::size_t line_count() const noexcept { return end_line - start_line + 1; }
    friend bool operator==(const SourceRange&, const SourceRange&) = default;
};

enum class Access { Public, Private, Protected };
std::string_view to_string(Access access);

struct FieldInfo {
    std::string name;
    std::string type_text;
    Access access = Access::Private;

    friend bool operator==(const FieldInfo&, const FieldInfo&) = default;
};

struct MethodInfo {
    std::string name;
    std::string signature_text;
    Access access = Access::Public;
    SourceRange range;  // definition when defined in this file, else declaration
    bool is_definition = false;
    std::string qualifier;        // "A" for an out-of-line `A::f`; empty otherwise
    std::string template_header;  // "template <typename T>" as written, if any
    std::size_t param_count = 0;

    friend bool operator==(const MethodInfo&, const MethodInfo&) = default;
};

enum class ClassKind { Class, Struct };

struct ClassInfo {
    std::string name;  // nested classes are reported as "Outer::Inner"
    ClassKind kind = ClassKind::Class;
    std::vector<FieldInfo> fields;
    std::vector<MethodInfo> methods;
    SourceRange range;
    std::string template_header;

    friend bool operator==(const ClassInfo&, const ClassInfo&) = default;
};

struct StructuralReport {
    std::string file;
    std::vector<ClassInfo> classes;
    std::vector<MethodInfo> free_functions;
    std::vector<std::string> warnings;

    const ClassInfo* find_class(std::string_view name) const;
};

/// Tolerant extraction over a declarative C++ subset: namespaces, classes and
/// structs (one nesting level), access sections, fields, methods, free
/// functions. Never throws on malformed input; problems become warnings.
StructuralReport extract_structure(std::string_view source, std::string path);

/// Unique definition of `fn_name` (inside `class_name` when given). Out-of-line
/// `Class::fn` definitions count as members of Class.
SourceRange find_function_range(const StructuralReport& report, const std::optional<std::string>& class_name,
                                const std::string& fn_name);

struct CompileDbEntry {
    std::string file;       // resolved against `directory` when relative
    std::string directory;
    std::vector<std::string> arguments;
    std::string command;

    /// `arguments`, or `command` split shell-style.
    std::vector<std::string> argv() const;
};

struct CompileDb {
    std::vector<CompileDbEntry> entries;
    std::vector<std::string> warnings;

    const CompileDbEntry* find(const std::filesystem::path& file) const;
};

CompileDb parse_compile_db(std::string_view json_text);
CompileDb load_compile_db(const std::filesystem::path& path);

/// Headers sharing the stem of `source` in the same directory (.H, .h, .hpp, .hh, .hxx).
std::vector<std::filesystem::path> companion_headers(const std::filesystem::path& source);

struct Focus {
    std::optional<std::string> class_name;
    std::string function;
};

/// One paragraph of the AST context: the TARGET FUNCTION block, a class, or
/// the free-function list.
struct AstBlock {
    std::string text;
    bool focused = false;  // never dropped by budget truncation
};

/// Blocks in rendering order. A class block is focused when it is named in
/// `focus_classes`, matches the focus class, or owns the focus function.
std::vector<AstBlock> ast_context_blocks(const std::vector<StructuralReport>& reports,
                                         const std::optional<Focus>& focus,
                                         const std::vector<std::string>& focus_classes = {});

/// Plain-text rendering fed to the prompt. With a focus, the matching
/// function is listed first under "TARGET FUNCTION:"; throws FocusNotFound
/// when nothing matches.
std::string format_ast_context(const StructuralReport& report, const std::optional<Focus>& focus = std::nullopt);

/// Same rendering over several reports (target file first, then companions).
std::string format_ast_context(const std::vector<StructuralReport>& reports,
                               const std::optional<Focus>& focus = std::nullopt);

struct NormalizedFunction {
    std::string text;
    std::vector<std::string> locals;  // original names, in declaration order
    std::vector<std::string> warnings;
};

/// Renames function-local variables to VAR1, VAR2, ... in order of first
/// declaration. Parameters, qualified names, member accesses, type names and
/// anything in `preserve` are left alone. Throws NotAFunction when no
/// parameter list followed by a body is found.
NormalizedFunction normalize_function(std::string_view function_text, const std::vector<std::string>& preserve = {});

std::string normalize_identifiers(std::string_view function_text, const std::vector<std::string>& preserve = {});

}  // namespace astra
