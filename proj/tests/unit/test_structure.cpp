#include "astra/error.hpp"
#include "astra/structure.hpp"
#include "astra/util.hpp"
#include "structure_expect.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <random>

namespace fs = std::filesystem;
using namespace astra;

namespace {

fs::path fixture_dir() { return fs::path(ASTRA_FIXTURES) / "structure"; }

StructuralReport extract_file(const fs::path& p) { return extract_structure(util::read_file(p), p.string()); }

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InvalidArgument;
}

}  // namespace

class StructureFixture : public ::testing::TestWithParam<std::string> {};

TEST_P(StructureFixture, MatchesExpectation) {
    const auto src = fixture_dir() / (GetParam() + ".cpp");
    const auto expected = nlohmann::json::parse(util::read_file(fixture_dir() / (GetParam() + ".expected.json")));
    const auto report = extract_file(src);
    EXPECT_EQ(fixtures::structure_diff(report, expected), "");
}

INSTANTIATE_TEST_SUITE_P(Fixtures, StructureFixture,
                         ::testing::Values("01_default_access", "02_access_sections", "03_out_of_line",
                                           "04_templates", "05_namespaces", "06_nested_and_skipped",
                                           "07_special_members", "08_preprocessor", "09_field_forms",
                                           "10_solver"));

TEST(Structure, DefaultAccess) {
    const auto r = extract_structure("class A { int x; public: void f(); };\n", "a.cpp");
    ASSERT_EQ(r.classes.size(), 1u);
    const auto& a = r.classes[0];
    ASSERT_EQ(a.fields.size(), 1u);
    EXPECT_EQ(a.fields[0].type_text, "int");
    EXPECT_EQ(a.fields[0].access, Access::Private);
    ASSERT_EQ(a.methods.size(), 1u);
    EXPECT_EQ(a.methods[0].name, "f");
    EXPECT_EQ(a.methods[0].access, Access::Public);
    EXPECT_FALSE(a.methods[0].is_definition);
    const auto b = extract_structure("struct B { double y; };\n", "b.cpp");
    EXPECT_EQ(b.classes.at(0).fields.at(0).access, Access::Public);
}

TEST(Structure, OutOfLineRangeFromFixture) {
    const auto r = extract_file(fixture_dir() / "03_out_of_line.cpp");
    EXPECT_EQ(find_function_range(r, std::string("FieldSolver"), "init"), (SourceRange{12, 19}));
    EXPECT_EQ(find_function_range(r, std::nullopt, "init"), (SourceRange{12, 19}));
    EXPECT_EQ(find_function_range(r, std::nullopt, "helper"), (SourceRange{23, 27}));
}

TEST(Structure, FindFunctionErrors) {
    const auto r = extract_file(fixture_dir() / "03_out_of_line.cpp");
    EXPECT_EQ(kind_of([&] { find_function_range(r, std::string("FieldSolver"), "advance"); }),
              ErrorKind::NotADefinition);
    EXPECT_EQ(kind_of([&] { find_function_range(r, std::nullopt, "missing"); }), ErrorKind::NotFound);
    EXPECT_EQ(kind_of([&] { find_function_range(r, std::string("Nope"), "init"); }), ErrorKind::NotFound);

    const auto o = extract_structure("int f(int a) { return a; }\n\ndouble f(double a)\n{\n    return a;\n}\n", "o.cpp");
    std::string msg;
    try {
        find_function_range(o, std::nullopt, "f");
        ADD_FAILURE() << "expected Ambiguous";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Ambiguous);
        msg = e.what();
    }
    EXPECT_NE(msg.find("lines 1–1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("lines 3–6"), std::string::npos) << msg;
}

TEST(Structure, Warnings) {
    const auto r = extract_structure("class A {\n  int x;\n  void f() {\n", "bad.cpp");
    bool unbalanced = false;
    for (const auto& w : r.warnings) unbalanced = unbalanced || w.find("UnbalancedBraces") != std::string::npos;
    EXPECT_TRUE(unbalanced);
    const auto m = extract_structure("AMREX_REGISTER_THING(foo);\nint g() { return 1; }\n", "m.cpp");
    ASSERT_EQ(m.free_functions.size(), 1u);
    EXPECT_EQ(m.free_functions[0].name, "g");
    EXPECT_FALSE(m.warnings.empty());
}

TEST(Structure, TotalOnArbitraryText) {
    std::mt19937 rng(11);
    const std::string alphabet = "{}()[];:<>=,*&~ \n\tclass struct int x y operator template \"'/#";
    for (int n = 0; n < 300; ++n) {
        std::string text;
        const int len = static_cast<int>(rng() % 200);
        for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
        EXPECT_NO_THROW(extract_structure(text, "fuzz.cpp"));
    }
}

TEST(Structure, DefinitionRangesAreSound) {
    for (const auto& entry : fs::directory_iterator(fixture_dir())) {
        if (entry.path().extension() != ".cpp") continue;
        const auto text = util::read_file(entry.path());
        const auto lines = util::split_lines(text);
        const auto report = extract_structure(text, entry.path().string());
        std::vector<MethodInfo> defs = report.free_functions;
        for (const auto& c : report.classes) defs.insert(defs.end(), c.methods.begin(), c.methods.end());
        for (const auto& m : defs) {
            if (!m.is_definition) continue;
            std::string slice;
            for (std::size_t l = m.range.start_line; l <= m.range.end_line; ++l) slice += lines.at(l - 1) + "\n";
            const auto short_name = m.name.substr(m.name.rfind(':') == std::string::npos ? 0 : m.name.rfind(':') + 1);
            EXPECT_NE(slice.find(short_name), std::string::npos) << entry.path() << " " << m.name;
            const auto open = std::count(slice.begin(), slice.end(), '{');
            EXPECT_EQ(open, std::count(slice.begin(), slice.end(), '}')) << entry.path() << " " << m.name;
        }
    }
}

TEST(AstFormat, EmptyReport) {
    EXPECT_EQ(format_ast_context(extract_structure("", "e.cpp")), "");
}

TEST(AstFormat, OneClassGolden) {
    const auto r = extract_structure("struct B { double y; };\n", "b.cpp");
    EXPECT_EQ(format_ast_context(r), util::read_file(fs::path(ASTRA_FIXTURES) / "golden" / "ast_one_class.txt"));
}

TEST(AstFormat, FocusComesFirst) {
    const auto r = extract_file(fixture_dir() / "03_out_of_line.cpp");
    const auto text = format_ast_context(r, Focus{std::string("FieldSolver"), "init"});
    EXPECT_EQ(text.rfind("TARGET FUNCTION:\n  void init (int n) (lines 12–19)\n\nclass FieldSolver (lines 3–10)", 0), 0u)
        << text;
    EXPECT_EQ(kind_of([&] { format_ast_context(r, Focus{std::nullopt, "nothing"}); }), ErrorKind::FocusNotFound);
}

TEST(AstFormat, BlocksMarkFocus) {
    const auto r = extract_file(fixture_dir() / "06_nested_and_skipped.cpp");
    const auto blocks = ast_context_blocks({r}, Focus{std::string("Mesh"), "coarsest"});
    ASSERT_EQ(blocks.size(), 3u);
    EXPECT_TRUE(blocks[0].focused);
    EXPECT_TRUE(blocks[1].focused);
    EXPECT_FALSE(blocks[2].focused);
}
