#include "astra/structure.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace astra;

TEST(CompileDb, EmptyArray) {
    const auto db = parse_compile_db("[]");
    EXPECT_TRUE(db.entries.empty());
    EXPECT_TRUE(db.warnings.empty());
}

TEST(CompileDb, DuplicateFileKeepsFirst) {
    const auto db = parse_compile_db(R"([
      {"directory": "/w", "file": "a.cpp", "command": "c++ -O2 -c a.cpp"},
      {"directory": "/w", "file": "/w/a.cpp", "command": "c++ -O0 -c a.cpp"}])");
    ASSERT_EQ(db.entries.size(), 1u);
    EXPECT_EQ(db.warnings.size(), 1u);
    EXPECT_EQ(db.entries[0].argv(), (std::vector<std::string>{"c++", "-O2", "-c", "a.cpp"}));
}

TEST(CompileDb, FixtureWithThreeUnits) {
    const auto db = load_compile_db(fixtures::dir("compile_db/compile_commands.json"));
    ASSERT_EQ(db.entries.size(), 3u);
    EXPECT_EQ(db.entries[0].file, "/work/src/main.cpp");
    EXPECT_EQ(db.entries[1].file, "/work/src/amr/Level.cpp");
    EXPECT_EQ(db.entries[2].file, "/work/src/util.cpp");
    EXPECT_EQ(db.warnings.size(), 2u);
    EXPECT_EQ(db.entries[1].argv(), (std::vector<std::string>{"c++", "-DAMREX_SPACEDIM=3", "-I/work/src/amr dir", "-c",
                                                               "/work/src/amr/Level.cpp"}));
    ASSERT_NE(db.find("/work/build/../src/util.cpp"), nullptr);
    EXPECT_EQ(db.find("/work/src/other.cpp"), nullptr);
}

TEST(CompileDb, Errors) {
    EXPECT_EQ(fixtures::error_kind([] { parse_compile_db("{}"); }), ErrorKind::NotAnArray);
    EXPECT_EQ(fixtures::error_kind([] { parse_compile_db("not json"); }), ErrorKind::NotAnArray);
    EXPECT_EQ(fixtures::error_kind([] { load_compile_db("/nonexistent/compile_commands.json"); }),
              ErrorKind::Unreadable);
}

TEST(CompileDb, CompanionHeaders) {
    const auto headers = companion_headers(fixtures::dir("compile_db/src/amr/Level.cpp"));
    ASSERT_EQ(headers.size(), 1u);
    EXPECT_EQ(headers[0].filename(), "Level.H");
    EXPECT_TRUE(companion_headers(fixtures::dir("compile_db/src/util.cpp")).empty());
}
