#include "astra/util.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace astra;

TEST(Util, TrimAndBlank) {
    EXPECT_EQ(util::trim("  a b \t\n"), "a b");
    EXPECT_TRUE(util::is_blank(" \n\t "));
    EXPECT_FALSE(util::is_blank(" x "));
    EXPECT_EQ(util::to_lower_ascii("MultiFab ÄB"), "multifab Äb");
}

TEST(Util, SplitLinesDropsTrailingEmpty) {
    EXPECT_EQ(util::split_lines("a\nb\n"), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(util::split_lines("a\n\nb"), (std::vector<std::string>{"a", "", "b"}));
    EXPECT_TRUE(util::split_lines("").empty());
}

TEST(Util, TrimBlankLines) {
    EXPECT_EQ(util::trim_blank_lines("\n  \nx\n\ny\n \n"), "x\n\ny");
}

TEST(Util, Sha256KnownVector) {
    EXPECT_EQ(util::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Util, FixedAndWidth) {
    EXPECT_EQ(util::fixed(0.125, 2), "0.12");
    EXPECT_EQ(util::fixed(1.0, 4), "1.0000");
    EXPECT_EQ(util::display_width("a–b"), 3u);
}

TEST(Util, ContainsWord) {
    EXPECT_TRUE(util::contains_word("class FieldSolver here", "FieldSolver"));
    EXPECT_FALSE(util::contains_word("FieldSolvers", "FieldSolver"));
    EXPECT_FALSE(util::contains_word("fieldsolver", "FieldSolver"));
}

TEST(Util, ReadMissingFileIsUnreadable) {
    EXPECT_EQ(fixtures::error_kind([] { util::read_file("/nonexistent/astra/file"); }), ErrorKind::Unreadable);
}

TEST(Util, WriteThenRead) {
    fixtures::TempDir tmp;
    util::write_file(tmp / "x.txt", "hello\n");
    EXPECT_EQ(util::read_file(tmp / "x.txt"), "hello\n");
}
