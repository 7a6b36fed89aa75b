#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "test_support.hpp"

using namespace glce;
using glce::testing::abab_slp;
using glce::testing::oracle_expand;

namespace {

errc parse_code(std::string_view text, std::string* message = nullptr) {
    try {
        parse_grammar(text);
    } catch (const error& e) {
        if (message) *message = e.what();
        return e.code();
    }
    ADD_FAILURE() << "expected a parse failure";
    return errc::io;
}

} // namespace

TEST(GrammarIo, WriteThenReadAbab) {
    Slp s = abab_slp();
    Slp back = parse_grammar(format_grammar(s));
    EXPECT_EQ(back.size(), s.size());
    EXPECT_EQ(oracle_expand(back), oracle_expand(s));
    EXPECT_EQ(back.rules, s.rules);
}

TEST(GrammarIo, FileRoundTrip) {
    auto path = std::filesystem::temp_directory_path() / "glce_io_test.slp";
    Slp s = gen_synthetic(Fibonacci{12});
    write_grammar(s, path);
    Slp back = read_grammar(path);
    std::filesystem::remove(path);
    EXPECT_EQ(back.rules, s.rules);
    EXPECT_EQ(back.root, s.root);
}

TEST(GrammarIo, UnknownSymbolReference) {
    EXPECT_EQ(parse_code("SLP 5 4\n0 -> 'a'\n1 -> 'b'\n2 -> 0 1\n3 -> 7 1\n4 -> 3 3\n"), errc::unknown_symbol);
}

TEST(GrammarIo, GarbageLineReportsLineNumber) {
    std::string msg;
    EXPECT_EQ(parse_code("SLP 2 1\n0 -> 'a'\nthis is not a rule\n", &msg), errc::parse_error);
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(GrammarIo, MissingHeader) { EXPECT_EQ(parse_code("0 -> 'a'\n"), errc::parse_error); }

TEST(GrammarIo, BadRoot) { EXPECT_EQ(parse_code("SLP 1 1\n0 -> 'a'\n"), errc::bad_root); }

TEST(GrammarIo, CycleIsRejected) {
    EXPECT_EQ(parse_code("SLP 3 2\n0 -> 'a'\n1 -> 2 0\n2 -> 1 0\n"), errc::cyclic_reference);
}

TEST(GrammarIo, MissingFileIsIoError) {
    try {
        read_grammar(std::filesystem::path("/nonexistent/dir/g.slp"));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::io);
    }
}

TEST(GrammarIo, CommentsEscapesAndUtf8) {
    Slp s = parse_grammar(
        "# leading comment\n"
        "SLP 6 5   # header\n"
        "0 -> '#'\n"
        "1 -> '\\x27'\n"
        "2 -> '\xC3\xA9'   # e acute\n"
        "3 -> '\\u{1F600}'\n"
        "4 -> 0 1\n"
        "5 -> 4 2\n");
    EXPECT_EQ(s.root, 5u);
    Text t = oracle_expand(s);
    EXPECT_EQ(t, (Text{'#', '\'', 0xE9}));
    EXPECT_EQ(s.rules[3].code(), 0x1F600u);
    Slp back = parse_grammar(format_grammar(s));
    EXPECT_EQ(back.rules, s.rules);
}

TEST(GrammarIo, OutOfOrderIdsAreRenumbered) {
    Slp s = parse_grammar("SLP 4 0\n0 -> 1 1\n1 -> 2 3\n2 -> 'a'\n3 -> 'b'\n");
    validate(s);
    EXPECT_EQ(to_string(oracle_expand(s)), "abab");
    // read then write then read is stable once topological
    Slp again = parse_grammar(format_grammar(s));
    EXPECT_EQ(again.rules, s.rules);
}

TEST(GrammarIo, RandomGrammarsRoundTrip) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 60; ++t) {
        Slp s = random_slp(rng, 80, 2 + t % 25, 4000);
        Slp back = parse_grammar(format_grammar(s));
        ASSERT_EQ(back.rules, s.rules);
        ASSERT_EQ(back.root, s.root);
    }
}
