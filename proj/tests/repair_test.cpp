#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace glce;
using glce::testing::oracle_expand;

TEST(Repair, SingleCharacterIsOneTerminal) {
    Slp s = build_grammar(std::string_view("a"));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_TRUE(s.rules[0].is_terminal());
    EXPECT_EQ(s.rules[0].code(), char_t('a'));
}

TEST(Repair, AbabRoundTrips) {
    Slp s = build_grammar(std::string_view("abab"));
    EXPECT_EQ(to_string(oracle_expand(s)), "abab");
    validate(s);
}

TEST(Repair, UnaryRunIsLogarithmic) {
    Slp s = build_grammar(std::string_view("aaaaaaaa"));
    EXPECT_EQ(to_string(oracle_expand(s)), "aaaaaaaa");
    // a, aa, aaaa, aaaaaaaa
    EXPECT_LE(s.size(), 4u);
    Slp big = build_grammar(Text(1 << 16, 'a'));
    EXPECT_EQ(big.length(), pos_t{1} << 16);
    EXPECT_LE(big.size(), 20u);
}

TEST(Repair, EmptyInputIsRejected) {
    try {
        build_grammar(std::string_view(""));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::empty_input);
    }
}

TEST(Repair, WideCodesSurvive) {
    Text t = {0x10FFFF, 7, 0x10FFFF, 7, 300, 0x10FFFF, 7};
    EXPECT_EQ(oracle_expand(build_grammar(t)), t);
}

TEST(Repair, RandomStringsRoundTrip) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> len(1, 10000);
    const unsigned sigmas[] = {2, 4, 26};
    for (int t = 0; t < 1000; ++t) {
        // Mostly short strings keep the suite quick; every tenth one is long.
        std::size_t n = t % 10 == 0 ? len(rng) : 1 + len(rng) % 400;
        Text x = glce::testing::random_text(rng, n, sigmas[t % 3]);
        Slp s = build_grammar(x);
        validate(s);
        ASSERT_EQ(oracle_expand(s), x) << t;
    }
}

TEST(Repair, RepetitiveTextCompresses) {
    std::mt19937_64 rng(22);
    Text x = glce::testing::repetitive_text(rng, 100000, 1000, 4, 0.001);
    Slp s = build_grammar(x);
    EXPECT_EQ(oracle_expand(s), x);
    EXPECT_LT(s.size(), x.size() / 20);
}
