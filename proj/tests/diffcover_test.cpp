#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_support.hpp"

using namespace glce;

namespace {

errc build_code(pos_t tau) {
    try {
        DifferenceCover dc(tau);
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected failure for tau " << tau;
    return errc::io;
}

} // namespace

TEST(DifferenceCover, Sixteen) {
    DifferenceCover dc(16);
    EXPECT_EQ(dc.elements(), (std::vector<pos_t>{0, 1, 2, 3, 4, 8, 12}));
    EXPECT_EQ(dc.size(), 7u);
    EXPECT_EQ(dc.root(), 4u);
}

TEST(DifferenceCover, Four) {
    DifferenceCover dc(4);
    EXPECT_EQ(dc.elements(), (std::vector<pos_t>{0, 1, 2}));
}

TEST(DifferenceCover, RejectsBadTau) {
    EXPECT_EQ(build_code(10), errc::not_perfect_square);
    EXPECT_EQ(build_code(17), errc::not_perfect_square);
    EXPECT_EQ(build_code(1), errc::too_small);
    EXPECT_EQ(build_code(0), errc::too_small);
    EXPECT_EQ(build_code(3), errc::too_small);
}

TEST(CoverPair, Examples) {
    DifferenceCover nine(9);
    EXPECT_EQ(nine.cover_pair(0), (std::pair<pos_t, pos_t>{0, 0}));
    EXPECT_EQ(nine.cover_pair(5), (std::pair<pos_t, pos_t>{1, 6}));
    DifferenceCover sixteen(16);
    EXPECT_EQ(sixteen.cover_pair(15), (std::pair<pos_t, pos_t>{1, 0}));
    try {
        sixteen.cover_pair(16);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::out_of_range);
    }
}

TEST(Align, Examples) {
    DifferenceCover nine(9);
    EXPECT_EQ(nine.align(10, 23), (std::pair<pos_t, pos_t>{11, 24}));
    EXPECT_EQ(nine.align(2, 2), (std::pair<pos_t, pos_t>{9, 9}));
}

TEST(IsSampled, Examples) {
    DifferenceCover dc(16);
    EXPECT_TRUE(dc.is_sampled(20));
    EXPECT_FALSE(dc.is_sampled(23));
    for (pos_t tau : {4, 9, 16, 100, 10000}) EXPECT_TRUE(DifferenceCover(tau).is_sampled(0));
}

TEST(SquareAtMost, RoundsDown) {
    EXPECT_EQ(DifferenceCover::square_at_most(2), 4u);
    EXPECT_EQ(DifferenceCover::square_at_most(8), 4u);
    EXPECT_EQ(DifferenceCover::square_at_most(9), 9u);
    EXPECT_EQ(DifferenceCover::square_at_most(63), 49u);
    EXPECT_EQ(DifferenceCover::square_at_most(64), 64u);
    EXPECT_EQ(DifferenceCover::square_at_most(1000000007), 999950884u);
}

// Exhaustive over every square tau up to 10^4, against a brute-force set of
// realizable differences.
TEST(DifferenceCover, ExhaustiveCoverage) {
    for (pos_t s = 2; s * s <= 10000; ++s) {
        const pos_t tau = s * s;
        DifferenceCover dc(tau);
        ASSERT_EQ(dc.size(), 2 * s - 1) << tau;
        std::set<pos_t> expect;
        for (pos_t i = 0; i < s; ++i) expect.insert(i);
        for (pos_t i = 1; i <= s; ++i) expect.insert((i * s) % tau);
        ASSERT_EQ(std::vector<pos_t>(expect.begin(), expect.end()), dc.elements());
        std::vector<char> member(tau, 0);
        for (pos_t e : dc.elements()) member[e] = 1;
        for (pos_t d = 0; d < tau; ++d) {
            auto [a, b] = dc.cover_pair(d);
            ASSERT_TRUE(a < tau && member[a]) << tau << ' ' << d;
            ASSERT_TRUE(b < tau && member[b]) << tau << ' ' << d;
            ASSERT_EQ((b + tau - a) % tau, d) << tau;
        }
    }
}

TEST(Align, ShiftIsSampledAndBounded) {
    std::mt19937_64 rng(61);
    for (pos_t tau : {4, 9, 16, 25, 49, 100, 1024}) {
        DifferenceCover dc(tau);
        std::uniform_int_distribution<pos_t> pos(0, 100000);
        for (int q = 0; q < 20000; ++q) {
            pos_t i = pos(rng), j = pos(rng);
            auto [ii, jj] = dc.align(i, j);
            ASSERT_GT(ii, i);
            ASSERT_GT(jj, j);
            ASSERT_EQ(ii - i, jj - j);
            ASSERT_LE(ii - i, tau);
            ASSERT_TRUE(dc.is_sampled(ii));
            ASSERT_TRUE(dc.is_sampled(jj));
        }
    }
}

TEST(Samples, IndexIsDenseRank) {
    for (pos_t tau : {4, 9, 16, 36}) {
        DifferenceCover dc(tau);
        for (pos_t len : {pos_t{1}, pos_t{5}, tau, 3 * tau + 2, pos_t{500}}) {
            auto p = dc.samples(len, 7);
            ASSERT_EQ(p.size(), dc.sample_count(len));
            std::size_t r = 0;
            for (pos_t x = 0; x < len; ++x) {
                if (!dc.is_sampled(x)) continue;
                ASSERT_EQ(p[r], x + 7);
                ASSERT_EQ(dc.sample_index(x), r);
                ++r;
            }
            ASSERT_EQ(r, p.size());
        }
    }
}
