#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_support.hpp"

using namespace glce;
using glce::testing::oracle_lce;

namespace {

// Suffix array by comparison sort of whole suffixes.
std::vector<index_t> oracle_sa(const Text& t) {
    std::vector<index_t> sa(t.size());
    std::iota(sa.begin(), sa.end(), 0);
    std::sort(sa.begin(), sa.end(), [&](index_t a, index_t b) {
        return std::lexicographical_compare(t.begin() + a, t.end(), t.begin() + b, t.end());
    });
    return sa;
}

std::size_t scan_min(const std::vector<index_t>& a, std::size_t l, std::size_t r) {
    std::size_t best = l;
    for (std::size_t i = l + 1; i <= r; ++i)
        if (a[i] < a[best]) best = i;
    return best;
}

template <class F>
errc code_of(F&& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected glce::error";
    return errc::io;
}

} // namespace

TEST(SuffixArray, Banana) {
    EXPECT_EQ(suffix_array(to_text("banana")), (std::vector<index_t>{5, 3, 1, 0, 4, 2}));
}

TEST(SuffixArray, UnaryLcp) {
    FullLce f(to_text("aaa"));
    EXPECT_EQ(f.sa(), (std::vector<index_t>{2, 1, 0}));
    // "a" vs "aa", then "aa" vs "aaa"
    EXPECT_EQ(f.lcp()[1], 1u);
    EXPECT_EQ(f.lcp()[2], 2u);
}

TEST(SuffixArray, SingleCharacter) {
    FullLce f(to_text("x"));
    EXPECT_EQ(f.sa(), (std::vector<index_t>{0}));
    EXPECT_EQ(f.lce(0, 0), 1u);
}

TEST(SuffixArray, EmptyInput) {
    EXPECT_EQ(code_of([] { FullLce f(Text{}); }), errc::empty_input);
}

TEST(SuffixArray, MatchesComparisonSort) {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 300; ++t) {
        unsigned sigma = t % 3 == 0 ? 1 : t % 3 == 1 ? 2 : 26;
        Text x = t % 2 ? glce::testing::random_text(rng, 1 + rng() % 300, sigma)
                       : glce::testing::repetitive_text(rng, 1 + rng() % 300, 1 + rng() % 20, sigma, 0.05);
        auto sa = suffix_array(x);
        ASSERT_EQ(sa, oracle_sa(x));
        std::vector<index_t> rank(sa.size());
        for (std::size_t k = 0; k < sa.size(); ++k) rank[sa[k]] = static_cast<index_t>(k);
        auto lcp = lcp_array(x, sa, rank);
        for (std::size_t k = 1; k < sa.size(); ++k) ASSERT_EQ(lcp[k], oracle_lce(x, sa[k - 1], sa[k]));
    }
}

TEST(FullLce, Examples) {
    FullLce f(to_text("banana"));
    EXPECT_EQ(f.lce(1, 3), 3u);
    for (pos_t i = 0; i < 6; ++i) EXPECT_EQ(f.lce(i, i), 6 - i);
    EXPECT_EQ(FullLce(to_text("abab")).lce(0, 2), 2u);
    EXPECT_EQ(code_of([&] { f.lce(0, 6); }), errc::out_of_range);
}

TEST(FullLce, ExhaustiveOnSmallTexts) {
    std::mt19937_64 rng(72);
    const unsigned sigmas[] = {1, 2, 26};
    for (int t = 0; t < 12; ++t) {
        std::size_t n = t < 3 ? 2000 : 1 + rng() % 400;
        Text x = t % 2 ? glce::testing::random_text(rng, n, sigmas[t % 3])
                       : glce::testing::repetitive_text(rng, n, 1 + rng() % 50, sigmas[t % 3], 0.02);
        FullLce f(x);
        glce::testing::LceTable table(x);
        for (pos_t i = 0; i < n; ++i)
            for (pos_t j = 0; j < n; ++j) ASSERT_EQ(f.lce(i, j), table(i, j)) << i << ' ' << j;
    }
}

TEST(FullLce, SampledOnLongerTexts) {
    std::mt19937_64 rng(73);
    for (unsigned sigma : {1u, 2u, 26u}) {
        Text x = glce::testing::repetitive_text(rng, 50000, 700, sigma, 0.002);
        FullLce f(x);
        std::uniform_int_distribution<pos_t> at(0, x.size() - 1);
        for (int q = 0; q < 10000; ++q) {
            pos_t i = at(rng), j = at(rng);
            ASSERT_EQ(f.lce(i, j), oracle_lce(x, i, j));
        }
    }
}

TEST(FullLce, SeparatorsCompareByCode) {
    // Codes far above the letters act as unique separators.
    Text x = to_text("abab");
    x.push_back(1000);
    Text y = to_text("abab");
    x.insert(x.end(), y.begin(), y.end());
    x.push_back(1001);
    x.insert(x.end(), y.begin(), y.end());
    FullLce f(x);
    EXPECT_EQ(f.lce(0, 5), 4u);
    EXPECT_EQ(f.lce(0, 10), 4u);
    EXPECT_EQ(f.lce(4, 9), 0u);
    for (pos_t i = 0; i < x.size(); ++i)
        for (pos_t j = 0; j < x.size(); ++j) ASSERT_EQ(f.lce(i, j), oracle_lce(x, i, j));
}

TEST(SparseLce, Example) {
    SparseLce s(to_text("abcabd"), {0, 3});
    // "abcabd" < "abd"
    EXPECT_EQ(s.order(), (std::vector<index_t>{0, 1}));
    EXPECT_EQ(s.sampled_lcp()[1], 2u);
    EXPECT_EQ(s.lce(0, 3), 2u);
    EXPECT_EQ(s.lce(0, 0), 6u);
    EXPECT_EQ(code_of([&] { s.lce(1, 3); }), errc::unsampled_position);
}

TEST(SparseLce, SingleSample) {
    SparseLce s(to_text("abcabd"), {0});
    EXPECT_EQ(s.lce(0, 0), 6u);
    EXPECT_EQ(code_of([&] { s.lce(0, 1); }), errc::unsampled_position);
}

TEST(SparseLce, ConstructionErrors) {
    EXPECT_EQ(code_of([] { SparseLce s(to_text("abc"), {}); }), errc::empty_set);
    EXPECT_EQ(code_of([] { SparseLce s(to_text("abc"), {0, 3}); }), errc::out_of_range);
}

TEST(SparseLce, AllPositionsBehavesLikeFull) {
    std::mt19937_64 rng(74);
    Text x = glce::testing::repetitive_text(rng, 500, 30, 2, 0.05);
    std::vector<pos_t> all(x.size());
    std::iota(all.begin(), all.end(), 0);
    SparseLce s(x, all);
    FullLce f(x);
    for (pos_t i = 0; i < x.size(); ++i)
        for (pos_t j = 0; j < x.size(); j += 3) ASSERT_EQ(s.lce(i, j), f.lce(i, j));
}

TEST(SparseLce, RandomInstances) {
    std::mt19937_64 rng(75);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = 1 + rng() % 300;
        Text x = t % 2 ? glce::testing::random_text(rng, n, 1 + t % 4)
                       : glce::testing::repetitive_text(rng, n, 1 + rng() % 20, 2, 0.05);
        std::vector<pos_t> p;
        double keep = std::uniform_real_distribution<>(0.02, 0.8)(rng);
        for (pos_t i = 0; i < n; ++i)
            if (std::bernoulli_distribution(keep)(rng)) p.push_back(i);
        if (p.empty()) p.push_back(rng() % n);
        SparseLce s(x, p);
        ASSERT_EQ(s.sample_count(), p.size());
        // order consistent with lexicographic order of the sampled suffixes
        for (std::size_t r = 1; r < p.size(); ++r) {
            pos_t a = p[s.order()[r - 1]], b = p[s.order()[r]];
            ASSERT_TRUE(std::lexicographical_compare(x.begin() + a, x.end(), x.begin() + b, x.end()));
            ASSERT_EQ(s.sampled_lcp()[r], oracle_lce(x, a, b));
        }
        for (pos_t a : p)
            for (pos_t b : p) ASSERT_EQ(s.lce(a, b), oracle_lce(x, a, b));
    }
}

TEST(RangeMin, Examples) {
    std::vector<index_t> a{3, 1, 2};
    EXPECT_EQ(range_min(a, 0, 2), 1u);
    for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(range_min(a, t, t), t);
    std::vector<index_t> tie{2, 1, 1};
    EXPECT_EQ(range_min(tie, 0, 2), 1u);
    EXPECT_EQ(code_of([&] { range_min(a, 2, 1); }), errc::out_of_range);
    EXPECT_EQ(code_of([&] { range_min(a, 0, 3); }), errc::out_of_range);
}

TEST(RangeMin, MatchesLinearScan) {
    std::mt19937_64 rng(76);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + rng() % 200;
        std::vector<index_t> a(n);
        for (auto& v : a) v = static_cast<index_t>(rng() % (t % 2 ? 4 : 1000));
        RangeMin rm(a);
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t r = l; r < n; ++r) ASSERT_EQ(rm.argmin(l, r), scan_min(a, l, r));
    }
}
