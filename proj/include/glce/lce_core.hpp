#ifndef GLCE_LCE_CORE_HPP
#define GLCE_LCE_CORE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glce/error.hpp"
#include "glce/slp.hpp"

namespace glce {

using index_t = std::uint32_t;

// Prefix doubling with two counting-sort passes per round.
inline std::vector<index_t> suffix_array(std::span<const char_t> text) {
    const std::size_t n = text.size();
    if (n >= std::numeric_limits<index_t>::max()) throw error(errc::too_large, "text too long for 32-bit suffix arrays");
    std::vector<index_t> sa(n), rank(n), tmp(n), second(n);
    if (n == 0) return sa;

    std::vector<char_t> alpha(text.begin(), text.end());
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    for (std::size_t i = 0; i < n; ++i)
        rank[i] = static_cast<index_t>(std::lower_bound(alpha.begin(), alpha.end(), text[i]) - alpha.begin());
    std::size_t classes = alpha.size();

    std::vector<index_t> count;
    auto sort_by_rank = [&](const std::vector<index_t>& order) {
        count.assign(classes + 1, 0);
        for (std::size_t i = 0; i < n; ++i) ++count[rank[i] + 1];
        for (std::size_t c = 1; c <= classes; ++c) count[c] += count[c - 1];
        for (index_t p : order) sa[count[rank[p]]++] = p;
    };

    for (std::size_t i = 0; i < n; ++i) second[i] = static_cast<index_t>(i);
    sort_by_rank(second);
    for (std::size_t h = 1;; h <<= 1) {
        // Order by the second key: suffixes without one first, then by rank of i + h.
        std::size_t k = 0;
        for (std::size_t i = n - std::min(n, h); i < n; ++i) second[k++] = static_cast<index_t>(i);
        for (std::size_t r = 0; r < n; ++r)
            if (sa[r] >= h) second[k++] = static_cast<index_t>(sa[r] - h);
        sort_by_rank(second);
        tmp[sa[0]] = 0;
        for (std::size_t r = 1; r < n; ++r) {
            index_t a = sa[r - 1], b = sa[r];
            bool same = rank[a] == rank[b] && (a + h < n ? rank[a + h] : -1LL) == (b + h < n ? rank[b + h] : -1LL);
            tmp[b] = tmp[a] + (same ? 0 : 1);
        }
        rank.swap(tmp);
        classes = rank[sa[n - 1]] + 1;
        if (classes == n || h >= n) break;
    }
    return sa;
}

// Kasai et al.; lcp[r] is the LCE of suffixes sa[r-1] and sa[r], lcp[0] = 0.
inline std::vector<index_t> lcp_array(std::span<const char_t> text, std::span<const index_t> sa, std::span<const index_t> rank) {
    const std::size_t n = text.size();
    std::vector<index_t> lcp(n, 0);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        std::size_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && text[i + h] == text[j + h]) ++h;
        lcp[rank[i]] = static_cast<index_t>(h);
        if (h > 0) --h;
    }
    return lcp;
}

// Sparse table: O(n log n) words, O(1) queries, leftmost minimum on ties.
class RangeMin {
public:
    RangeMin() = default;

    explicit RangeMin(std::vector<index_t> values) : values_(std::move(values)) {
        const std::size_t n = values_.size();
        levels_ = n == 0 ? 0 : static_cast<std::size_t>(std::bit_width(n));
        table_.resize(levels_ * n);
        for (std::size_t i = 0; i < n; ++i) table_[i] = static_cast<index_t>(i);
        for (std::size_t k = 1; k < levels_; ++k) {
            const std::size_t half = std::size_t{1} << (k - 1);
            const index_t* prev = &table_[(k - 1) * n];
            index_t* cur = &table_[k * n];
            for (std::size_t i = 0; i + (half << 1) <= n; ++i) cur[i] = better(prev[i], prev[i + half]);
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<index_t>& values() const noexcept { return values_; }

    std::size_t argmin(std::size_t l, std::size_t r) const {
        if (l > r || r >= values_.size()) throw error(errc::out_of_range, "range-min query outside the array");
        const std::size_t k = static_cast<std::size_t>(std::bit_width(r - l + 1)) - 1;
        const index_t* row = &table_[k * values_.size()];
        return better(row[l], row[r + 1 - (std::size_t{1} << k)]);
    }

    index_t min(std::size_t l, std::size_t r) const { return values_[argmin(l, r)]; }

    std::size_t bytes() const { return (values_.size() + table_.size()) * sizeof(index_t); }

private:
    index_t better(index_t a, index_t b) const { return values_[b] < values_[a] ? b : a; }

    std::vector<index_t> values_;
    std::vector<index_t> table_;
    std::size_t levels_ = 0;
};

inline std::size_t range_min(std::span<const index_t> arr, std::size_t l, std::size_t r) {
    return RangeMin(std::vector<index_t>(arr.begin(), arr.end())).argmin(l, r);
}

// LCE over an explicit text through suffix array, LCP array and range minima.
class FullLce {
public:
    FullLce() = default;

    explicit FullLce(std::span<const char_t> text) {
        if (text.empty()) throw error(errc::empty_input, "LCE structure needs a non-empty text");
        sa_ = suffix_array(text);
        rank_ = inverse(sa_);
        rmq_ = RangeMin(lcp_array(text, sa_, rank_));
    }

    // Reassembles a structure from a stored suffix array and LCP array.
    FullLce(std::vector<index_t> sa, std::vector<index_t> lcp)
        : sa_(std::move(sa)), rank_(inverse(sa_)), rmq_(std::move(lcp)) {}

    std::size_t size() const noexcept { return sa_.size(); }
    const std::vector<index_t>& sa() const noexcept { return sa_; }
    const std::vector<index_t>& rank() const noexcept { return rank_; }
    const std::vector<index_t>& lcp() const noexcept { return rmq_.values(); }

    pos_t lce(pos_t i, pos_t j) const {
        if (i >= size() || j >= size()) throw error(errc::out_of_range, "LCE position outside the text");
        if (i == j) return size() - i;
        index_t a = rank_[i], b = rank_[j];
        if (a > b) std::swap(a, b);
        return rmq_.min(a + 1, b);
    }

    std::size_t bytes() const { return (sa_.size() + rank_.size()) * sizeof(index_t) + rmq_.bytes(); }

private:
    static std::vector<index_t> inverse(const std::vector<index_t>& sa) {
        std::vector<index_t> r(sa.size());
        for (std::size_t k = 0; k < sa.size(); ++k) r[sa[k]] = static_cast<index_t>(k);
        return r;
    }

    std::vector<index_t> sa_;
    std::vector<index_t> rank_;
    RangeMin rmq_;
};

// LCE restricted to a sampled set of suffixes; space linear in the sample count.
// Samples are addressed either by position (binary search) or by their index
// in the sorted sample set.
class SparseLce {
public:
    SparseLce() = default;

    SparseLce(std::span<const char_t> text, std::vector<pos_t> positions) : text_length_(text.size()) {
        std::sort(positions.begin(), positions.end());
        positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
        if (positions.empty()) throw error(errc::empty_set, "sparse LCE needs at least one sampled position");
        if (positions.back() >= text.size()) throw error(errc::out_of_range, "sampled position outside the text");
        positions_ = std::move(positions);

        // Filter a full suffix array down to the samples; the LCP of two
        // consecutive samples is the minimum full LCP between them.
        auto sa = suffix_array(text);
        std::vector<index_t> rank(sa.size());
        for (std::size_t k = 0; k < sa.size(); ++k) rank[sa[k]] = static_cast<index_t>(k);
        auto lcp = lcp_array(text, sa, rank);

        std::vector<index_t> sample_of(text.size(), std::numeric_limits<index_t>::max());
        for (std::size_t s = 0; s < positions_.size(); ++s) sample_of[positions_[s]] = static_cast<index_t>(s);

        order_.reserve(positions_.size());
        std::vector<index_t> slcp;
        slcp.reserve(positions_.size());
        index_t run = std::numeric_limits<index_t>::max();
        for (std::size_t r = 0; r < sa.size(); ++r) {
            if (r > 0) run = std::min(run, lcp[r]);
            index_t s = sample_of[sa[r]];
            if (s == std::numeric_limits<index_t>::max()) continue;
            slcp.push_back(order_.empty() ? 0 : run);
            order_.push_back(s);
            run = std::numeric_limits<index_t>::max();
        }
        finish(std::move(slcp));
    }

    // Reassembles from stored parts: samples, their suffix order, sampled LCP.
    SparseLce(pos_t text_length, std::vector<pos_t> positions, std::vector<index_t> order, std::vector<index_t> slcp)
        : text_length_(text_length), positions_(std::move(positions)), order_(std::move(order)) {
        finish(std::move(slcp));
    }

    std::size_t sample_count() const noexcept { return positions_.size(); }
    pos_t text_length() const noexcept { return text_length_; }
    const std::vector<pos_t>& positions() const noexcept { return positions_; }
    // order()[r] is the sample index of the r-th smallest sampled suffix.
    const std::vector<index_t>& order() const noexcept { return order_; }
    const std::vector<index_t>& sampled_lcp() const noexcept { return rmq_.values(); }

    std::optional<std::size_t> index_of(pos_t pos) const {
        auto it = std::lower_bound(positions_.begin(), positions_.end(), pos);
        if (it == positions_.end() || *it != pos) return std::nullopt;
        return static_cast<std::size_t>(it - positions_.begin());
    }

    pos_t lce(pos_t i, pos_t j) const {
        auto a = index_of(i), b = index_of(j);
        if (!a || !b) throw error(errc::unsampled_position, "position " + std::to_string(a ? j : i) + " is not sampled");
        return lce_by_index(*a, *b);
    }

    pos_t lce_by_index(std::size_t a, std::size_t b) const {
        if (a == b) return text_length_ - positions_[a];
        index_t ra = rank_[a], rb = rank_[b];
        if (ra > rb) std::swap(ra, rb);
        return rmq_.min(ra + 1, rb);
    }

    std::size_t bytes() const {
        return positions_.size() * sizeof(pos_t) + (order_.size() + rank_.size()) * sizeof(index_t) + rmq_.bytes();
    }

private:
    void finish(std::vector<index_t> slcp) {
        rank_.assign(order_.size(), 0);
        for (std::size_t r = 0; r < order_.size(); ++r) rank_[order_[r]] = static_cast<index_t>(r);
        rmq_ = RangeMin(std::move(slcp));
    }

    pos_t text_length_ = 0;
    std::vector<pos_t> positions_;
    std::vector<index_t> order_;
    std::vector<index_t> rank_;
    RangeMin rmq_;
};

} // namespace glce

#endif
