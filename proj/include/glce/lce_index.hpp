#ifndef GLCE_LCE_INDEX_HPP
#define GLCE_LCE_INDEX_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "glce/block_index.hpp"
#include "glce/diffcover.hpp"
#include "glce/lce_core.hpp"

namespace glce {

// Levels of an LCE query: level k+1 is the whole string S, level i in 1..k is
// a basic block of layer i. A string at level L >= 2 is sampled by the
// difference cover of layer L-1 and is walked through the blocks of layer L-1.

// Position inside a run of blocks of one layer that tile a parent string.
struct BlockCursor {
    std::size_t layer = 0;  // layer of the blocks being walked
    std::size_t parent = 0; // basic block of layer+1 (0 for the whole string)
    std::size_t index = 0;  // position of the current block in the parent's run
    std::size_t block = 0;  // basic id of the current block
    pos_t offset = 0;       // inside the current block
    pos_t position = 0;     // inside the parent
};

struct LevelTrace {
    pos_t tau = 0;
    pos_t max_unaligned = 0;        // longest unaligned prefix compared
    std::size_t alignments = 0;
    std::size_t sparse_queries = 0;
    std::size_t early_exits = 0;    // mismatch inside the unaligned prefix
    std::size_t violations = 0;     // unaligned prefix longer than tau
};

struct LceTrace {
    std::vector<LevelTrace> levels; // index L-1 for level L
};

struct LceSpaceReport {
    SpaceReport access;
    std::size_t top_sparse_bytes = 0;
    std::vector<std::size_t> layer_sparse_bytes; // layers 2..k
    std::size_t leaf_full_bytes = 0;

    std::size_t total() const {
        std::size_t t = access.total() + top_sparse_bytes + leaf_full_bytes;
        for (auto b : layer_sparse_bytes) t += b;
        return t;
    }
};

// Sparse LCE over the separator-joined concatenation of one layer's basic
// blocks, sampled per block by a difference cover.
struct LayerSparse {
    SparseLce sparse;
    std::vector<pos_t> block_base;           // start of each block in the concatenation
    std::vector<std::uint64_t> sample_base;  // index of each block's first sample

    std::size_t block_count() const noexcept { return block_base.size(); }
};

class LceIndex {
public:
    LceIndex() = default;

    static LceIndex build(LayeredIndex base);

    const LayeredIndex& base() const noexcept { return base_; }
    pos_t length() const noexcept { return base_.length(); }
    std::size_t k() const noexcept { return base_.k(); }
    const DifferenceCover& cover(std::size_t layer) const { return covers_.at(layer - 1); }
    const SparseLce& top_sparse() const noexcept { return top_; }
    // Layers 2..k.
    const LayerSparse& layer_sparse(std::size_t layer) const { return layer_sparse_.at(layer - 2); }
    const FullLce& leaf_full() const noexcept { return leaf_full_; }
    std::span<const pos_t> leaf_base() const noexcept { return leaf_base_; }
    char_t separator_base() const noexcept { return sep_base_; }

    char_t access(pos_t i) const { return base_.access(i); }

    pos_t lce(pos_t i, pos_t j) const { return query(i, j, nullptr); }

    pos_t lce_instrumented(pos_t i, pos_t j, LceTrace& trace) const {
        if (trace.levels.size() != k() + 1) {
            trace.levels.assign(k() + 1, {});
            for (std::size_t L = 2; L <= k() + 1; ++L) trace.levels[L - 1].tau = covers_[L - 2].tau();
        }
        return query(i, j, &trace);
    }

    // Cursor over the blocks of `layer` tiling the parent string at `position`.
    BlockCursor make_cursor(std::size_t layer, std::size_t parent, pos_t position) const {
        BlockCursor c;
        c.layer = layer;
        c.parent = parent;
        c.position = position;
        if (position >= level_length(layer + 1, parent)) throw error(errc::out_of_range, "cursor position outside the parent");
        auto [idx, off] = layer == k() ? base_.locate_top(position) : base_.locate_inner(layer + 1, parent, position);
        c.index = idx;
        c.offset = off;
        c.block = child_at(layer + 1, parent, idx);
        return c;
    }

    // Compares the strings starting at two cursors of the same layer, block by
    // block, stopping at the first mismatch or at bound.
    pos_t bounded_block_compare(BlockCursor a, BlockCursor b, pos_t bound) const {
        return compare(a, b, bound, nullptr);
    }

    LceSpaceReport space_report() const {
        LceSpaceReport r;
        r.access = base_.space_report();
        r.top_sparse_bytes = top_.bytes();
        for (const auto& ls : layer_sparse_)
            r.layer_sparse_bytes.push_back(ls.sparse.bytes() + ls.block_base.size() * sizeof(pos_t) +
                                           ls.sample_base.size() * sizeof(std::uint64_t));
        r.leaf_full_bytes = leaf_full_.bytes() + leaf_base_.size() * sizeof(pos_t);
        return r;
    }

private:
    friend struct IndexCodec;

    pos_t level_length(std::size_t level, std::size_t block) const {
        return level == k() + 1 ? base_.length() : base_.layer(level).block_length[block];
    }

    std::size_t child_count(std::size_t level, std::size_t block) const {
        return level == k() + 1 ? base_.top_blocks().size() : base_.layer(level).children_of(block).size();
    }

    std::size_t child_at(std::size_t level, std::size_t block, std::size_t idx) const {
        return level == k() + 1 ? base_.top_blocks()[idx] : base_.layer(level).children_of(block)[idx];
    }

    pos_t sparse_lce(std::size_t level, std::size_t va, pos_t oa, std::size_t vb, pos_t ob) const {
        const DifferenceCover& dc = covers_[level - 2];
        if (level == k() + 1) return top_.lce_by_index(dc.sample_index(oa), dc.sample_index(ob));
        const LayerSparse& ls = layer_sparse_[level - 2];
        return ls.sparse.lce_by_index(ls.sample_base[va] + dc.sample_index(oa), ls.sample_base[vb] + dc.sample_index(ob));
    }

    pos_t query(pos_t i, pos_t j, LceTrace* trace) const {
        const pos_t n = length();
        if (i >= n || j >= n)
            throw error(errc::out_of_range, "lce(" + std::to_string(i) + ", " + std::to_string(j) + ") outside length " + std::to_string(n));
        return lce_at(k() + 1, 0, i, 0, j, n, trace);
    }

    // LCE of the suffixes of two level-L strings, capped at bound.
    pos_t lce_at(std::size_t level, std::size_t va, pos_t oa, std::size_t vb, pos_t ob, pos_t bound,
                 LceTrace* trace) const {
        const pos_t rem = std::min({bound, level_length(level, va) - oa, level_length(level, vb) - ob});
        if (rem == 0) return 0;
        if (level == 1) return std::min(rem, leaf_full_.lce(leaf_base_[va] + oa, leaf_base_[vb] + ob));
        if (va == vb && oa == ob) return rem;

        const DifferenceCover& dc = covers_[level - 2];
        LevelTrace* lt = trace ? &trace->levels[level - 1] : nullptr;
        if (dc.is_sampled(oa) && dc.is_sampled(ob)) {
            if (lt) ++lt->sparse_queries;
            return std::min(rem, sparse_lce(level, va, oa, vb, ob));
        }

        auto [ia, ib] = dc.align(oa, ob);
        const pos_t shift = ia - oa;
        const pos_t prefix = std::min(shift, rem);
        if (lt) {
            ++lt->alignments;
            lt->max_unaligned = std::max(lt->max_unaligned, prefix);
            if (prefix > dc.tau()) ++lt->violations;
        }
        pos_t matched = compare(make_cursor(level - 1, va, oa), make_cursor(level - 1, vb, ob), prefix, trace);
        if (shift >= rem) return matched;
        if (matched < shift) {
            if (lt) ++lt->early_exits;
            return matched;
        }
        if (lt) ++lt->sparse_queries;
        return shift + std::min(rem - shift, sparse_lce(level, va, ia, vb, ib));
    }

    pos_t compare(BlockCursor a, BlockCursor b, pos_t bound, LceTrace* trace) const {
        const std::size_t layer = a.layer;
        const std::size_t level = layer + 1;
        pos_t total = 0;
        while (total < bound) {
            const pos_t left = bound - total;
            const pos_t ra = level_length(layer, a.block) - a.offset;
            const pos_t rb = level_length(layer, b.block) - b.offset;
            const pos_t m = lce_at(layer, a.block, a.offset, b.block, b.offset, left, trace);
            total += m;
            if (m < std::min({ra, rb, left}) || total == bound) break;
            advance(level, a, m);
            advance(level, b, m);
        }
        return total;
    }

    void advance(std::size_t level, BlockCursor& c, pos_t m) const {
        c.offset += m;
        c.position += m;
        if (c.offset < level_length(c.layer, c.block)) return;
        if (c.index + 1 >= child_count(level, c.parent))
            throw error(errc::cursor_exhausted, "comparison ran past the last block");
        ++c.index;
        c.block = child_at(level, c.parent, c.index);
        c.offset = 0;
    }

    void append_block_text(std::size_t layer, std::size_t b, Text& out) const {
        if (layer == 1) {
            auto s = base_.layer(1).leaf_of(b);
            out.insert(out.end(), s.begin(), s.end());
            return;
        }
        for (auto c : base_.layer(layer).children_of(b)) append_block_text(layer - 1, c, out);
    }

    LayeredIndex base_;
    std::vector<DifferenceCover> covers_; // per layer, tau = X_i rounded down to a square
    SparseLce top_;
    std::vector<LayerSparse> layer_sparse_;
    FullLce leaf_full_;
    std::vector<pos_t> leaf_base_;
    char_t sep_base_ = 0;
};

inline LceIndex LceIndex::build(LayeredIndex base) {
    LceIndex idx;
    idx.base_ = std::move(base);
    const std::size_t k = idx.k();
    for (pos_t x : idx.base_.params().xs) idx.covers_.emplace_back(DifferenceCover::square_at_most(x));

    const Slp& g = idx.base_.grammar();
    char_t max_code = 0;
    for (const Rule& r : g.rules)
        if (r.is_terminal()) max_code = std::max(max_code, r.code());
    idx.sep_base_ = max_code + 1;

    // Separator-joined concatenation of one layer's basic blocks.
    auto concat = [&](std::size_t layer, std::vector<pos_t>& bases) {
        const BlockLayer& bl = idx.base_.layer(layer);
        if (bl.basic_count() > 0 && std::numeric_limits<char_t>::max() - idx.sep_base_ < bl.basic_count())
            throw error(errc::too_large, "alphabet leaves no room for separator codes");
        Text t;
        for (std::size_t b = 0; b < bl.basic_count(); ++b) {
            if (b > 0) t.push_back(idx.sep_base_ + static_cast<char_t>(b - 1));
            bases.push_back(t.size());
            idx.append_block_text(layer, b, t);
        }
        return t;
    };

    Text leaves = concat(1, idx.leaf_base_);
    idx.leaf_full_ = FullLce(leaves);

    for (std::size_t layer = 2; layer <= k; ++layer) {
        LayerSparse ls;
        const DifferenceCover& dc = idx.covers_[layer - 2];
        Text t = concat(layer, ls.block_base);
        std::vector<pos_t> samples;
        const BlockLayer& bl = idx.base_.layer(layer);
        for (std::size_t b = 0; b < bl.basic_count(); ++b) {
            ls.sample_base.push_back(samples.size());
            auto s = dc.samples(bl.block_length[b], ls.block_base[b]);
            samples.insert(samples.end(), s.begin(), s.end());
        }
        ls.sparse = SparseLce(t, std::move(samples));
        idx.layer_sparse_.push_back(std::move(ls));
    }

    Text s = expand(g, g.root, std::numeric_limits<pos_t>::max());
    idx.top_ = SparseLce(s, idx.covers_[k - 1].samples(idx.length()));
    return idx;
}

} // namespace glce

#endif
