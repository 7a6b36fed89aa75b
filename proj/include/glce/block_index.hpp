#ifndef GLCE_BLOCK_INDEX_HPP
#define GLCE_BLOCK_INDEX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glce/restructure.hpp"
#include "glce/slp.hpp"
#include "glce/weighted_grammar.hpp"

namespace glce {

// Block lengths X_1 < X_2 < ... < X_k, in characters.
struct LayerParams {
    std::vector<pos_t> xs;

    std::size_t k() const noexcept { return xs.size(); }

    // A single layer only needs X >= 2; stacked layers need every X_i > 5.
    void check() const {
        if (xs.empty()) throw error(errc::param_error, "at least one layer is required");
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] < 2) throw error(errc::param_error, "X must be at least 2");
            if (xs.size() > 1 && xs[i] <= 5) throw error(errc::param_error, "every X_i must exceed 5 when k > 1");
            if (i > 0 && xs[i] <= xs[i - 1]) throw error(errc::param_error, "layer parameters must be strictly increasing");
        }
    }

    // Geometric spacing: X_i ~ N^(i/(k+1)), at least 8 and at least doubling.
    static LayerParams defaults(pos_t n, std::size_t k = 2) {
        LayerParams p;
        pos_t prev = 0;
        for (std::size_t i = 1; i <= k; ++i) {
            auto target = static_cast<pos_t>(std::ceil(std::pow(static_cast<double>(n), double(i) / double(k + 1))));
            pos_t x = std::max<pos_t>({8, target, 2 * prev});
            p.xs.push_back(x);
            prev = x;
        }
        return p;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
        return s;
    }
};

struct LayerSpace {
    std::size_t layer = 0; // 1-based
    pos_t x = 0;
    std::size_t basic_blocks = 0;
    std::size_t table_bytes = 0;
};

struct SpaceReport {
    std::size_t grammar_bytes = 0;
    std::size_t leaf_string_bytes = 0;
    std::size_t top_table_bytes = 0;
    std::vector<LayerSpace> layers;

    std::size_t total() const {
        std::size_t t = grammar_bytes + leaf_string_bytes + top_table_bytes;
        for (const auto& l : layers) t += l.table_bytes;
        return t;
    }
};

struct AccessTrace {
    char_t c = 0;
    std::vector<std::size_t> hops; // blocks scanned per layer, top layer first
};

// Per-layer storage. Basic blocks are numbered densely per layer. A basic block
// of layer i > 1 keeps its run of layer i-1 basic blocks together with a window
// table of width X_{i-1} over its own string; layer 1 keeps explicit strings.
struct BlockLayer {
    pos_t x = 0;
    std::size_t k_max = 0; // longest covering run of this layer's blocks in any window
    std::vector<pos_t> block_length;

    std::vector<std::uint32_t> child_begin;
    std::vector<std::uint32_t> children;
    std::vector<pos_t> child_start;
    std::vector<std::uint32_t> window_begin;
    std::vector<WindowEntry> windows;

    std::vector<std::uint64_t> leaf_begin;
    Text leaf_chars;

    std::size_t basic_count() const noexcept { return block_length.size(); }

    std::span<const std::uint32_t> children_of(std::size_t b) const {
        return std::span(children).subspan(child_begin[b], child_begin[b + 1] - child_begin[b]);
    }
    std::span<const pos_t> child_starts_of(std::size_t b) const {
        return std::span(child_start).subspan(child_begin[b], child_begin[b + 1] - child_begin[b]);
    }
    std::span<const WindowEntry> windows_of(std::size_t b) const {
        return std::span(windows).subspan(window_begin[b], window_begin[b + 1] - window_begin[b]);
    }
    std::span<const char_t> leaf_of(std::size_t b) const {
        return std::span(leaf_chars).subspan(leaf_begin[b], leaf_begin[b + 1] - leaf_begin[b]);
    }
};

class LayeredIndex {
public:
    LayeredIndex() = default;

    static LayeredIndex build(const Slp& slp, const LayerParams& params);

    const LayerParams& params() const noexcept { return params_; }
    std::size_t k() const noexcept { return params_.k(); }
    pos_t length() const noexcept { return n_; }
    const Slp& grammar() const noexcept { return grammar_; }

    // Layer i, 1-based.
    const BlockLayer& layer(std::size_t i) const { return layers_.at(i - 1); }
    std::span<const std::uint32_t> top_blocks() const noexcept { return top_blocks_; }
    std::span<const pos_t> top_starts() const noexcept { return std::span(top_starts_).first(top_blocks_.size()); }
    std::span<const WindowEntry> top_windows() const noexcept { return top_windows_; }
    std::size_t top_window_count() const noexcept { return top_windows_.size(); }

    char_t access(pos_t i) const { return descend(i, nullptr); }

    AccessTrace access_instrumented(pos_t i) const {
        AccessTrace t;
        t.hops.reserve(k());
        t.c = descend(i, &t.hops);
        return t;
    }

    // S[i..j], both ends inclusive.
    Text extract(pos_t i, pos_t j) const {
        if (i > j || j >= n_) throw error(errc::out_of_range, "extract range [" + std::to_string(i) + ", " + std::to_string(j) + "]");
        Text out;
        out.reserve(j - i + 1);
        for (pos_t p = i; p <= j; ++p) out.push_back(descend(p, nullptr));
        return out;
    }

    // Locates position i on the top layer: (top block index, offset).
    std::pair<std::size_t, pos_t> locate_top(pos_t i, std::size_t* scans = nullptr) const {
        return detail::window_locate(top_windows_, params_.xs.back(), top_starts(), n_, i, scans);
    }

    // Locates offset o inside basic block b of layer i > 1: (child index, offset).
    std::pair<std::size_t, pos_t> locate_inner(std::size_t i, std::size_t b, pos_t o, std::size_t* scans = nullptr) const {
        const BlockLayer& l = layers_[i - 1];
        return detail::window_locate(l.windows_of(b), params_.xs[i - 2], l.child_starts_of(b), l.block_length[b], o, scans);
    }

    SpaceReport space_report() const;

private:
    char_t descend(pos_t i, std::vector<std::size_t>* hops) const {
        if (i >= n_) throw error(errc::out_of_range, "position " + std::to_string(i) + " >= " + std::to_string(n_));
        std::size_t scans = 0;
        auto [r, o] = locate_top(i, &scans);
        if (hops) hops->push_back(scans);
        std::size_t b = top_blocks_[r];
        for (std::size_t layer = k(); layer >= 2; --layer) {
            auto [c, off] = locate_inner(layer, b, o, &scans);
            if (hops) hops->push_back(scans);
            b = layers_[layer - 1].children_of(b)[c];
            o = off;
        }
        return layers_[0].leaf_of(b)[o];
    }

    friend struct IndexCodec;

    LayerParams params_;
    pos_t n_ = 0;
    Slp grammar_;
    std::vector<BlockLayer> layers_;
    std::vector<std::uint32_t> top_blocks_;
    std::vector<pos_t> top_starts_; // top_blocks_.size() + 1 entries
    std::vector<WindowEntry> top_windows_;
    std::size_t top_k_max_ = 0;
};

namespace detail {

// Blocks of r become leaves carrying their symbol in r as payload; only the
// part above the blocks and reachable from the root is kept.
inline WeightedGrammar with_temporary_leaves(const Restructured& r) {
    const auto& g = r.grammar;
    std::vector<char> reach(g.size(), 0);
    reach[g.root] = 1;
    for (std::size_t v = g.size(); v-- > 0;) {
        if (!reach[v] || r.is_block[v] || g.nodes[v].is_leaf()) continue;
        reach[g.nodes[v].left] = reach[g.nodes[v].right] = 1;
    }
    WeightedGrammar out;
    std::vector<symbol_t> id(g.size(), no_symbol);
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!reach[v]) continue;
        const auto& n = g.nodes[v];
        id[v] = (r.is_block[v] || n.is_leaf()) ? out.add_leaf(n.length, static_cast<std::uint32_t>(v))
                                              : out.add_pair(id[n.left], id[n.right]);
    }
    out.root = id[g.root];
    return out;
}

// Dense numbering of the symbols met, in order of first appearance.
class Numbering {
public:
    explicit Numbering(std::size_t universe) : id_(universe, no_symbol) {}

    std::uint32_t operator()(symbol_t s) {
        if (id_[s] == no_symbol) {
            id_[s] = static_cast<symbol_t>(syms_.size());
            syms_.push_back(s);
        }
        return id_[s];
    }
    const std::vector<symbol_t>& symbols() const noexcept { return syms_; }

private:
    std::vector<symbol_t> id_;
    std::vector<symbol_t> syms_;
};

} // namespace detail

inline LayeredIndex LayeredIndex::build(const Slp& slp, const LayerParams& params) {
    params.check();
    validate(slp);
    LayeredIndex idx;
    idx.params_ = params;
    idx.n_ = slp.length();
    idx.grammar_ = slp;
    const std::size_t k = params.k();

    // Layer i restructures the grammar whose leaves are the blocks of layer i-1.
    std::vector<detail::Restructured> res;
    res.reserve(k);
    WeightedGrammar g = WeightedGrammar::from_slp(slp);
    for (std::size_t i = 0; i < k; ++i) {
        res.push_back(detail::restructure(g, params.xs[i]));
        if (i + 1 < k) g = detail::with_temporary_leaves(res.back());
    }

    idx.layers_.resize(k);
    std::vector<detail::Numbering> numbering;
    numbering.reserve(k);
    for (std::size_t i = 0; i < k; ++i) numbering.emplace_back(res[i].grammar.size());

    const auto& top = res[k - 1];
    pos_t at = 0;
    for (symbol_t s : detail::frontier(top, top.grammar.root)) {
        idx.top_blocks_.push_back(numbering[k - 1](s));
        idx.top_starts_.push_back(at);
        at += top.grammar.nodes[s].length;
    }
    idx.top_starts_.push_back(at);
    auto top_table = detail::WindowTable::build(idx.top_starts(), idx.n_, params.xs.back());
    idx.top_windows_ = std::move(top_table.entries);
    idx.top_k_max_ = top_table.k_max;
    idx.layers_[k - 1].k_max = top_table.k_max;

    for (std::size_t layer = k; layer >= 1; --layer) {
        BlockLayer& bl = idx.layers_[layer - 1];
        bl.x = params.xs[layer - 1];
        const auto& gr = res[layer - 1].grammar;
        const auto& syms = numbering[layer - 1].symbols();
        bl.block_length.reserve(syms.size());
        for (symbol_t s : syms) bl.block_length.push_back(gr.nodes[s].length);

        if (layer == 1) {
            bl.leaf_begin.push_back(0);
            for (symbol_t s : syms) {
                gr.for_each_leaf(s, [&](symbol_t leaf) { bl.leaf_chars.push_back(gr.nodes[leaf].payload); });
                bl.leaf_begin.push_back(bl.leaf_chars.size());
            }
            break;
        }

        BlockLayer& below = idx.layers_[layer - 2];
        bl.child_begin.push_back(0);
        bl.window_begin.push_back(0);
        // syms may not grow here: children are numbered on the layer below.
        for (std::size_t b = 0; b < syms.size(); ++b) {
            pos_t off = 0;
            gr.for_each_leaf(syms[b], [&](symbol_t leaf) {
                bl.children.push_back(numbering[layer - 2](gr.nodes[leaf].payload));
                bl.child_start.push_back(off);
                off += gr.nodes[leaf].length;
            });
            bl.child_begin.push_back(static_cast<std::uint32_t>(bl.children.size()));
            auto t = detail::WindowTable::build(bl.child_starts_of(b), bl.block_length[b], params.xs[layer - 2]);
            bl.windows.insert(bl.windows.end(), t.entries.begin(), t.entries.end());
            bl.window_begin.push_back(static_cast<std::uint32_t>(bl.windows.size()));
            below.k_max = std::max(below.k_max, t.k_max);
        }
    }
    return idx;
}

inline SpaceReport LayeredIndex::space_report() const {
    SpaceReport r;
    r.grammar_bytes = grammar_.size() * sizeof(Rule);
    r.top_table_bytes = top_blocks_.size() * sizeof(std::uint32_t) + top_starts_.size() * sizeof(pos_t) +
                        top_windows_.size() * (sizeof(std::uint32_t) + sizeof(pos_t));
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const BlockLayer& l = layers_[i];
        LayerSpace s;
        s.layer = i + 1;
        s.x = l.x;
        s.basic_blocks = l.basic_count();
        s.table_bytes = l.block_length.size() * sizeof(pos_t) + l.child_begin.size() * sizeof(std::uint32_t) +
                        l.children.size() * sizeof(std::uint32_t) + l.child_start.size() * sizeof(pos_t) +
                        l.window_begin.size() * sizeof(std::uint32_t) +
                        l.windows.size() * (sizeof(std::uint32_t) + sizeof(pos_t)) +
                        l.leaf_begin.size() * sizeof(std::uint64_t);
        r.leaf_string_bytes += l.leaf_chars.size() * sizeof(char_t);
        r.layers.push_back(s);
    }
    return r;
}

} // namespace glce

#endif
