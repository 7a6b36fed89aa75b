#ifndef GLCE_RESTRUCTURE_HPP
#define GLCE_RESTRUCTURE_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "glce/slp.hpp"
#include "glce/weighted_grammar.hpp"

namespace glce {

// Restructuring of an SLP for a block-length parameter X.
//
// A boundary node generates more than X/2 characters while both of its
// children generate at most X/2. Boundary occurrences in the parse tree are
// disjoint and every subtree hanging between two consecutive occurrences is
// short (at most X/2). The gap between two consecutive occurrences u', v' with
// nearest common ancestor y consists of the subtrees hanging right of the path
// from u' up to left(y), followed by those hanging left of the path from
// right(y) down to v'. Both paths depend only on the symbols left(y) and
// right(y), so the paths are shared across occurrences and form the left and
// right forests. Greedy clustering along those forests groups hanging subtrees
// into blocks of length at most X, and every symbol is rebuilt as
// head . core . tail with the blocks as the frontier of its parse tree.

struct BoundarySet {
    std::vector<symbol_t> members; // sorted

    bool contains(symbol_t v) const { return std::binary_search(members.begin(), members.end(), v); }
    std::size_t size() const noexcept { return members.size(); }
    bool empty() const noexcept { return members.empty(); }
};

enum class ForestSide { left, right };

// A node of a path forest. parent points towards the boundary node at the root
// of the tree; the edge to the parent carries the labels. Caps are the nearest
// common ancestors closing a path; their edge is unlabeled.
struct ForestNode {
    symbol_t symbol = no_symbol;
    std::int64_t parent = -1;
    symbol_t primary = no_symbol;   // no_symbol stands for the empty label
    symbol_t secondary = no_symbol;
    bool nca_cap = false;
};

struct LabeledForest {
    ForestSide side = ForestSide::left;
    std::vector<ForestNode> nodes;

    std::size_t edge_count() const {
        return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const ForestNode& n) { return n.parent >= 0; }));
    }
    bool empty() const noexcept { return nodes.empty(); }

    // Largest number of nodes that refer to one grammar symbol.
    std::size_t max_symbol_occurrences() const {
        std::vector<symbol_t> syms;
        for (const auto& n : nodes) syms.push_back(n.symbol);
        std::sort(syms.begin(), syms.end());
        std::size_t best = 0;
        for (std::size_t i = 0; i < syms.size();) {
            std::size_t j = i;
            while (j < syms.size() && syms[j] == syms[i]) ++j;
            best = std::max(best, j - i);
            i = j;
        }
        return best;
    }
};

struct WindowEntry {
    std::uint32_t first_block = 0;
    pos_t offset = 0;

    friend bool operator==(const WindowEntry&, const WindowEntry&) = default;
};

namespace detail {

// Window lookup over a run of consecutive blocks given by their start offsets.
// Window j covers [j*width, min((j+1)*width, total)).
struct WindowTable {
    pos_t width = 1;
    std::vector<WindowEntry> entries;
    std::size_t k_max = 0;

    // starts[b] is the start of block b relative to the run; total is the run length.
    static WindowTable build(std::span<const pos_t> starts, pos_t total, pos_t width) {
        WindowTable t;
        t.width = width;
        const pos_t windows = (total + width - 1) / width;
        t.entries.reserve(windows);
        std::size_t b = 0, e = 0;
        auto end_of = [&](std::size_t k) { return k + 1 < starts.size() ? starts[k + 1] : total; };
        for (pos_t j = 0; j < windows; ++j) {
            pos_t lo = j * width, hi = std::min(total, lo + width) - 1;
            while (end_of(b) <= lo) ++b;
            e = std::max(e, b);
            while (end_of(e) <= hi) ++e;
            t.entries.push_back({static_cast<std::uint32_t>(b), lo - starts[b]});
            t.k_max = std::max<std::size_t>(t.k_max, e - b + 1);
        }
        return t;
    }

    std::size_t bytes() const { return entries.size() * (sizeof(std::uint32_t) + sizeof(pos_t)); }
};

// Finds the block containing position i of a run of consecutive blocks through
// its window entries and a forward scan; scans counts the blocks inspected.
inline std::pair<std::size_t, pos_t> window_locate(std::span<const WindowEntry> windows, pos_t width,
                                                   std::span<const pos_t> starts, pos_t total, pos_t i,
                                                   std::size_t* scans = nullptr) {
    const WindowEntry& w = windows[i / width];
    std::size_t b = w.first_block;
    std::size_t seen = 1;
    while ((b + 1 < starts.size() ? starts[b + 1] : total) <= i) {
        ++b;
        ++seen;
    }
    if (scans) *scans = seen;
    return {b, i - starts[b]};
}

inline bool exceeds_half(pos_t len, pos_t x) { return 2 * len > x; }

inline std::vector<char> boundary_flags(const WeightedGrammar& g, pos_t x) {
    std::vector<char> in(g.size(), 0);
    for (std::size_t v = 0; v < g.size(); ++v) {
        const auto& n = g.nodes[v];
        if (!exceeds_half(n.length, x)) continue;
        in[v] = n.is_leaf() || (!exceeds_half(g.nodes[n.left].length, x) && !exceeds_half(g.nodes[n.right].length, x));
    }
    return in;
}

inline std::vector<char> has_boundary_flags(const WeightedGrammar& g, const std::vector<char>& in) {
    std::vector<char> has(g.size(), 0);
    for (std::size_t v = 0; v < g.size(); ++v) {
        const auto& n = g.nodes[v];
        has[v] = in[v] || (!n.is_leaf() && (has[n.left] || has[n.right]));
    }
    return has;
}

// Output of restructuring: the grammar keeps every input node at its id and
// appends the new ones; is_block marks nodes that are blocks wherever they
// occur on the frontier below the new root.
struct Restructured {
    WeightedGrammar grammar;
    std::vector<char> is_block;
    std::size_t input_size = 0;
    std::size_t boundary_size = 0;
};

class Restructurer {
public:
    Restructurer(const WeightedGrammar& g, pos_t x) : x_(x), out_{g, {}, g.size(), 0} {
        const std::size_t n = g.size();
        in_b_ = boundary_flags(g, x);
        has_b_ = has_boundary_flags(g, in_b_);
        out_.boundary_size = static_cast<std::size_t>(std::count(in_b_.begin(), in_b_.end(), 1));
        tail_.assign(n, Side{});
        head_.assign(n, Side{});
        core_.assign(n, unset);
        tail_sym_.assign(n, unset);
        head_sym_.assign(n, unset);
        out_.is_block.assign(n, 0);
    }

    Restructured run() && {
        WeightedGrammar& g = out_.grammar;
        const symbol_t root = g.root;
        if (g.nodes[root].length <= x_ || !has_b_[root]) {
            out_.is_block[root] = 1;
            return std::move(out_);
        }
        symbol_t r = join(join(head_symbol(root), core(root)), tail_symbol(root));
        g.root = r;
        return std::move(out_);
    }

private:
    static constexpr symbol_t unset = no_symbol - 1;

    // Greedy cluster state at one forest node: the blocks already closed
    // (as one symbol, possibly a structural join) and the open block.
    struct Side {
        bool done = false;
        symbol_t closed = no_symbol;
        symbol_t open = no_symbol;
        pos_t open_len = 0;
    };

    const WeightedGrammar::Node& node(symbol_t v) const { return out_.grammar.nodes[v]; }

    symbol_t pair(symbol_t l, symbol_t r, bool block) {
        symbol_t v = out_.grammar.add_pair(l, r);
        out_.is_block.push_back(block ? 1 : 0);
        return v;
    }

    symbol_t join(symbol_t a, symbol_t b) {
        if (a == no_symbol) return b;
        if (b == no_symbol) return a;
        return pair(a, b, false);
    }

    symbol_t mark_block(symbol_t v) {
        out_.is_block[v] = 1;
        return v;
    }

    // Left forest: the path from v to its last boundary occurrence. The edge
    // through left(v) carries primary label right(v), a subtree hanging to the
    // right of the path; the open block grows by appending it.
    const Side& tail(symbol_t v) {
        std::vector<symbol_t> path;
        for (symbol_t u = v; !tail_[u].done && !in_b_[u];) {
            path.push_back(u);
            const auto& n = node(u);
            u = has_b_[n.right] ? n.right : n.left;
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            symbol_t u = *it;
            const auto& n = node(u);
            bool via_left = !has_b_[n.right];
            Side s = tail_[via_left ? n.left : n.right];
            if (via_left) {
                symbol_t label = n.right;
                pos_t ll = node(label).length;
                if (s.open_len + ll <= x_) {
                    s.open = s.open == no_symbol ? mark_block(label) : pair(s.open, label, true);
                    s.open_len += ll;
                } else {
                    s.closed = join(s.closed, s.open);
                    s.open = mark_block(label);
                    s.open_len = ll;
                }
            }
            s.done = true;
            tail_[u] = s;
        }
        tail_[v].done = true;
        return tail_[v];
    }

    // Right forest: the path from v to its first boundary occurrence; the edge
    // through right(v) carries primary label left(v), prepended to the open block.
    const Side& head(symbol_t v) {
        std::vector<symbol_t> path;
        for (symbol_t u = v; !head_[u].done && !in_b_[u];) {
            path.push_back(u);
            const auto& n = node(u);
            u = has_b_[n.left] ? n.left : n.right;
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            symbol_t u = *it;
            const auto& n = node(u);
            bool via_right = !has_b_[n.left];
            Side s = head_[via_right ? n.right : n.left];
            if (via_right) {
                symbol_t label = n.left;
                pos_t ll = node(label).length;
                if (s.open_len + ll <= x_) {
                    s.open = s.open == no_symbol ? mark_block(label) : pair(label, s.open, true);
                    s.open_len += ll;
                } else {
                    s.closed = join(s.open, s.closed);
                    s.open = mark_block(label);
                    s.open_len = ll;
                }
            }
            s.done = true;
            head_[u] = s;
        }
        head_[v].done = true;
        return head_[v];
    }

    symbol_t tail_symbol(symbol_t v) {
        if (tail_sym_[v] == unset) {
            Side s = tail(v);
            tail_sym_[v] = join(s.closed, s.open);
        }
        return tail_sym_[v];
    }

    symbol_t head_symbol(symbol_t v) {
        if (head_sym_[v] == unset) {
            Side s = head(v);
            head_sym_[v] = join(s.open, s.closed);
        }
        return head_sym_[v];
    }

    // From the first to the last boundary occurrence of v, inclusive.
    symbol_t core(symbol_t v) {
        if (core_[v] != unset) return core_[v];
        std::vector<symbol_t> stack{v};
        while (!stack.empty()) {
            symbol_t u = stack.back();
            if (core_[u] != unset) {
                stack.pop_back();
                continue;
            }
            if (in_b_[u]) {
                core_[u] = mark_block(u);
                stack.pop_back();
                continue;
            }
            const auto& n = node(u);
            symbol_t l = n.left, r = n.right;
            bool hl = has_b_[l], hr = has_b_[r];
            if (hl && core_[l] == unset) {
                stack.push_back(l);
                continue;
            }
            if (hr && core_[r] == unset) {
                stack.push_back(r);
                continue;
            }
            if (hl && hr) {
                symbol_t gap = join(tail_symbol(l), head_symbol(r));
                core_[u] = join(join(core_[l], gap), core_[r]);
            } else {
                core_[u] = hl ? core_[l] : core_[r];
            }
            stack.pop_back();
        }
        return core_[v];
    }

    pos_t x_;
    Restructured out_;
    std::vector<char> in_b_, has_b_;
    std::vector<Side> tail_, head_;
    std::vector<symbol_t> core_, tail_sym_, head_sym_;
};

inline Restructured restructure(const WeightedGrammar& g, pos_t x) { return Restructurer(g, x).run(); }

// Blocks on the frontier below v, left to right.
inline std::vector<symbol_t> frontier(const Restructured& r, symbol_t v) {
    std::vector<symbol_t> out, stack{v};
    const auto& g = r.grammar;
    while (!stack.empty()) {
        symbol_t u = stack.back();
        stack.pop_back();
        if (r.is_block[u] || g.nodes[u].is_leaf()) {
            out.push_back(u);
        } else {
            stack.push_back(g.nodes[u].right);
            stack.push_back(g.nodes[u].left);
        }
    }
    return out;
}

inline LabeledForest build_forest(const WeightedGrammar& g, pos_t x, ForestSide side) {
    auto in = boundary_flags(g, x);
    auto has = has_boundary_flags(g, in);
    LabeledForest f;
    f.side = side;
    if (g.length() <= x) return f;

    // Symbols whose occurrences lie on the parse tree above boundary occurrences.
    std::vector<char> reach(g.size(), 0);
    reach[g.root] = has[g.root];
    for (std::size_t v = g.size(); v-- > 0;) {
        if (!reach[v] || in[v]) continue;
        const auto& n = g.nodes[v];
        reach[n.left] |= has[n.left];
        reach[n.right] |= has[n.right];
    }

    std::vector<std::int64_t> index(g.size(), -1);
    auto step = [&](symbol_t v) {
        const auto& n = g.nodes[v];
        return side == ForestSide::left ? (has[n.right] ? n.right : n.left) : (has[n.left] ? n.left : n.right);
    };
    auto add_path = [&](symbol_t start) -> std::int64_t {
        std::vector<symbol_t> path;
        for (symbol_t u = start; index[u] < 0; u = step(u)) {
            path.push_back(u);
            if (in[u]) break;
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            symbol_t u = *it;
            ForestNode fn;
            fn.symbol = u;
            if (!in[u]) {
                const auto& n = g.nodes[u];
                symbol_t next = step(u);
                fn.parent = index[next];
                bool via_left = next == n.left;
                if (side == ForestSide::left) {
                    (via_left ? fn.primary : fn.secondary) = via_left ? n.right : n.left;
                } else {
                    (via_left ? fn.secondary : fn.primary) = via_left ? n.right : n.left;
                }
            }
            index[u] = static_cast<std::int64_t>(f.nodes.size());
            f.nodes.push_back(fn);
        }
        return index[start];
    };

    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!reach[v] || in[v]) continue;
        const auto& n = g.nodes[v];
        if (!has[n.left] || !has[n.right]) continue;
        ForestNode cap;
        cap.symbol = static_cast<symbol_t>(v);
        cap.nca_cap = true;
        cap.parent = add_path(side == ForestSide::left ? n.left : n.right);
        f.nodes.push_back(cap);
    }
    return f;
}

} // namespace detail

// Boundary nodes: more than X/2 characters, both children at most X/2.
// Terminals count as length 1 and qualify only when X < 2.
inline BoundarySet boundary_set(const WeightedGrammar& g, pos_t x) {
    auto in = detail::boundary_flags(g, x);
    BoundarySet b;
    for (std::size_t v = 0; v < in.size(); ++v)
        if (in[v]) b.members.push_back(static_cast<symbol_t>(v));
    return b;
}

inline BoundarySet boundary_set(const Slp& slp, pos_t x) { return boundary_set(WeightedGrammar::from_slp(slp), x); }

// Left and right path forests for consecutive boundary occurrences. Paths that
// serve only the prefix before the first or the suffix after the last
// occurrence are not part of these forests.
inline std::pair<LabeledForest, LabeledForest> build_path_forests(const Slp& slp, pos_t x) {
    auto g = WeightedGrammar::from_slp(slp);
    return {detail::build_forest(g, x, ForestSide::left), detail::build_forest(g, x, ForestSide::right)};
}

struct BlockDecomposition {
    Slp slp2;
    pos_t x = 0;
    std::vector<symbol_t> block_roots;
    std::vector<pos_t> block_starts; // block_roots.size() + 1 entries, last = N
    std::vector<symbol_t> basic_blocks;
    std::vector<WindowEntry> window_table;
    std::size_t k_max = 0;
    std::size_t boundary_size = 0;
    std::size_t input_symbols = 0;

    std::size_t block_count() const noexcept { return block_roots.size(); }
    pos_t length() const { return block_starts.back(); }
    std::size_t added_symbols() const { return slp2.size() - input_symbols; }
};

struct BlockRun {
    std::size_t first = 0;
    std::size_t last = 0; // inclusive
    pos_t offset = 0;     // of the requested start inside block `first`

    std::size_t size() const noexcept { return last - first + 1; }
};

inline BlockDecomposition decompose(const Slp& slp, pos_t x) {
    if (x < 2) throw error(errc::param_error, "block parameter X must be at least 2");
    auto g = WeightedGrammar::from_slp(slp);
    auto r = detail::restructure(g, x);

    BlockDecomposition d;
    d.x = x;
    d.input_symbols = slp.size();
    d.boundary_size = r.boundary_size;
    d.block_roots = detail::frontier(r, r.grammar.root);
    d.block_starts.reserve(d.block_roots.size() + 1);
    pos_t at = 0;
    for (symbol_t b : d.block_roots) {
        d.block_starts.push_back(at);
        at += r.grammar.nodes[b].length;
    }
    d.block_starts.push_back(at);
    d.basic_blocks = d.block_roots;
    std::sort(d.basic_blocks.begin(), d.basic_blocks.end());
    d.basic_blocks.erase(std::unique(d.basic_blocks.begin(), d.basic_blocks.end()), d.basic_blocks.end());

    auto table = detail::WindowTable::build(std::span(d.block_starts).first(d.block_roots.size()), at, x);
    d.window_table = std::move(table.entries);
    d.k_max = table.k_max;
    d.slp2 = r.grammar.to_slp();
    return d;
}

// Block containing position i and the offset inside it.
inline std::pair<std::size_t, pos_t> locate(const BlockDecomposition& d, pos_t i, std::size_t* scans = nullptr) {
    if (i >= d.length()) throw error(errc::out_of_range, "position " + std::to_string(i) + " >= " + std::to_string(d.length()));
    return detail::window_locate(d.window_table, d.x, std::span(d.block_starts).first(d.block_count()), d.length(), i, scans);
}

// Consecutive blocks whose concatenation contains S[i, i + len).
inline BlockRun cover(const BlockDecomposition& d, pos_t i, pos_t len) {
    if (len == 0 || len > d.x) throw error(errc::out_of_range, "cover length must lie in 1..X");
    if (i + len > d.length() || i + len < i) throw error(errc::out_of_range, "cover range exceeds the string");
    auto [first, offset] = locate(d, i);
    auto [last, unused] = locate(d, i + len - 1);
    (void)unused;
    return {first, last, offset};
}

} // namespace glce

#endif
