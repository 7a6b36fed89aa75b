#ifndef GLCE_WEIGHTED_GRAMMAR_HPP
#define GLCE_WEIGHTED_GRAMMAR_HPP

#include <cstdint>
#include <vector>

#include "glce/slp.hpp"

namespace glce {

// An SLP whose leaves carry an arbitrary expansion length and an opaque
// payload. Terminals are leaves of length 1 whose payload is the character
// code; temporary leaves stand for lower-layer blocks.
struct WeightedGrammar {
    struct Node {
        symbol_t left = no_symbol;
        symbol_t right = no_symbol;
        pos_t length = 0;
        std::uint32_t payload = 0;

        bool is_leaf() const noexcept { return right == no_symbol; }
    };

    std::vector<Node> nodes;
    symbol_t root = 0;

    std::size_t size() const noexcept { return nodes.size(); }
    pos_t length() const { return nodes.at(root).length; }
    const Node& operator[](symbol_t v) const { return nodes[v]; }

    symbol_t add_leaf(pos_t length, std::uint32_t payload) {
        nodes.push_back({no_symbol, no_symbol, length, payload});
        return static_cast<symbol_t>(nodes.size() - 1);
    }
    symbol_t add_pair(symbol_t l, symbol_t r) {
        nodes.push_back({l, r, nodes[l].length + nodes[r].length, 0});
        return static_cast<symbol_t>(nodes.size() - 1);
    }

    static WeightedGrammar from_slp(const Slp& slp) {
        WeightedGrammar g;
        g.nodes.reserve(slp.size());
        for (std::size_t v = 0; v < slp.size(); ++v) {
            const Rule& r = slp.rules[v];
            if (r.is_terminal()) {
                g.add_leaf(1, r.code());
            } else {
                g.add_pair(r.left(), r.right());
            }
        }
        g.root = slp.root;
        return g;
    }

    // Only meaningful when every leaf has length 1.
    Slp to_slp() const {
        std::vector<Rule> rules;
        rules.reserve(nodes.size());
        for (const Node& n : nodes) rules.push_back(n.is_leaf() ? Rule::terminal(n.payload) : Rule::pair(n.left, n.right));
        return Slp::make(std::move(rules), root);
    }

    // Leaves of the subtree of v, left to right.
    template <class F>
    void for_each_leaf(symbol_t v, F&& f) const {
        std::vector<symbol_t> stack{v};
        while (!stack.empty()) {
            symbol_t x = stack.back();
            stack.pop_back();
            if (nodes[x].is_leaf()) {
                f(x);
            } else {
                stack.push_back(nodes[x].right);
                stack.push_back(nodes[x].left);
            }
        }
    }
};

} // namespace glce

#endif
