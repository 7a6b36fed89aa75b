#ifndef GLCE_REPAIR_HPP
#define GLCE_REPAIR_HPP

#include <algorithm>
#include <cstdint>
#include <queue>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "glce/slp.hpp"

namespace glce {

namespace detail {

// Binary tree over seq[lo, hi); appends pair rules and returns the subtree root.
inline symbol_t balanced_tree(std::vector<Rule>& rules, std::span<const symbol_t> seq) {
    if (seq.size() == 1) return seq[0];
    std::size_t mid = seq.size() / 2;
    symbol_t l = balanced_tree(rules, seq.first(mid));
    symbol_t r = balanced_tree(rules, seq.subspan(mid));
    rules.push_back(Rule::pair(l, r));
    return static_cast<symbol_t>(rules.size() - 1);
}

} // namespace detail

// Re-Pair: repeatedly replace the most frequent adjacent pair by a fresh rule
// until no pair occurs twice, then join what is left with a balanced tree.
inline Slp build_grammar(std::span<const char_t> text) {
    if (text.empty()) throw error(errc::empty_input, "cannot build a grammar for an empty text");

    std::vector<char_t> alphabet(text.begin(), text.end());
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

    std::vector<Rule> rules;
    rules.reserve(alphabet.size() + text.size() / 4);
    for (char_t c : alphabet) rules.push_back(Rule::terminal(c));

    constexpr std::uint32_t end = std::numeric_limits<std::uint32_t>::max();
    const std::size_t n = text.size();
    std::vector<symbol_t> seq(n);
    std::vector<std::uint32_t> next(n), prev(n);
    std::vector<char> alive(n, 1);
    for (std::size_t p = 0; p < n; ++p) {
        seq[p] = static_cast<symbol_t>(std::lower_bound(alphabet.begin(), alphabet.end(), text[p]) - alphabet.begin());
        next[p] = p + 1 < n ? static_cast<std::uint32_t>(p + 1) : end;
        prev[p] = p > 0 ? static_cast<std::uint32_t>(p - 1) : end;
    }

    struct Digram {
        std::int64_t count = 0;
        std::vector<std::uint32_t> occ;
    };
    auto key_of = [](symbol_t a, symbol_t b) { return (std::uint64_t{a} << 32) | b; };
    std::unordered_map<std::uint64_t, Digram> digrams;
    std::priority_queue<std::pair<std::int64_t, std::uint64_t>> queue;

    auto add = [&](std::uint32_t p) {
        auto k = key_of(seq[p], seq[next[p]]);
        auto& d = digrams[k];
        ++d.count;
        d.occ.push_back(p);
        queue.emplace(d.count, k);
    };
    auto remove = [&](std::uint32_t p) {
        auto it = digrams.find(key_of(seq[p], seq[next[p]]));
        if (it == digrams.end()) return;
        --it->second.count;
        queue.emplace(it->second.count, it->first);
    };

    for (std::uint32_t p = 0; p + 1 < n; ++p) {
        auto& d = digrams[key_of(seq[p], seq[p + 1])];
        ++d.count;
        d.occ.push_back(p);
    }
    for (auto& [k, d] : digrams) queue.emplace(d.count, k);

    while (!queue.empty()) {
        auto [count, key] = queue.top();
        queue.pop();
        if (count < 2) break;
        auto it = digrams.find(key);
        if (it == digrams.end() || it->second.count != count) continue;

        std::vector<std::uint32_t> occ = std::move(it->second.occ);
        digrams.erase(it);
        std::sort(occ.begin(), occ.end());
        const symbol_t a = static_cast<symbol_t>(key >> 32);
        const symbol_t b = static_cast<symbol_t>(key & 0xffffffffu);
        const auto c = static_cast<symbol_t>(rules.size());
        bool used = false;

        for (std::uint32_t p : occ) {
            if (!alive[p] || seq[p] != a || next[p] == end) continue;
            std::uint32_t q = next[p];
            if (seq[q] != b) continue;
            std::uint32_t x = prev[p];
            std::uint32_t y = next[q];
            if (x != end) remove(x);
            if (y != end) remove(q);
            seq[p] = c;
            alive[q] = 0;
            next[p] = y;
            if (y != end) prev[y] = p;
            if (x != end) add(x);
            if (y != end) add(p);
            used = true;
        }
        if (used) rules.push_back(Rule::pair(a, b));
    }

    std::vector<symbol_t> rest;
    for (std::uint32_t p = 0; p != end; p = next[p]) rest.push_back(seq[p]);
    symbol_t root = detail::balanced_tree(rules, rest);
    return Slp::make(std::move(rules), root);
}

inline Slp build_grammar(std::string_view text) { return build_grammar(to_text(text)); }

} // namespace glce

#endif
