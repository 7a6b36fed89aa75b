#ifndef GLCE_SLP_HPP
#define GLCE_SLP_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glce/error.hpp"

namespace glce {

using symbol_t = std::uint32_t;
using char_t = std::uint32_t;
using pos_t = std::uint64_t;
using Text = std::vector<char_t>;

inline constexpr symbol_t no_symbol = std::numeric_limits<symbol_t>::max();

// Default ceiling on materialized expansions (characters).
inline constexpr pos_t default_expand_cap = pos_t{1} << 28;

// A production of a straight-line program: a terminal or an ordered pair.
class Rule {
public:
    static Rule terminal(char_t code) { return Rule(code, no_symbol); }
    static Rule pair(symbol_t left, symbol_t right) { return Rule(left, right); }

    bool is_terminal() const noexcept { return right_ == no_symbol; }
    char_t code() const noexcept { return left_; }
    symbol_t left() const noexcept { return left_; }
    symbol_t right() const noexcept { return right_; }

    friend bool operator==(const Rule&, const Rule&) = default;

private:
    Rule(std::uint32_t a, std::uint32_t b) : left_(a), right_(b) {}
    std::uint32_t left_;
    std::uint32_t right_;
};

// Rules are kept in topological order: a pair only references lower ids.
struct Slp {
    std::vector<Rule> rules;
    symbol_t root = 0;
    std::vector<pos_t> lengths;

    std::size_t size() const noexcept { return rules.size(); }
    pos_t length() const { return lengths.at(root); }

    static Slp make(std::vector<Rule> rules, symbol_t root);
};

struct ValidationReport {
    std::size_t unreachable = 0;
};

namespace detail {

inline std::vector<pos_t> compute_lengths(const std::vector<Rule>& rules) {
    std::vector<pos_t> len(rules.size());
    for (std::size_t v = 0; v < rules.size(); ++v) {
        const Rule& r = rules[v];
        if (r.is_terminal()) {
            len[v] = 1;
            continue;
        }
        if (r.left() >= rules.size() || r.right() >= rules.size())
            throw error(errc::dangling_symbol, "rule " + std::to_string(v) + " references a missing symbol");
        if (r.left() >= v || r.right() >= v)
            throw error(errc::cyclic_reference, "rule " + std::to_string(v) + " references itself or a later rule");
        if (__builtin_add_overflow(len[r.left()], len[r.right()], &len[v]))
            throw error(errc::too_large, "expansion length of rule " + std::to_string(v) + " overflows");
    }
    return len;
}

} // namespace detail

// Checks every structural invariant and recomputes lengths. Unreachable rules
// are allowed and only counted.
inline ValidationReport validate(const Slp& slp) {
    if (slp.rules.empty()) throw error(errc::bad_root, "grammar has no rules");
    auto len = detail::compute_lengths(slp.rules);
    if (slp.root >= slp.rules.size())
        throw error(errc::bad_root, "root " + std::to_string(slp.root) + " is not a rule");
    if (slp.lengths != len) throw error(errc::length_mismatch, "stored lengths disagree with the rules");

    std::vector<char> seen(slp.rules.size(), 0);
    seen[slp.root] = 1;
    for (std::size_t v = slp.rules.size(); v-- > 0;) {
        if (!seen[v] || slp.rules[v].is_terminal()) continue;
        seen[slp.rules[v].left()] = 1;
        seen[slp.rules[v].right()] = 1;
    }
    ValidationReport rep;
    for (char s : seen) rep.unreachable += s ? 0 : 1;
    return rep;
}

inline Slp Slp::make(std::vector<Rule> rules, symbol_t root) {
    Slp s;
    s.lengths = detail::compute_lengths(rules);
    s.rules = std::move(rules);
    s.root = root;
    validate(s);
    return s;
}

// Appends S(v) to out.
inline void expand_into(const Slp& slp, symbol_t v, Text& out) {
    std::vector<symbol_t> stack{v};
    while (!stack.empty()) {
        symbol_t x = stack.back();
        stack.pop_back();
        const Rule& r = slp.rules[x];
        if (r.is_terminal()) {
            out.push_back(r.code());
        } else {
            stack.push_back(r.right());
            stack.push_back(r.left());
        }
    }
}

inline Text expand(const Slp& slp, symbol_t v, pos_t cap = default_expand_cap) {
    if (v >= slp.size()) throw error(errc::dangling_symbol, "symbol " + std::to_string(v));
    if (slp.lengths[v] > cap)
        throw error(errc::too_large, "expansion of " + std::to_string(slp.lengths[v]) + " characters exceeds cap");
    Text out;
    out.reserve(slp.lengths[v]);
    expand_into(slp, v, out);
    return out;
}

inline Text expand(const Slp& slp) { return expand(slp, slp.root); }

// Top-down descent by lengths; work proportional to the grammar height.
inline char_t naive_access(const Slp& slp, pos_t i) {
    if (i >= slp.length())
        throw error(errc::out_of_range, "position " + std::to_string(i) + " >= " + std::to_string(slp.length()));
    symbol_t v = slp.root;
    while (!slp.rules[v].is_terminal()) {
        symbol_t l = slp.rules[v].left();
        if (i < slp.lengths[l]) {
            v = l;
        } else {
            i -= slp.lengths[l];
            v = slp.rules[v].right();
        }
    }
    return slp.rules[v].code();
}

inline pos_t naive_lce(std::span<const char_t> text, pos_t i, pos_t j) {
    if (i >= text.size() || j >= text.size())
        throw error(errc::out_of_range, "lce position outside text of length " + std::to_string(text.size()));
    pos_t l = 0;
    while (i + l < text.size() && j + l < text.size() && text[i + l] == text[j + l]) ++l;
    return l;
}

inline Text to_text(std::string_view s) {
    Text t;
    t.reserve(s.size());
    for (unsigned char c : s) t.push_back(c);
    return t;
}

// Narrows to bytes; codes above 255 become '?'.
inline std::string to_string(std::span<const char_t> t) {
    std::string s;
    s.reserve(t.size());
    for (char_t c : t) s.push_back(c < 256 ? static_cast<char>(c) : '?');
    return s;
}

} // namespace glce

#endif
