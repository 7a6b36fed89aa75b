#ifndef GLCE_GENERATORS_HPP
#define GLCE_GENERATORS_HPP

#include <algorithm>
#include <random>
#include <variant>
#include <vector>

#include "glce/slp.hpp"

namespace glce {

// c repeated 2^k times; every rule is the square of the previous one.
struct Chain {
    char_t c = 'a';
    unsigned k = 1;
};

// f_1 = "b", f_2 = "a", f_k = f_{k-1} f_{k-2}.
struct Fibonacci {
    unsigned k = 1;
};

// Prefix of length 2^k of the Thue-Morse word over {a, b}.
struct ThueMorse {
    unsigned k = 1;
};

using SyntheticKind = std::variant<Chain, Fibonacci, ThueMorse>;

inline Slp gen_synthetic(const Chain& g) {
    std::vector<Rule> rules{Rule::terminal(g.c)};
    for (unsigned t = 1; t <= g.k; ++t) rules.push_back(Rule::pair(t - 1, t - 1));
    return Slp::make(std::move(rules), g.k);
}

inline Slp gen_synthetic(const Fibonacci& g) {
    std::vector<Rule> rules{Rule::terminal('b'), Rule::terminal('a')};
    if (g.k <= 1) return Slp::make({Rule::terminal('b')}, 0);
    for (unsigned t = 3; t <= g.k; ++t) rules.push_back(Rule::pair(t - 2, t - 3));
    return Slp::make(std::move(rules), g.k - 1);
}

inline Slp gen_synthetic(const ThueMorse& g) {
    // Symbol 2t is t_t, 2t+1 is its complement.
    std::vector<Rule> rules{Rule::terminal('a'), Rule::terminal('b')};
    for (unsigned t = 1; t <= g.k; ++t) {
        symbol_t a = 2 * (t - 1), b = a + 1;
        rules.push_back(Rule::pair(a, b));
        rules.push_back(Rule::pair(b, a));
    }
    return Slp::make(std::move(rules), 2 * g.k);
}

inline Slp gen_synthetic(const SyntheticKind& kind) {
    return std::visit([](const auto& g) { return gen_synthetic(g); }, kind);
}

// Drops rules unreachable from the root and renumbers, keeping topological order.
inline Slp compact(const Slp& slp) {
    std::vector<char> seen(slp.size(), 0);
    seen[slp.root] = 1;
    for (std::size_t v = slp.size(); v-- > 0;) {
        if (!seen[v] || slp.rules[v].is_terminal()) continue;
        seen[slp.rules[v].left()] = seen[slp.rules[v].right()] = 1;
    }
    std::vector<symbol_t> id(slp.size(), no_symbol);
    std::vector<Rule> rules;
    for (std::size_t v = 0; v < slp.size(); ++v) {
        if (!seen[v]) continue;
        const Rule& r = slp.rules[v];
        id[v] = static_cast<symbol_t>(rules.size());
        rules.push_back(r.is_terminal() ? r : Rule::pair(id[r.left()], id[r.right()]));
    }
    return Slp::make(std::move(rules), id[slp.root]);
}

// A random grammar with at most max_rules rules over `sigma` letters starting at
// 'a' and expansion length at most max_len. Children are drawn mostly from the
// most recent rules so lengths grow quickly; the result is compacted.
template <class Rng>
Slp random_slp(Rng& rng, std::size_t max_rules, unsigned sigma, pos_t max_len) {
    sigma = std::max(1u, sigma);
    std::vector<Rule> rules;
    std::vector<pos_t> len;
    for (unsigned c = 0; c < sigma && rules.size() < max_rules; ++c) {
        rules.push_back(Rule::terminal('a' + c));
        len.push_back(1);
    }
    auto pick = [&](std::size_t bound) -> symbol_t {
        std::uniform_int_distribution<std::size_t> any(0, bound - 1);
        if (bound > 8 && std::bernoulli_distribution(0.6)(rng)) {
            std::uniform_int_distribution<std::size_t> recent(bound - 8, bound - 1);
            return static_cast<symbol_t>(recent(rng));
        }
        return static_cast<symbol_t>(any(rng));
    };
    while (rules.size() < max_rules) {
        const std::size_t t = rules.size();
        symbol_t l = 0, r = 0;
        bool ok = false;
        for (int attempt = 0; attempt < 32 && !ok; ++attempt) {
            l = pick(t);
            r = pick(t);
            ok = len[l] + len[r] <= max_len;
        }
        if (!ok) break;
        rules.push_back(Rule::pair(l, r));
        len.push_back(len[l] + len[r]);
    }
    symbol_t root = static_cast<symbol_t>(std::max_element(len.begin(), len.end()) - len.begin());
    return compact(Slp::make(std::move(rules), root));
}

} // namespace glce

#endif
