#ifndef GLCE_GRAMMAR_IO_HPP
#define GLCE_GRAMMAR_IO_HPP

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "glce/slp.hpp"

namespace glce {

// Text format:
//   SLP <n> <root>
//   <id> -> '<char>'      single UTF-8 scalar, \xNN, or \u{HEX}
//   <id> -> <id> <id>
// '#' outside a character literal starts a comment. Ids are dense 0..n-1 and
// may appear in any order; the reader renumbers into topological order.

namespace detail {

class LineParser {
public:
    LineParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw error(errc::parse_error, "line " + std::to_string(line_) + ": " + what);
    }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    void expect(std::string_view tok) {
        skip_ws();
        if (s_.substr(pos_, tok.size()) != tok) fail("expected '" + std::string(tok) + "'");
        pos_ += tok.size();
    }
    std::uint64_t number() {
        skip_ws();
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc{}) fail("expected a number");
        pos_ = static_cast<std::size_t>(p - s_.data());
        return v;
    }
    char_t char_literal() {
        expect("'");
        if (pos_ >= s_.size()) fail("unterminated character literal");
        char_t code = 0;
        if (s_[pos_] == '\\') {
            ++pos_;
            if (pos_ < s_.size() && s_[pos_] == 'x') {
                ++pos_;
                code = hex(2, 2);
            } else if (s_.substr(pos_, 2) == "u{") {
                pos_ += 2;
                code = hex(1, 8);
                if (pos_ >= s_.size() || s_[pos_] != '}') fail("unterminated \\u{ escape");
                ++pos_;
            } else {
                fail("unknown escape");
            }
        } else {
            code = utf8();
        }
        if (pos_ >= s_.size() || s_[pos_] != '\'') fail("expected closing quote");
        ++pos_;
        return code;
    }

private:
    char_t hex(std::size_t min_digits, std::size_t max_digits) {
        std::size_t start = pos_;
        char_t v = 0;
        while (pos_ < s_.size() && pos_ - start < max_digits && std::isxdigit(static_cast<unsigned char>(s_[pos_]))) {
            char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s_[pos_++])));
            v = v * 16 + static_cast<char_t>(c <= '9' ? c - '0' : c - 'a' + 10);
        }
        if (pos_ - start < min_digits) fail("bad hex escape");
        return v;
    }
    char_t utf8() {
        auto b0 = static_cast<unsigned char>(s_[pos_++]);
        if (b0 < 0x80) return b0;
        int extra = b0 >= 0xF0 ? 3 : b0 >= 0xE0 ? 2 : b0 >= 0xC0 ? 1 : -1;
        if (extra < 0 || b0 >= 0xF8) fail("invalid UTF-8 lead byte");
        char_t v = b0 & (0x3F >> extra);
        for (int k = 0; k < extra; ++k) {
            if (pos_ >= s_.size()) fail("truncated UTF-8 sequence");
            auto b = static_cast<unsigned char>(s_[pos_++]);
            if ((b & 0xC0) != 0x80) fail("invalid UTF-8 continuation byte");
            v = (v << 6) | (b & 0x3F);
        }
        return v;
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

inline std::string format_char(char_t c) {
    char buf[24];
    if (c >= 0x20 && c < 0x7F && c != '\'' && c != '\\' && c != '#') return std::string(1, static_cast<char>(c));
    if (c < 0x100) {
        std::snprintf(buf, sizeof buf, "\\x%02X", static_cast<unsigned>(c));
    } else {
        std::snprintf(buf, sizeof buf, "\\u{%X}", static_cast<unsigned>(c));
    }
    return buf;
}

} // namespace detail

inline Slp read_grammar(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::uint64_t> n;
    std::uint64_t root = 0;
    std::vector<std::optional<Rule>> raw;

    while (std::getline(in, line)) {
        ++lineno;
        detail::LineParser p(line, lineno);
        if (p.at_end()) continue;
        if (!n) {
            p.expect("SLP");
            n = p.number();
            root = p.number();
            if (!p.at_end()) p.fail("trailing characters after header");
            if (*n == 0) p.fail("grammar must have at least one rule");
            if (*n > std::numeric_limits<symbol_t>::max() - 1) p.fail("too many rules");
            raw.assign(*n, std::nullopt);
            continue;
        }
        std::uint64_t id = p.number();
        p.expect("->");
        Rule r = Rule::terminal(0);
        if (p.peek('\'')) {
            r = Rule::terminal(p.char_literal());
        } else {
            std::uint64_t l = p.number(), rr = p.number();
            if (l >= *n || rr >= *n)
                throw error(errc::unknown_symbol, "line " + std::to_string(lineno) + ": reference to undefined symbol");
            r = Rule::pair(static_cast<symbol_t>(l), static_cast<symbol_t>(rr));
        }
        if (!p.at_end()) p.fail("trailing characters");
        if (id >= *n) throw error(errc::unknown_symbol, "line " + std::to_string(lineno) + ": rule id out of range");
        if (raw[id]) p.fail("symbol " + std::to_string(id) + " defined twice");
        raw[id] = r;
    }
    if (!n) throw error(errc::parse_error, "missing 'SLP <n> <root>' header");
    for (std::size_t v = 0; v < raw.size(); ++v)
        if (!raw[v]) throw error(errc::parse_error, "symbol " + std::to_string(v) + " is never defined");
    if (root >= *n) throw error(errc::bad_root, "root " + std::to_string(root) + " is not a rule");

    // Post-order renumbering; identity when the input is already topological.
    const std::size_t count = raw.size();
    std::vector<symbol_t> id(count, no_symbol);
    std::vector<char> state(count, 0);
    std::vector<Rule> rules;
    rules.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        if (state[s]) continue;
        std::vector<std::pair<symbol_t, int>> stack{{static_cast<symbol_t>(s), 0}};
        state[s] = 1;
        while (!stack.empty()) {
            auto& [v, child] = stack.back();
            const Rule& r = *raw[v];
            if (!r.is_terminal() && child < 2) {
                symbol_t c = child++ == 0 ? r.left() : r.right();
                if (state[c] == 1) throw error(errc::cyclic_reference, "symbol " + std::to_string(c) + " derives itself");
                if (state[c] == 0) {
                    state[c] = 1;
                    stack.emplace_back(c, 0);
                }
                continue;
            }
            state[v] = 2;
            id[v] = static_cast<symbol_t>(rules.size());
            rules.push_back(r.is_terminal() ? r : Rule::pair(id[r.left()], id[r.right()]));
            stack.pop_back();
        }
    }
    return Slp::make(std::move(rules), id[root]);
}

inline void write_grammar(const Slp& slp, std::ostream& out) {
    out << "SLP " << slp.size() << ' ' << slp.root << '\n';
    for (std::size_t v = 0; v < slp.size(); ++v) {
        const Rule& r = slp.rules[v];
        out << v << " -> ";
        if (r.is_terminal()) {
            out << '\'' << detail::format_char(r.code()) << "'\n";
        } else {
            out << r.left() << ' ' << r.right() << '\n';
        }
    }
}

inline Slp read_grammar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io, "cannot open " + path.string());
    return read_grammar(in);
}

inline void write_grammar(const Slp& slp, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw error(errc::io, "cannot write " + path.string());
    write_grammar(slp, out);
    if (!out) throw error(errc::io, "write failed for " + path.string());
}

inline Slp parse_grammar(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_grammar(in);
}

inline std::string format_grammar(const Slp& slp) {
    std::ostringstream out;
    write_grammar(slp, out);
    return out.str();
}

} // namespace glce

#endif
