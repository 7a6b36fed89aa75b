#ifndef GLCE_INDEX_FILE_HPP
#define GLCE_INDEX_FILE_HPP

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "glce/block_index.hpp"
#include "glce/lce_index.hpp"

namespace glce {

// Binary index file:
//   "GLCE1" | u32 version | u32 section count
//   per section: u32 tag | u64 payload length | payload | u64 FNV-1a of tag, length and payload
// All integers little-endian; vectors are a u64 count followed by elements.

inline constexpr char index_magic[5] = {'G', 'L', 'C', 'E', '1'};
inline constexpr std::uint32_t index_version = 1;

enum class SectionTag : std::uint32_t {
    grammar = 1,
    params = 2,
    layers = 3,
    leaf_strings = 4,
    top_table = 5,
    lce = 6,
};

inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace detail {

class ByteWriter {
public:
    template <class T>
    void put(T v) {
        static_assert(std::is_unsigned_v<T>);
        for (std::size_t b = 0; b < sizeof(T); ++b) buf_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    }
    template <class T>
    void put_vec(const std::vector<T>& v) {
        put<std::uint64_t>(v.size());
        for (const T& x : v) put<T>(x);
    }
    std::string& bytes() { return buf_; }

private:
    std::string buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view s) : s_(s) {}

    template <class T>
    T get() {
        static_assert(std::is_unsigned_v<T>);
        need(sizeof(T));
        T v = 0;
        for (std::size_t b = 0; b < sizeof(T); ++b) v |= static_cast<T>(static_cast<unsigned char>(s_[pos_ + b])) << (8 * b);
        pos_ += sizeof(T);
        return v;
    }
    template <class T>
    std::vector<T> get_vec() {
        auto n = get<std::uint64_t>();
        if (n > (s_.size() - pos_) / sizeof(T)) throw error(errc::format, "vector length exceeds section");
        std::vector<T> v(n);
        for (auto& x : v) x = get<T>();
        return v;
    }
    void expect_end() const {
        if (pos_ != s_.size()) throw error(errc::format, "trailing bytes in section");
    }

private:
    void need(std::size_t k) const {
        if (s_.size() - pos_ < k) throw error(errc::format, "section truncated");
    }
    std::string_view s_;
    std::size_t pos_ = 0;
};

inline void require(bool ok, const char* what) {
    if (!ok) throw error(errc::format, what);
}

} // namespace detail

// A loaded index: always answers access, answers lce when built with it.
struct IndexBundle {
    LayeredIndex access_only;
    std::optional<LceIndex> lce;

    const LayeredIndex& access() const { return lce ? lce->base() : access_only; }
};

struct IndexCodec {
    static void write_windows(detail::ByteWriter& w, const std::vector<WindowEntry>& ws) {
        w.put<std::uint64_t>(ws.size());
        for (const auto& e : ws) {
            w.put<std::uint32_t>(e.first_block);
            w.put<std::uint64_t>(e.offset);
        }
    }
    static std::vector<WindowEntry> read_windows(detail::ByteReader& r) {
        auto n = r.get<std::uint64_t>();
        std::vector<WindowEntry> ws;
        for (std::uint64_t i = 0; i < n; ++i) {
            WindowEntry e;
            e.first_block = r.get<std::uint32_t>();
            e.offset = r.get<std::uint64_t>();
            ws.push_back(e);
        }
        return ws;
    }

    static std::vector<std::pair<SectionTag, std::string>> encode(const LayeredIndex& idx, const LceIndex* lce) {
        std::vector<std::pair<SectionTag, std::string>> out;
        {
            detail::ByteWriter w;
            const Slp& g = idx.grammar_;
            w.put<std::uint64_t>(g.size());
            w.put<std::uint32_t>(g.root);
            for (const Rule& r : g.rules) {
                w.put<std::uint32_t>(r.is_terminal() ? r.code() : r.left());
                w.put<std::uint32_t>(r.is_terminal() ? no_symbol : r.right());
            }
            out.emplace_back(SectionTag::grammar, std::move(w.bytes()));
        }
        {
            detail::ByteWriter w;
            w.put_vec(idx.params_.xs);
            w.put<std::uint64_t>(idx.n_);
            out.emplace_back(SectionTag::params, std::move(w.bytes()));
        }
        {
            detail::ByteWriter w;
            w.put<std::uint64_t>(idx.layers_.size());
            for (const BlockLayer& l : idx.layers_) {
                w.put<std::uint64_t>(l.x);
                w.put<std::uint64_t>(l.k_max);
                w.put_vec(l.block_length);
                w.put_vec(l.child_begin);
                w.put_vec(l.children);
                w.put_vec(l.child_start);
                w.put_vec(l.window_begin);
                write_windows(w, l.windows);
            }
            out.emplace_back(SectionTag::layers, std::move(w.bytes()));
        }
        {
            detail::ByteWriter w;
            const BlockLayer& l = idx.layers_.front();
            w.put_vec(l.leaf_begin);
            w.put_vec(l.leaf_chars);
            out.emplace_back(SectionTag::leaf_strings, std::move(w.bytes()));
        }
        {
            detail::ByteWriter w;
            w.put_vec(idx.top_blocks_);
            w.put_vec(idx.top_starts_);
            write_windows(w, idx.top_windows_);
            w.put<std::uint64_t>(idx.top_k_max_);
            out.emplace_back(SectionTag::top_table, std::move(w.bytes()));
        }
        if (lce) {
            detail::ByteWriter w;
            w.put<std::uint32_t>(lce->sep_base_);
            w.put_vec(lce->leaf_base_);
            w.put_vec(lce->leaf_full_.sa());
            w.put_vec(lce->leaf_full_.lcp());
            auto put_sparse = [&](const SparseLce& s) {
                w.put<std::uint64_t>(s.text_length());
                w.put_vec(s.positions());
                w.put_vec(s.order());
                w.put_vec(s.sampled_lcp());
            };
            put_sparse(lce->top_);
            w.put<std::uint64_t>(lce->layer_sparse_.size());
            for (const auto& ls : lce->layer_sparse_) {
                put_sparse(ls.sparse);
                w.put_vec(ls.block_base);
                w.put_vec(ls.sample_base);
            }
            out.emplace_back(SectionTag::lce, std::move(w.bytes()));
        }
        return out;
    }

    static IndexBundle decode(const std::vector<std::pair<SectionTag, std::string>>& sections) {
        auto find = [&](SectionTag t) -> const std::string* {
            for (const auto& [tag, bytes] : sections)
                if (tag == t) return &bytes;
            return nullptr;
        };
        for (auto t : {SectionTag::grammar, SectionTag::params, SectionTag::layers, SectionTag::leaf_strings, SectionTag::top_table})
            if (!find(t)) throw error(errc::format, "index file lacks a required section");

        LayeredIndex idx;
        {
            detail::ByteReader r(*find(SectionTag::grammar));
            auto n = r.get<std::uint64_t>();
            auto root = r.get<std::uint32_t>();
            std::vector<Rule> rules;
            for (std::uint64_t v = 0; v < n; ++v) {
                auto a = r.get<std::uint32_t>(), b = r.get<std::uint32_t>();
                rules.push_back(b == no_symbol ? Rule::terminal(a) : Rule::pair(a, b));
            }
            r.expect_end();
            idx.grammar_ = Slp::make(std::move(rules), root);
        }
        {
            detail::ByteReader r(*find(SectionTag::params));
            idx.params_.xs = r.get_vec<pos_t>();
            idx.n_ = r.get<std::uint64_t>();
            r.expect_end();
            idx.params_.check();
            detail::require(idx.n_ == idx.grammar_.length(), "length disagrees with grammar");
        }
        {
            detail::ByteReader r(*find(SectionTag::layers));
            auto k = r.get<std::uint64_t>();
            detail::require(k == idx.params_.k(), "layer count disagrees with parameters");
            for (std::uint64_t i = 0; i < k; ++i) {
                BlockLayer l;
                l.x = r.get<std::uint64_t>();
                l.k_max = r.get<std::uint64_t>();
                l.block_length = r.get_vec<pos_t>();
                l.child_begin = r.get_vec<std::uint32_t>();
                l.children = r.get_vec<std::uint32_t>();
                l.child_start = r.get_vec<pos_t>();
                l.window_begin = r.get_vec<std::uint32_t>();
                l.windows = read_windows(r);
                idx.layers_.push_back(std::move(l));
            }
            r.expect_end();
        }
        {
            detail::ByteReader r(*find(SectionTag::leaf_strings));
            idx.layers_.front().leaf_begin = r.get_vec<std::uint64_t>();
            idx.layers_.front().leaf_chars = r.get_vec<char_t>();
            r.expect_end();
        }
        {
            detail::ByteReader r(*find(SectionTag::top_table));
            idx.top_blocks_ = r.get_vec<std::uint32_t>();
            idx.top_starts_ = r.get_vec<pos_t>();
            idx.top_windows_ = read_windows(r);
            idx.top_k_max_ = r.get<std::uint64_t>();
            r.expect_end();
        }
        check_layout(idx);

        IndexBundle bundle;
        const std::string* lce_bytes = find(SectionTag::lce);
        if (!lce_bytes) {
            bundle.access_only = std::move(idx);
            return bundle;
        }

        LceIndex lce;
        detail::ByteReader r(*lce_bytes);
        lce.sep_base_ = r.get<std::uint32_t>();
        lce.leaf_base_ = r.get_vec<pos_t>();
        auto sa = r.get_vec<index_t>();
        auto lcp = r.get_vec<index_t>();
        detail::require(sa.size() == lcp.size() && !sa.empty(), "leaf LCE arrays disagree");
        check_permutation(sa);
        lce.leaf_full_ = FullLce(std::move(sa), std::move(lcp));
        auto get_sparse = [&]() {
            auto len = r.get<std::uint64_t>();
            auto pos = r.get_vec<pos_t>();
            auto order = r.get_vec<index_t>();
            auto slcp = r.get_vec<index_t>();
            detail::require(!pos.empty() && pos.size() == order.size() && order.size() == slcp.size(), "sparse LCE arrays disagree");
            detail::require(pos.back() < len && std::is_sorted(pos.begin(), pos.end()), "sparse positions invalid");
            check_permutation(order);
            return SparseLce(len, std::move(pos), std::move(order), std::move(slcp));
        };
        lce.top_ = get_sparse();
        auto layers = r.get<std::uint64_t>();
        detail::require(layers + 1 == idx.k(), "sparse layer count disagrees");
        for (std::uint64_t i = 0; i < layers; ++i) {
            LayerSparse ls;
            ls.sparse = get_sparse();
            ls.block_base = r.get_vec<pos_t>();
            ls.sample_base = r.get_vec<std::uint64_t>();
            detail::require(ls.block_base.size() == idx.layers_[i + 1].basic_count() &&
                                ls.sample_base.size() == ls.block_base.size(),
                            "sparse block tables disagree");
            lce.layer_sparse_.push_back(std::move(ls));
        }
        r.expect_end();
        detail::require(lce.leaf_base_.size() == idx.layers_.front().basic_count(), "leaf table disagrees");
        for (pos_t x : idx.params_.xs) lce.covers_.emplace_back(DifferenceCover::square_at_most(x));
        detail::require(lce.top_.text_length() == idx.n_ &&
                            lce.top_.sample_count() == lce.covers_.back().sample_count(idx.n_),
                        "top sparse LCE disagrees with the string");
        lce.base_ = std::move(idx);
        bundle.lce = std::move(lce);
        return bundle;
    }

private:
    static void check_permutation(const std::vector<index_t>& p) {
        std::vector<char> seen(p.size(), 0);
        for (index_t x : p) {
            detail::require(x < p.size() && !seen[x], "stored order is not a permutation");
            seen[x] = 1;
        }
    }

    // Structural checks so a well-formed but inconsistent file cannot index out of bounds.
    static void check_layout(const LayeredIndex& idx) {
        using detail::require;
        const std::size_t k = idx.k();
        require(!idx.top_blocks_.empty() && idx.top_starts_.size() == idx.top_blocks_.size() + 1 &&
                    idx.top_starts_.back() == idx.n_,
                "top table malformed");
        require(idx.top_windows_.size() == (idx.n_ + idx.params_.xs.back() - 1) / idx.params_.xs.back(), "top windows malformed");
        for (const auto& w : idx.top_windows_) require(w.first_block < idx.top_blocks_.size(), "top window out of range");
        for (auto b : idx.top_blocks_) require(b < idx.layers_[k - 1].basic_count(), "top block out of range");
        for (std::size_t i = 0; i < k; ++i) {
            const BlockLayer& l = idx.layers_[i];
            require(l.x == idx.params_.xs[i], "layer parameter disagrees");
            const std::size_t d = l.basic_count();
            if (i == 0) {
                require(l.leaf_begin.size() == d + 1 && l.leaf_begin.back() == l.leaf_chars.size(), "leaf table malformed");
                for (std::size_t b = 0; b < d; ++b)
                    require(l.leaf_begin[b + 1] - l.leaf_begin[b] == l.block_length[b], "leaf length disagrees");
                continue;
            }
            const BlockLayer& below = idx.layers_[i - 1];
            require(l.child_begin.size() == d + 1 && l.child_begin.back() == l.children.size() &&
                        l.child_start.size() == l.children.size() && l.window_begin.size() == d + 1 &&
                        l.window_begin.back() == l.windows.size(),
                    "inner tables malformed");
            for (auto c : l.children) require(c < below.basic_count(), "child block out of range");
            for (std::size_t b = 0; b < d; ++b) {
                auto kids = l.children_of(b);
                auto wins = l.windows_of(b);
                require(!kids.empty() && wins.size() == (l.block_length[b] + idx.params_.xs[i - 1] - 1) / idx.params_.xs[i - 1],
                        "inner windows malformed");
                for (const auto& w : wins) require(w.first_block < kids.size(), "inner window out of range");
            }
        }
    }
};

inline void save_index(std::ostream& out, const LayeredIndex& idx, const LceIndex* lce = nullptr) {
    auto sections = IndexCodec::encode(lce ? lce->base() : idx, lce);
    detail::ByteWriter w;
    w.put<std::uint32_t>(index_version);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(sections.size()));
    out.write(index_magic, sizeof index_magic);
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    for (const auto& [tag, bytes] : sections) {
        detail::ByteWriter h;
        h.put<std::uint32_t>(static_cast<std::uint32_t>(tag));
        h.put<std::uint64_t>(bytes.size());
        out.write(h.bytes().data(), static_cast<std::streamsize>(h.bytes().size()));
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        detail::ByteWriter c;
        c.put<std::uint64_t>(fnv1a(h.bytes() + bytes));
        out.write(c.bytes().data(), static_cast<std::streamsize>(c.bytes().size()));
    }
    if (!out) throw error(errc::io, "failed writing index");
}

inline void save_index(std::ostream& out, const LceIndex& lce) { save_index(out, lce.base(), &lce); }

inline IndexBundle load_index(std::istream& in) {
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    detail::require(data.size() >= sizeof index_magic && std::memcmp(data.data(), index_magic, sizeof index_magic) == 0,
                    "not an index file (bad magic)");
    detail::ByteReader r(std::string_view(data).substr(sizeof index_magic));
    auto version = r.get<std::uint32_t>();
    if (version != index_version) throw error(errc::format, "unsupported index version " + std::to_string(version));
    auto count = r.get<std::uint32_t>();
    std::size_t at = sizeof index_magic + 8;
    std::vector<std::pair<SectionTag, std::string>> sections;
    for (std::uint32_t s = 0; s < count; ++s) {
        detail::ByteReader h(std::string_view(data).substr(at));
        auto tag = h.get<std::uint32_t>();
        auto len = h.get<std::uint64_t>();
        at += 12;
        detail::require(len <= data.size() && data.size() - at >= len + 8, "section exceeds file");
        std::string_view payload(data.data() + at, len);
        detail::ByteReader c(std::string_view(data).substr(at + len, 8));
        if (c.get<std::uint64_t>() != fnv1a(std::string_view(data).substr(at - 12, len + 12)))
            throw error(errc::checksum, "section " + std::to_string(tag) + " fails its checksum");
        detail::require(tag >= 1 && tag <= static_cast<std::uint32_t>(SectionTag::lce), "unknown section tag");
        for (const auto& [seen, unused] : sections) detail::require(seen != static_cast<SectionTag>(tag), "duplicate section");
        sections.emplace_back(static_cast<SectionTag>(tag), std::string(payload));
        at += len + 8;
    }
    detail::require(at == data.size(), "trailing bytes after last section");
    return IndexCodec::decode(sections);
}

inline void save_index(const std::filesystem::path& path, const LayeredIndex& idx, const LceIndex* lce = nullptr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io, "cannot write " + path.string());
    save_index(out, idx, lce);
}

inline void save_index(const std::filesystem::path& path, const LceIndex& lce) { save_index(path, lce.base(), &lce); }

inline IndexBundle load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io, "cannot open " + path.string());
    return load_index(in);
}

} // namespace glce

#endif
