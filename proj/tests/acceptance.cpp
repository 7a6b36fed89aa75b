// Acceptance run: one PASS/FAIL line per criterion, exit status is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "test_support.hpp"

using namespace glce;
using glce::testing::CorpusEntry;
using glce::testing::oracle_expand;
using glce::testing::oracle_lce;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << detail << std::endl;
    if (!ok) ++failures;
}

struct Built {
    const CorpusEntry* entry;
    Text text;
    LceIndex index;
};

std::vector<Built> build_all(const std::vector<CorpusEntry>& corpus) {
    std::vector<Built> out;
    out.reserve(corpus.size());
    for (const auto& e : corpus)
        out.push_back({&e, oracle_expand(e.slp), LceIndex::build(LayeredIndex::build(e.slp, e.params))});
    return out;
}

void criterion_access(const std::vector<Built>& all, std::size_t random_count, double build_seconds) {
    auto t0 = Clock::now();
    std::size_t checked = 0, mismatches = 0;
    for (const auto& b : all) {
        const auto n = static_cast<pos_t>(b.text.size());
        if (n > 100000) continue;
        for (pos_t i = 0; i < n; ++i) {
            ++checked;
            if (b.index.access(i) != b.text[i]) ++mismatches;
        }
    }
    double secs = seconds_since(t0) + build_seconds;
    std::ostringstream d;
    d << random_count << " random SLPs + families, " << all.size() << " indexes, " << checked << " positions, "
      << mismatches << " mismatches, " << secs << " s";
    report(1, random_count >= 200 && mismatches == 0 && secs < 300, d.str());
}

void criterion_lce(const std::vector<Built>& all) {
    std::mt19937_64 rng(2);
    std::size_t checked = 0, mismatches = 0;
    for (const auto& b : all) {
        const auto n = static_cast<pos_t>(b.text.size());
        if (n <= 2000) {
            glce::testing::LceTable table(b.text);
            for (pos_t i = 0; i < n; ++i)
                for (pos_t j = 0; j < n; ++j) {
                    ++checked;
                    if (b.index.lce(i, j) != table(i, j)) ++mismatches;
                }
        } else {
            std::uniform_int_distribution<pos_t> at(0, n - 1);
            for (int q = 0; q < 10000; ++q) {
                pos_t i = at(rng), j = at(rng);
                ++checked;
                if (b.index.lce(i, j) != oracle_lce(b.text, i, j)) ++mismatches;
            }
        }
    }
    std::ostringstream d;
    d << checked << " pairs, " << mismatches << " mismatches";
    report(2, mismatches == 0, d.str());
}

void criterion_decomposition(const std::vector<Built>& all) {
    constexpr std::size_t k_max_ceiling = 8;
    std::size_t decompositions = 0, bad_concat = 0, long_blocks = 0, worst_k = 0;
    for (const auto& b : all) {
        for (pos_t x : b.entry->params.xs) {
            BlockDecomposition d = decompose(b.entry->slp, x);
            ++decompositions;
            Text joined;
            for (std::size_t r = 0; r < d.block_count(); ++r) {
                Text piece = oracle_expand(d.slp2, d.block_roots[r]);
                if (piece.size() > x) ++long_blocks;
                joined.insert(joined.end(), piece.begin(), piece.end());
            }
            if (joined != b.text) ++bad_concat;
            worst_k = std::max(worst_k, d.k_max);
        }
        for (std::size_t layer = 1; layer <= b.index.base().k(); ++layer)
            worst_k = std::max(worst_k, b.index.base().layer(layer).k_max);
    }
    std::ostringstream d;
    d << decompositions << " decompositions, " << bad_concat << " concatenation mismatches, " << long_blocks
      << " blocks longer than X, max K = " << worst_k << " (ceiling " << k_max_ceiling << ")";
    report(3, bad_concat == 0 && long_blocks == 0 && worst_k <= k_max_ceiling, d.str());
}

void criterion_chain_trends() {
    double lo_m = 1e300, hi_m = 0, lo_d = 1e300, hi_d = 0;
    std::ostringstream d;
    for (unsigned k = 10; k <= 16; ++k) {
        Slp s = gen_synthetic(Chain{'a', k});
        const pos_t n_total = s.length();
        const auto x = static_cast<pos_t>(std::ceil(std::sqrt(double(n_total))));
        BlockDecomposition dec = decompose(s, x);
        double mx = double(dec.block_count()) * double(x) / double(n_total);
        double dn = double(dec.basic_blocks.size()) / double(s.rules.size());
        lo_m = std::min(lo_m, mx), hi_m = std::max(hi_m, mx);
        lo_d = std::min(lo_d, dn), hi_d = std::max(hi_d, dn);
    }
    d << "m*X/N in [" << lo_m << ", " << hi_m << "], d/n in [" << lo_d << ", " << hi_d << "]";
    report(4, hi_m / lo_m < 2 && hi_d / lo_d < 2, d.str());
}

void criterion_difference_cover() {
    auto t0 = Clock::now();
    std::size_t covers = 0, bad = 0;
    for (pos_t s = 2; s * s <= 10000; ++s) {
        const pos_t tau = s * s;
        DifferenceCover dc(tau);
        ++covers;
        if (dc.size() != 2 * s - 1) ++bad;
        std::vector<char> member(tau, 0);
        for (pos_t e : dc.elements()) member[e] = 1;
        for (pos_t delta = 0; delta < tau; ++delta) {
            auto [a, b] = dc.cover_pair(delta);
            if (a >= tau || b >= tau || !member[a] || !member[b] || (b + tau - a) % tau != delta) ++bad;
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << covers << " covers, " << bad << " failures, " << secs << " s";
    report(5, bad == 0 && secs < 60, d.str());
}

void criterion_flat_hops() {
    std::ostringstream d;
    std::size_t first = 0;
    bool same = true;
    for (unsigned k : {12u, 14u, 16u, 18u, 20u}) {
        Slp s = gen_synthetic(Chain{'a', k});
        LayeredIndex idx = LayeredIndex::build(s, {{8, 64}});
        std::size_t worst = 0;
        for (pos_t i = 0; i < idx.length(); ++i) {
            AccessTrace t = idx.access_instrumented(i);
            std::size_t total = 0;
            for (auto h : t.hops) total += h;
            worst = std::max(worst, total);
        }
        if (k == 12) first = worst;
        same = same && worst == first;
        d << (k == 12 ? "" : ", ") << "N=2^" << k << ": " << worst;
    }
    report(6, same, "max hops " + d.str());
}

void criterion_space_shape() {
    std::mt19937_64 rng(7);
    Text text = glce::testing::repetitive_text(rng, 100000, 1000, 4, 0.001);
    Slp s = build_grammar(text);
    const double balance = std::sqrt(double(s.length()) / double(s.rules.size()));

    std::vector<std::pair<pos_t, std::size_t>> sweep;
    for (pos_t x = 6; x <= 16384; x *= 2)
        sweep.emplace_back(x, LayeredIndex::build(s, {{x}}).space_report().total());
    std::size_t best = 0;
    for (std::size_t t = 1; t < sweep.size(); ++t)
        if (sweep[t].second < sweep[best].second) best = t;
    const bool interior = best > 0 && best + 1 < sweep.size();
    bool u_shape = interior;
    for (std::size_t t = 1; t <= best; ++t) u_shape = u_shape && sweep[t].second <= sweep[t - 1].second;
    for (std::size_t t = best + 1; t < sweep.size(); ++t) u_shape = u_shape && sweep[t].second >= sweep[t - 1].second;
    const double ratio = std::max(double(sweep[best].first) / balance, balance / double(sweep[best].first));

    std::ostringstream d;
    d << "N=" << s.length() << " n=" << s.rules.size() << " balance sqrt(N/n)=" << balance << "; bytes by X:";
    for (auto [x, bytes] : sweep) d << ' ' << x << '=' << bytes;
    d << "; U-shaped=" << (u_shape ? "yes" : "no") << ", argmin X=" << sweep[best].first << " is " << ratio
      << "x from balance (limit 4x)";
    report(7, u_shape && ratio <= 4, d.str());
}

void criterion_alignment(const std::vector<Built>& all) {
    std::mt19937_64 rng(8);
    std::size_t queries = 0, violations = 0, over_tau = 0, alignments = 0;
    for (const auto& b : all) {
        std::uniform_int_distribution<pos_t> at(0, b.index.length() - 1);
        for (int q = 0; q < 2000; ++q) {
            LceTrace trace;
            b.index.lce_instrumented(at(rng), at(rng), trace);
            ++queries;
            for (const auto& level : trace.levels) {
                violations += level.violations;
                alignments += level.alignments;
                if (level.max_unaligned > level.tau) ++over_tau;
            }
        }
    }
    std::ostringstream d;
    d << queries << " queries, " << alignments << " alignments, " << violations << " violations, " << over_tau
      << " levels over tau";
    report(8, violations == 0 && over_tau == 0, d.str());
}

void criterion_serialization(const std::vector<Built>& all) {
    std::mt19937_64 rng(9);
    std::size_t queries = 0, disagreements = 0, corruptions = 0, accepted = 0;
    for (std::size_t e = 0; e < all.size(); ++e) {
        const auto& b = all[e];
        std::ostringstream out(std::ios::binary);
        save_index(out, b.index);
        const std::string bytes = out.str();
        std::istringstream in(bytes, std::ios::binary);
        IndexBundle loaded = load_index(in);
        std::uniform_int_distribution<pos_t> at(0, b.index.length() - 1);
        for (int q = 0; q < 1000; ++q) {
            pos_t i = at(rng), j = at(rng);
            ++queries;
            if (!loaded.lce || loaded.access().access(i) != b.index.access(i) || loaded.lce->lce(i, j) != b.index.lce(i, j))
                ++disagreements;
        }
        std::uniform_int_distribution<std::size_t> byte(0, bytes.size() - 1);
        for (int t = 0; t < 20; ++t) {
            std::string bad = bytes;
            bad[byte(rng)] ^= static_cast<char>(1 + rng() % 255);
            ++corruptions;
            try {
                std::istringstream bin(bad, std::ios::binary);
                load_index(bin);
                ++accepted;
            } catch (const error& err) {
                if (err.code() != errc::checksum && err.code() != errc::format) ++accepted;
            }
        }
    }
    std::ostringstream d;
    d << queries << " queries, " << disagreements << " disagreements; " << corruptions << " corrupted files, "
      << accepted << " accepted";
    report(9, disagreements == 0 && accepted == 0, d.str());
}

} // namespace

int main() {
    constexpr std::size_t random_count = 220;
    auto t0 = Clock::now();
    auto corpus = glce::testing::make_corpus(2024, random_count, 50000, 200);
    std::size_t randoms = 0;
    for (const auto& e : corpus) randoms += e.name.rfind("random", 0) == 0;
    auto all = build_all(corpus);
    double build_seconds = seconds_since(t0);

    criterion_access(all, randoms, build_seconds);
    criterion_lce(all);
    criterion_decomposition(all);
    criterion_chain_trends();
    criterion_difference_cover();
    criterion_flat_hops();
    criterion_space_shape();
    criterion_alignment(all);
    criterion_serialization(all);
    return failures;
}
