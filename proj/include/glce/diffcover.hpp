#ifndef GLCE_DIFFCOVER_HPP
#define GLCE_DIFFCOVER_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "glce/error.hpp"
#include "glce/slp.hpp"

namespace glce {

// The cover {0, ..., s-1} U {i*s mod tau : i = 1..s} for tau = s^2, of size 2s - 1.
class DifferenceCover {
public:
    DifferenceCover() = default;

    explicit DifferenceCover(pos_t tau) : tau_(tau) {
        if (tau < 4) throw error(errc::too_small, "difference cover modulus must be at least 4");
        s_ = isqrt(tau);
        if (s_ * s_ != tau) throw error(errc::not_perfect_square, std::to_string(tau) + " is not a perfect square");
        member_.assign(tau, 0);
        for (pos_t r = 0; r < s_; ++r) member_[r] = 1;
        for (pos_t i = 1; i <= s_; ++i) member_[(i * s_) % tau] = 1;
        rank_.assign(tau + 1, 0);
        for (pos_t r = 0; r < tau; ++r) {
            if (member_[r]) elements_.push_back(r);
            rank_[r + 1] = static_cast<std::uint32_t>(elements_.size());
        }
    }

    static pos_t isqrt(pos_t v) {
        auto s = static_cast<pos_t>(std::sqrt(static_cast<double>(v)));
        while (s * s > v) --s;
        while ((s + 1) * (s + 1) <= v) ++s;
        return s;
    }

    // Largest perfect square <= x, at least 4.
    static pos_t square_at_most(pos_t x) {
        pos_t s = std::max<pos_t>(2, isqrt(x));
        return s * s;
    }

    pos_t tau() const noexcept { return tau_; }
    pos_t root() const noexcept { return s_; }
    const std::vector<pos_t>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }

    bool contains(pos_t residue) const { return residue < tau_ && member_[residue]; }
    bool is_sampled(pos_t pos) const { return member_[pos % tau_]; }

    // (a, b) in the cover with (b - a) mod tau = d. Writing d = q*s + r, the pair
    // is (0, q*s) when r = 0 and (s - r, (q + 1)*s mod tau) otherwise.
    std::pair<pos_t, pos_t> cover_pair(pos_t d) const {
        if (d >= tau_) throw error(errc::out_of_range, "distance " + std::to_string(d) + " >= tau");
        pos_t r = d % s_;
        if (r == 0) return {0, d};
        return {s_ - r, (s_ - r + d) % tau_};
    }

    // Shifts i and j by the same delta in (0, tau] so both land on sampled
    // positions. Not necessarily the smallest such shift.
    std::pair<pos_t, pos_t> align(pos_t i, pos_t j) const {
        pos_t d = (j % tau_ + tau_ - i % tau_) % tau_;
        auto [a, b] = cover_pair(d);
        (void)b;
        pos_t delta = (a + tau_ - i % tau_) % tau_;
        if (delta == 0) delta = tau_;
        return {i + delta, j + delta};
    }

    // Sampled positions of [0, len) are numbered in increasing order.
    std::uint64_t sample_index(pos_t pos) const { return (pos / tau_) * size() + rank_[pos % tau_]; }
    std::uint64_t sample_count(pos_t len) const { return (len / tau_) * size() + rank_[len % tau_]; }

    std::vector<pos_t> samples(pos_t len, pos_t base = 0) const {
        std::vector<pos_t> out;
        out.reserve(sample_count(len));
        for (pos_t q = 0; q < len; q += tau_)
            for (pos_t e : elements_)
                if (q + e < len) out.push_back(base + q + e);
        return out;
    }

private:
    pos_t tau_ = 0;
    pos_t s_ = 0;
    std::vector<pos_t> elements_;
    std::vector<char> member_;
    std::vector<std::uint32_t> rank_; // rank_[r] = |{e in cover : e < r}|
};

} // namespace glce

#endif
