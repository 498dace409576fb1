#pragma once

// Test-only oracles, deliberately written as plain scans so they stay
// independent of the library's incremental and closed-form paths.

#include "nlab/periodic.hpp"
#include "nlab/word.hpp"

#include <cstdint>
#include <vector>

namespace nlab::test {

/// Deterministic generator for seeded fixtures (stable across platforms,
/// unlike <random> distributions).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }

  private:
    std::uint64_t state_;
};

inline Word random_word(Rng& rng, int base, std::size_t len) {
    std::vector<std::uint8_t> digits(len);
    for (auto& d : digits) d = static_cast<std::uint8_t>(rng.below(base));
    return Word(base, std::move(digits));
}

/// d_alpha by direct position scan (the displayed formula, verbatim).
inline Rat brute_density(const Word& alpha, const Word& sigma) {
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i + alpha.size() < sigma.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            if (sigma[i + j] != alpha[j]) { match = false; break; }
        if (match) ++hits;
    }
    return Rat(hits, sigma.size());
}

/// Modulus by forward scan: walk every prefix length out to a horizon that
/// provably covers all violations (|count - limit q| <= P+R+A, so the last
/// violation is at most (P+R+A) 2^p), remembering the last violating q.
inline std::uint64_t brute_modulus(const EventuallyPeriodicWord& w, const Word& alpha, unsigned p) {
    const std::uint64_t P = w.preperiod().size();
    const std::uint64_t R = w.period().size();
    const std::uint64_t A = alpha.size();
    const std::uint64_t horizon = (P + R + A + 1) * (std::uint64_t(1) << p) + R + 4;
    const Word buf = w.prefix(horizon + A);
    // limit numerator over denominator R
    std::uint64_t c = 0;
    for (std::uint64_t i = P; i < P + R; ++i) {
        bool match = true;
        for (std::uint64_t j = 0; j < A; ++j)
            if (buf[i + j] != alpha[j]) { match = false; break; }
        if (match) ++c;
    }
    std::uint64_t last = 0;
    bool any = false;
    // q = 0: density 0
    if ((static_cast<__int128>(c) << p) >= static_cast<__int128>(R)) {
        any = true;
        last = 0;
    }
    std::uint64_t count = 0;
    for (std::uint64_t q = 1; q <= horizon; ++q) {
        if (q > A) {
            const std::uint64_t i = q - A - 1;
            bool match = true;
            for (std::uint64_t j = 0; j < A; ++j)
                if (buf[i + j] != alpha[j]) { match = false; break; }
            if (match) ++count;
        }
        // |count/q - c/R| >= 2^-p  <=>  |count R - c q| 2^p >= R q
        __int128 diff = static_cast<__int128>(count) * R - static_cast<__int128>(c) * q;
        if (diff < 0) diff = -diff;
        if ((diff << p) >= static_cast<__int128>(R) * q) {
            any = true;
            last = q;
        }
    }
    return any ? last + 1 : 0;
}

} // namespace nlab::test
