#pragma once

#include <cmath>
#include <cstdint>
#include <tuple>
#include <utility>

namespace nlab {

/// Cantor pairing <m,n> = (m+n)(m+n+1)/2 + n. Bijective, and for fixed m
/// the section n |-> <m,n> is strictly increasing, which is all the stage
/// machinery relies on. Fixed project-wide.
inline std::uint64_t pair_nat(std::uint64_t m, std::uint64_t n) {
    std::uint64_t s = m + n;
    return s * (s + 1) / 2 + n;
}

inline std::pair<std::uint64_t, std::uint64_t> unpair_nat(std::uint64_t p) {
    // Largest s with s(s+1)/2 <= p.
    std::uint64_t s = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(p) + 1.0) - 1.0) / 2.0);
    while (s * (s + 1) / 2 > p) --s;
    while ((s + 1) * (s + 2) / 2 <= p) ++s;
    std::uint64_t n = p - s * (s + 1) / 2;
    return {s - n, n};
}

/// triple(k,m,n) = pair(k, pair(m,n)).
inline std::uint64_t triple_nat(std::uint64_t k, std::uint64_t m, std::uint64_t n) {
    return pair_nat(k, pair_nat(m, n));
}

inline std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> untriple_nat(std::uint64_t t) {
    auto [k, q] = unpair_nat(t);
    auto [m, n] = unpair_nat(q);
    return {k, m, n};
}

} // namespace nlab
