#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace nlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Renders a rational as "num/den" (canonical lowest terms, den >= 1).
inline std::string fraction_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Decimal rendering with `places` digits after the point, round-half-up.
/// Exact rationals remain the source of truth; this is display only.
inline std::string decimal_string(const Rat& r, unsigned places = 12) {
    Int num = numerator(r);
    Int den = denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    Int scale = 1;
    for (unsigned i = 0; i < places; ++i) scale *= 10;
    Int scaled = (num * scale * 2 + den) / (den * 2); // round half up
    Int whole = scaled / scale;
    Int frac = scaled % scale;
    std::string fs = frac.str();
    fs.insert(fs.begin(), places - fs.size(), '0');
    return (neg ? "-" : "") + whole.str() + "." + fs;
}

/// 2^{-p} as an exact rational.
inline Rat pow2_neg(unsigned p) {
    Int den = Int(1) << p;
    return Rat(1, den);
}

/// b^{-k} as an exact rational.
inline Rat pow_neg(unsigned base, unsigned k) {
    Int den = 1;
    for (unsigned i = 0; i < k; ++i) den *= base;
    return Rat(1, den);
}

} // namespace nlab
