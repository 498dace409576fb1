#pragma once

#include "nlab/word.hpp"

#include <iosfwd>
#include <string>

namespace nlab {

/// Packed bit stream (base 2 only): 16-byte header ("NLAB-BITS v1\n" plus
/// three zero pad bytes), then the bit count as a little-endian uint64,
/// then the digits packed most-significant-bit-first within each byte.
void write_packed_bits(std::ostream& out, const Word& w);
Word read_packed_bits(std::istream& in);

/// ASCII digit stream ('0'..'9' / comma form for larger bases).
void write_digits(std::ostream& out, const Word& w);

} // namespace nlab
