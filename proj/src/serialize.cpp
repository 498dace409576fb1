#include "nlab/serialize.hpp"

#include "nlab/errors.hpp"

#include <array>
#include <cstring>
#include <istream>
#include <ostream>

namespace nlab {

namespace {
constexpr char kMagic[13] = {'N', 'L', 'A', 'B', '-', 'B', 'I', 'T', 'S', ' ', 'v', '1', '\n'};
}

void write_packed_bits(std::ostream& out, const Word& w) {
    if (w.base() != 2) throw ValidationError("packed bit output is base-2 only");
    std::array<char, 16> header{};
    std::memcpy(header.data(), kMagic, sizeof(kMagic));
    out.write(header.data(), header.size());
    std::uint64_t bits = w.size();
    std::array<unsigned char, 8> len{};
    for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(len.data()), len.size());
    unsigned char byte = 0;
    int filled = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        byte = static_cast<unsigned char>((byte << 1) | w[i]);
        if (++filled == 8) {
            out.put(static_cast<char>(byte));
            byte = 0;
            filled = 0;
        }
    }
    if (filled > 0) {
        byte = static_cast<unsigned char>(byte << (8 - filled));
        out.put(static_cast<char>(byte));
    }
}

Word read_packed_bits(std::istream& in) {
    std::array<char, 16> header{};
    in.read(header.data(), header.size());
    if (!in || std::memcmp(header.data(), kMagic, sizeof(kMagic)) != 0)
        throw ValidationError("bad packed-bits header");
    std::array<unsigned char, 8> len{};
    in.read(reinterpret_cast<char*>(len.data()), len.size());
    if (!in) throw ValidationError("truncated packed-bits length");
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | len[i];
    std::vector<std::uint8_t> digits;
    digits.reserve(bits);
    unsigned char byte = 0;
    for (std::uint64_t i = 0; i < bits; ++i) {
        if (i % 8 == 0) {
            int c = in.get();
            if (c < 0) throw ValidationError("truncated packed-bits payload");
            byte = static_cast<unsigned char>(c);
        }
        digits.push_back((byte >> (7 - (i % 8))) & 1);
    }
    return Word(2, std::move(digits));
}

void write_digits(std::ostream& out, const Word& w) {
    if (w.base() <= 10) {
        for (std::size_t i = 0; i < w.size(); ++i) out.put(static_cast<char>('0' + w[i]));
    } else {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out.put(',');
            out << int(w[i]);
        }
    }
}

} // namespace nlab
