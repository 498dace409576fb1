#include "nlab/serialize.hpp"

#include "nlab/errors.hpp"
#include "nlab/rational.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace nlab;

TEST_CASE("packed bits round trip") {
    test::Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        Word w = test::random_word(rng, 2, rng.below(70));
        std::stringstream ss;
        write_packed_bits(ss, w);
        REQUIRE(read_packed_bits(ss) == w);
    }
}

TEST_CASE("packed header is fixed and 16 bytes") {
    std::stringstream ss;
    write_packed_bits(ss, Word::binary("1"));
    std::string raw = ss.str();
    REQUIRE(raw.size() == 16 + 8 + 1);
    CHECK(raw.substr(0, 13) == "NLAB-BITS v1\n");
    CHECK(raw[13] == '\0');
    CHECK(raw[24] == static_cast<char>(0x80)); // MSB-first packing

    std::stringstream bad("garbage");
    CHECK_THROWS_AS(read_packed_bits(bad), ValidationError);
}

TEST_CASE("packed bits reject non-binary") {
    std::stringstream ss;
    CHECK_THROWS_AS(write_packed_bits(ss, Word::parse(3, "012")), ValidationError);
}

TEST_CASE("rational rendering") {
    CHECK(fraction_string(Rat(1, 3)) == "1/3");
    CHECK(fraction_string(Rat(4, 8)) == "1/2");
    CHECK(decimal_string(Rat(1, 3)) == "0.333333333333");
    CHECK(decimal_string(Rat(1, 2)) == "0.500000000000");
    CHECK(decimal_string(Rat(2, 3)) == "0.666666666667");
    CHECK(decimal_string(Rat(0)) == "0.000000000000");
}
