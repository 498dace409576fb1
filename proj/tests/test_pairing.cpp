#include "nlab/pairing.hpp"

#include <doctest.h>

using namespace nlab;

TEST_CASE("pair evaluates the Cantor formula") {
    CHECK(pair_nat(0, 0) == 0);
    CHECK(pair_nat(1, 0) == 1);
    CHECK(pair_nat(0, 1) == 2);
    CHECK(pair_nat(1, 1) == 4);
}

TEST_CASE("unpair inverts pair") {
    CHECK(unpair_nat(0) == std::pair<std::uint64_t, std::uint64_t>{0, 0});
    CHECK(unpair_nat(2) == std::pair<std::uint64_t, std::uint64_t>{0, 1});
    CHECK(unpair_nat(4) == std::pair<std::uint64_t, std::uint64_t>{1, 1});
    for (std::uint64_t p = 0; p < 1000000; ++p) {
        auto [m, n] = unpair_nat(p);
        REQUIRE(pair_nat(m, n) == p);
    }
    for (std::uint64_t m = 0; m < 1000; ++m)
        for (std::uint64_t n = 0; n < 1000; ++n) {
            auto [mm, nn] = unpair_nat(pair_nat(m, n));
            REQUIRE(mm == m);
            REQUIRE(nn == n);
        }
}

TEST_CASE("sections are strictly increasing in n") {
    for (std::uint64_t m = 0; m < 100; ++m)
        for (std::uint64_t n = 0; n < 100; ++n)
            REQUIRE(pair_nat(m, n + 1) > pair_nat(m, n));
}

TEST_CASE("triple composes pair") {
    CHECK(triple_nat(0, 0, 0) == 0);
    CHECK(triple_nat(0, 0, 1) == 5); // pair(0, pair(0,1)) = pair(0,2)
    CHECK(triple_nat(1, 0, 0) == 1);
    for (std::uint64_t t = 0; t < 100000; ++t) {
        auto [k, m, n] = untriple_nat(t);
        REQUIRE(triple_nat(k, m, n) == t);
    }
}
