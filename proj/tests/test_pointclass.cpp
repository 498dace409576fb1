#include "nlab/pointclass.hpp"

#include "nlab/errors.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace nlab;

namespace {

std::vector<Word> all_words(int base, unsigned len) {
    std::vector<Word> out;
    std::uint64_t codes = 1;
    for (unsigned i = 0; i < len; ++i) codes *= base;
    for (std::uint64_t code = 0; code < codes; ++code) {
        std::vector<std::uint8_t> digits(len);
        std::uint64_t cw = code;
        for (unsigned i = len; i-- > 0;) {
            digits[i] = static_cast<std::uint8_t>(cw % base);
            cw /= base;
        }
        out.emplace_back(base, std::move(digits));
    }
    return out;
}

} // namespace

TEST_CASE("oracle basics") {
    auto full = ClosedSetOracle::full();
    auto empty = ClosedSetOracle::empty();
    CHECK(full.answers(Word::binary("0110")));
    CHECK(!empty.answers(Word::binary("")));

    auto coord = ClosedSetOracle::coord(1, 0);
    CHECK(coord.answers(Word::binary("")));  // too short to decide: extendable
    CHECK(coord.answers(Word::binary("0"))); // ditto
    CHECK(coord.answers(Word::binary("00")));
    CHECK(!coord.answers(Word::binary("01")));
    CHECK(!coord.answers(Word::binary("0110")));

    auto point = ClosedSetOracle::singleton(EventuallyPeriodicWord::parse(2, ":01"));
    CHECK(point.answers(Word::binary("0101")));
    CHECK(!point.answers(Word::binary("11")));
    CHECK(point.contains(EventuallyPeriodicWord::parse(2, ":01")));
    CHECK(!point.contains(EventuallyPeriodicWord::parse(2, ":10")));

    auto cyl = ClosedSetOracle::cylinders(2, {Word::binary("01"), Word::binary("10")});
    CHECK(cyl.answers(Word::binary("")));
    CHECK(cyl.answers(Word::binary("0")));
    CHECK(cyl.answers(Word::binary("0111")));
    CHECK(!cyl.answers(Word::binary("00")));
    CHECK_THROWS_AS(ClosedSetOracle::cylinders(2, {}), ValidationError);
}

TEST_CASE("oracles are prefix-monotone and pruned") {
    test::Rng rng(99);
    std::vector<ClosedSetOracle> oracles = {
        ClosedSetOracle::full(),
        ClosedSetOracle::coord(2, 1),
        ClosedSetOracle::singleton(EventuallyPeriodicWord::parse(2, "1:10")),
        ClosedSetOracle::union_of({ClosedSetOracle::coord(0, 0), ClosedSetOracle::coord(1, 1)}),
    };
    for (int trial = 0; trial < 8; ++trial) {
        const unsigned depth = 1 + rng.below(4);
        std::vector<Word> allowed;
        for (const Word& w : all_words(2, depth))
            if (rng.below(2)) allowed.push_back(w);
        if (allowed.empty()) allowed.push_back(test::random_word(rng, 2, depth));
        oracles.push_back(ClosedSetOracle::cylinders(depth, std::move(allowed)));
    }
    for (const auto& oracle : oracles) {
        for (unsigned len = 0; len <= 7; ++len) {
            for (const Word& sigma : all_words(2, len)) {
                const bool ans = oracle.answers(sigma);
                if (len > 0) {
                    // prefix-monotone: answer(sigma) implies answer on prefixes
                    if (ans) REQUIRE(oracle.answers(sigma.prefix(len - 1)));
                }
                if (ans && len < 7) {
                    bool extendable = oracle.answers(sigma.concat(Word::binary("0"))) ||
                                      oracle.answers(sigma.concat(Word::binary("1")));
                    REQUIRE(extendable); // pruned
                }
            }
        }
    }
}

TEST_CASE("family query and defaults") {
    Pi03Family full = Pi03Family::all_full(2);
    Pi03Family empty = Pi03Family::all_empty(2);
    CHECK(full.query({3, 7}, Word::binary("0101")));
    CHECK(!empty.query({0, 0}, Word::binary("")));

    Pi03Family coord_fam(2, 2, true);
    coord_fam.set_entry({1, 0}, ClosedSetOracle::coord(1, 0));
    CHECK(!coord_fam.query({1, 0}, Word::binary("01")));
    CHECK(coord_fam.query({1, 0}, Word::binary("00")));
    CHECK(!coord_fam.query({1, 0}, Word::binary("0110")));
    CHECK(coord_fam.query({5, 5}, Word::binary("0110"))); // default full

    CHECK_THROWS_AS(coord_fam.query({1}, Word::binary("0")), ValidationError);
}

TEST_CASE("monotonize") {
    // F_{0,0} = {x(0)=0}, F_{0,1} = {x(0)=1}: the monotonized (0,1) entry
    // answers true on both
    Pi03Family fam(2, 2, false);
    fam.set_entry({0, 0}, ClosedSetOracle::coord(0, 0));
    fam.set_entry({0, 1}, ClosedSetOracle::coord(0, 1));
    Pi03Family mono = monotonize(fam);
    CHECK(mono.monotonized());
    CHECK(mono.query({0, 0}, Word::binary("0")));
    CHECK(!mono.query({0, 0}, Word::binary("1")));
    CHECK(mono.query({0, 1}, Word::binary("0")));
    CHECK(mono.query({0, 1}, Word::binary("1")));
    // beyond the stored range the whole-row union answers
    CHECK(mono.query({0, 9}, Word::binary("0")));
    CHECK(mono.query({0, 9}, Word::binary("1")));
    // other rows follow the default
    CHECK(!mono.query({3, 0}, Word::binary("0")));

    // idempotent and query-preserving at n = 0
    Pi03Family mono2 = monotonize(mono);
    for (std::uint64_t m = 0; m < 4; ++m)
        for (const Word& sigma : all_words(2, 3))
            REQUIRE(mono2.query({m, 0}, sigma) == mono.query({m, 0}, sigma));

    // n-monotonicity
    test::Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::uint64_t m = rng.below(3), n = rng.below(4);
        Word sigma = test::random_word(rng, 2, rng.below(5));
        if (mono.query({m, n}, sigma)) REQUIRE(mono.query({m, n + 1}, sigma));
    }

    Pi03Family empty_default = monotonize(Pi03Family::all_empty(2));
    CHECK(!empty_default.query({0, 0}, Word::binary("")));
}

TEST_CASE("ground truth membership") {
    EventuallyPeriodicWord zeros = EventuallyPeriodicWord::parse(2, ":0");
    EventuallyPeriodicWord alt = EventuallyPeriodicWord::parse(2, ":01");
    CHECK(ground_truth_member(Pi03Family::all_full(2), zeros));
    CHECK(!ground_truth_member(Pi03Family::all_empty(2), zeros));

    // F_{m,n} = {x : x(m)=0} for m <= 2 (all n), default full beyond
    Pi03Family fam(2, 2, true);
    for (std::uint64_t m = 0; m <= 2; ++m)
        for (std::uint64_t n = 0; n <= 2; ++n)
            fam.set_entry({m, n}, ClosedSetOracle::coord(m, 0));
    CHECK(ground_truth_member(fam, zeros));
    CHECK(!ground_truth_member(fam, alt)); // fails at m = 1
}

TEST_CASE("interleave intersection is conjunction") {
    EventuallyPeriodicWord zeros = EventuallyPeriodicWord::parse(2, ":0");
    EventuallyPeriodicWord ones = EventuallyPeriodicWord::parse(2, ":1");
    EventuallyPeriodicWord alt = EventuallyPeriodicWord::parse(2, ":01");
    std::vector<EventuallyPeriodicWord> points = {zeros, ones, alt,
                                                  EventuallyPeriodicWord::parse(2, "011:10")};

    auto coord_family = [](std::uint64_t i, std::uint8_t d) {
        Pi03Family fam(2, 2, true);
        for (std::uint64_t m = 0; m <= 3; ++m)
            for (std::uint64_t n = 0; n <= 1; ++n) fam.set_entry({m, n}, ClosedSetOracle::coord(i, d));
        return fam;
    };
    std::vector<Pi03Family> families = {Pi03Family::all_full(2), Pi03Family::all_empty(2),
                                        coord_family(0, 0), coord_family(1, 1)};
    int combos = 0;
    for (const auto& L : families)
        for (const auto& F : families) {
            Pi03Family G = interleave_intersection(L, F);
            for (const auto& x : points) {
                ++combos;
                REQUIRE(ground_truth_member(G, x) ==
                        (ground_truth_member(L, x) && ground_truth_member(F, x)));
            }
        }
    CHECK(combos >= 20);

    // identity element: L full leaves F's answers intact on fixture points
    Pi03Family G = interleave_intersection(Pi03Family::all_full(2), coord_family(0, 0));
    for (const auto& x : points)
        REQUIRE(ground_truth_member(G, x) == ground_truth_member(coord_family(0, 0), x));
}

TEST_CASE("family documents") {
    Pi03Family full = family_from_json(R"({"arity":2, "base":2, "default":"full", "entries":[]})");
    CHECK(full.query({0, 0}, Word::binary("01")));
    CHECK(ground_truth_member(full, EventuallyPeriodicWord::parse(2, ":0")));

    Pi03Family coord = family_from_json(
        R"({"arity":2, "base":2, "default":"full",
            "entries":[{"m":1,"n":0,"type":"coord","i":1,"digit":0}]})");
    CHECK(coord.query({1, 0}, Word::binary("00")));
    CHECK(!coord.query({1, 0}, Word::binary("01")));

    CHECK_THROWS_AS(family_from_json(
                        R"({"arity":2, "base":2, "default":"full",
                            "entries":[{"m":0,"n":0,"type":"coord","i":0,"digit":2}]})"),
                    ValidationError);
    CHECK_THROWS_AS(family_from_json(R"({"arity":2, "base":2})"), ValidationError);
    CHECK_THROWS_AS(family_from_json(R"(not json)"), ValidationError);
    CHECK_THROWS_AS(family_from_json(
                        R"({"arity":2, "base":2, "default":"full",
                            "entries":[{"m":0,"n":0,"type":"cylinders","depth":2,"allowed":[]}]})"),
                    ValidationError);

    // triple-indexed documents use 1-based k
    Pi03Family triple = family_from_json(
        R"({"arity":3, "base":2, "default":"full",
            "entries":[{"k":1,"m":0,"n":0,"type":"empty"}]})");
    CHECK(!triple.query({0, 0, 0}, Word::binary("")));
    CHECK(triple.query({1, 0, 0}, Word::binary("")));
    CHECK_THROWS_AS(family_from_json(
                        R"({"arity":3, "base":2, "default":"full",
                            "entries":[{"k":0,"m":0,"n":0,"type":"empty"}]})"),
                    ValidationError);

    // round trip
    std::string doc = family_to_json(coord);
    Pi03Family again = family_from_json(doc);
    CHECK(again.query({1, 0}, Word::binary("00")));
    CHECK(!again.query({1, 0}, Word::binary("01")));
}
