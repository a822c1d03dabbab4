#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mdag/connectivity.hpp"

using namespace mdag;
using namespace mdag::testing;

TEST_CASE("districts of the worked example") {
    DistrictPartition dp = districts(districts_fixture());
    REQUIRE(dp.blocks.size() == 3);
    CHECK(dp.blocks[0] == 0b00001000);  // {d}
    CHECK(dp.blocks[1] == 0b01110000);  // {e,f,g}
    CHECK(dp.blocks[2] == 0b10000111);  // {a,b,c,h}
}

TEST_CASE("district edge cases") {
    CHECK(districts(factorizing3()).blocks ==
          std::vector<NodeSet>{0b001, 0b010, 0b100});
    CHECK(districts(saturated3()).blocks == std::vector<NodeSet>{0b111});
}

TEST_CASE("closure worked example") {
    MDag g = districts_fixture();
    // <{b,c,g}> = {a,b,c,g}
    CHECK(closure(g, 0b01000110) == 0b01000111);
    // Full node set is a fixpoint.
    CHECK(closure(g, full_set(8)) == full_set(8));
    CHECK_THROWS(closure(g, 0));
}

TEST_CASE("closure singletons of the worked example") {
    MDag g = districts_fixture();
    CHECK(closure(g, 0b01000000) == 0b01000000);            // <g> = {g}
    CHECK(closure(g, 0b00000010) == 0b00000011);            // <b> = {a,b}
    CHECK(closure(g, 0b10000010) == 0b10000011);            // <{b,h}> = {a,b,h}
    CHECK(closure(g, 0b01000010) == 0b01000011);            // <{b,g}> = {a,b,g}
}

TEST_CASE("closure is monotone") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        MDag g = random_mdag(rng, 5);
        NodeSet a = std::uniform_int_distribution<NodeSet>(1, full_set(5))(rng);
        CHECK(is_subset(a, closure(g, a)));
    }
}

TEST_CASE("dense connectedness on the worked example") {
    MDag g = districts_fixture();
    CHECK(densely_connected(g, 1, 7));   // b,h via bidirected-connected closure
    CHECK(!densely_connected(g, 1, 6));  // b,g: all three conditions fail
    CHECK_THROWS(densely_connected(g, 1, 1));
}

TEST_CASE("adjacent nodes are densely connected") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        MDag g = random_mdag(rng, 4);
        for (int u = 0; u < 4; ++u)
            for (int w = u + 1; w < 4; ++w) {
                if (g.directed.has_edge(u, w)) CHECK(densely_connected(g, u, w));
                if (g.complex.is_face(single(u) | single(w)))
                    CHECK(densely_connected(g, u, w));
            }
    }
}

TEST_CASE("densely connected pairs fingerprint") {
    CHECK(densely_connected_pairs(factorizing3()).empty());
    auto sat = densely_connected_pairs(saturated3());
    CHECK(sat.size() == 3);
    auto fixture = densely_connected_pairs(districts_fixture());
    for (auto [v, w] : fixture) CHECK(v < w);
    CHECK(std::is_sorted(fixture.begin(), fixture.end()));
}
