#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mdag/separation.hpp"

using namespace mdag;
using namespace mdag::testing;

TEST_CASE("textbook collider") {
    MDag g = collider_c();  // a -> c <- b
    CHECK(d_separated(g, SepTriple(0b001, 0b010, 0)));
    CHECK(!d_separated(g, SepTriple(0b001, 0b010, 0b100)));
}

TEST_CASE("chain with and without a confounder presents a _||_ c | b") {
    // Two observationally equivalent structures whose only relation is
    // a _||_ c | b: the plain chain, and b->c with an a-b confounder.
    MDag chain = chain3();
    MDag conf = make_mdag(3, {{1, 2}}, {0b011});
    for (const MDag& g : {chain, conf}) {
        CHECK(d_separated(g, SepTriple(0b001, 0b100, 0b010)));
        auto rels = all_dsep_relations(g);
        REQUIRE(rels.size() == 1);
        CHECK(rels[0] == SepTriple(0b001, 0b100, 0b010));
    }
}

TEST_CASE("named 3-node fingerprints") {
    auto rels = [](const MDag& g) { return all_dsep_relations(g); };
    CHECK(rels(fork3()) == std::vector<SepTriple>{SepTriple(0b010, 0b100, 0b001)});
    CHECK(rels(chain3()) == std::vector<SepTriple>{SepTriple(0b001, 0b100, 0b010)});
    CHECK(rels(saturated3()).empty());
    CHECK(rels(triangle()).empty());
    CHECK(rels(evans()).empty());
    CHECK(rels(instrumental_bac()).empty());
    CHECK(rels(instrumental_cab()).empty());
    CHECK(rels(instrumental_abc()).empty());
    CHECK(rels(collider_a()) == std::vector<SepTriple>{SepTriple(0b010, 0b100, 0)});
    CHECK(rels(collider_b()) == std::vector<SepTriple>{SepTriple(0b001, 0b100, 0)});
    CHECK(rels(collider_c()) == std::vector<SepTriple>{SepTriple(0b001, 0b010, 0)});
}

TEST_CASE("decider agrees with the path-enumeration oracle") {
    std::mt19937 rng(23);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        MDag g = random_mdag(rng, 4);
        PDag p = canonical_pdag(g);
        for (int code = 0; code < 256; ++code) {
            NodeSet a = 0, b = 0, c = 0;
            int x = code;
            for (int v = 0; v < 4; ++v, x /= 4) {
                switch (x % 4) {
                    case 1: a = with(a, v); break;
                    case 2: b = with(b, v); break;
                    case 3: c = with(c, v); break;
                }
            }
            if (a == 0 || b == 0 || a > b) continue;
            bool fast = d_separated(g, SepTriple(a, b, c));
            bool slow = dsep_path_oracle(p, a, b, c);
            CHECK(fast == slow);
            ++checked;
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("overlapping sets are rejected") {
    CHECK_THROWS(SepTriple(0b011, 0b010, 0));
    CHECK_THROWS(SepTriple(0b001, 0b010, 0b011));
    CHECK_THROWS(ESepQuad(0b001, 0b010, 0b100, 0b100));
}

TEST_CASE("e-separation definitional equivalence") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        MDag g = random_mdag(rng, 4);
        for (int code = 0; code < 625; ++code) {
            NodeSet a = 0, b = 0, c = 0, d = 0;
            int x = code;
            for (int v = 0; v < 4; ++v, x /= 5) {
                switch (x % 5) {
                    case 1: a = with(a, v); break;
                    case 2: b = with(b, v); break;
                    case 3: c = with(c, v); break;
                    case 4: d = with(d, v); break;
                }
            }
            if (a == 0 || b == 0 || a > b) continue;
            ESepQuad q(a, b, c, d);
            // Definition: d-separation in the subgraph with D deleted.
            MDag sub = induced_subgraph(g, full_set(4) & ~d);
            std::vector<int> map;
            for (int v = 0; v < 4; ++v)
                if (!contains(d, v)) map.push_back(v);
            auto remap = [&](NodeSet s) {
                NodeSet out = 0;
                for (size_t i = 0; i < map.size(); ++i)
                    if (contains(s, map[i])) out = with(out, static_cast<int>(i));
                return out;
            };
            bool direct = e_separated(g, q);
            bool via_subgraph =
                d_separated(sub, SepTriple(remap(a), remap(b), remap(c)));
            CHECK(direct == via_subgraph);
        }
    }
}

TEST_CASE("nonadjacent nodes are e-separated after deleting the rest") {
    MDag g = make_mdag(4, {{0, 1}, {1, 3}}, {0b0110});
    // 0 and 3 are nonadjacent in the skeleton.
    CHECK(e_separated(g, ESepQuad(0b0001, 0b1000, 0, 0b0110)));
    // 0 and 1 share an edge: never e-separated by deletion of the rest.
    CHECK(!e_separated(g, ESepQuad(0b0001, 0b0010, 0, 0b1100)));
}

TEST_CASE("e-sep set contains the d-sep set at D=0") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        MDag g = random_mdag(rng, 4);
        auto ds = all_dsep_relations(g);
        auto es = all_esep_relations(g);
        for (const auto& t : ds) {
            ESepQuad q(t.a, t.b, t.c, 0);
            CHECK(std::binary_search(es.begin(), es.end(), q));
        }
    }
}

TEST_CASE("saturated 3-node mDAG has empty e-sep set") {
    CHECK(all_esep_relations(saturated3()).empty());
}

TEST_CASE("relation serialization") {
    CHECK(to_string(SepTriple(0b001, 0b100, 0b010)) == "0|2|1");
    CHECK(to_string(ESepQuad(0b0001, 0b0100, 0b0010, 0b1000)) == "0|2|1!3");
    CHECK(to_string(ESepQuad(0b0001, 0b0100, 0, 0)) == "0|2|");
}
