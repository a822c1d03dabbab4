#pragma once

#include <string>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/pdag.hpp"

namespace mdag {

// A d-separation query A _||_ B | C over visible nodes. Stored with A <= B
// (as bitmask values); the relation is symmetric in A and B.
struct SepTriple {
    NodeSet a = 0, b = 0, c = 0;

    SepTriple() = default;
    SepTriple(NodeSet a_, NodeSet b_, NodeSet c_);
    auto operator<=>(const SepTriple&) const = default;
};

// A _||_ B | C after deletion of D. D empty degenerates to a SepTriple.
struct ESepQuad {
    NodeSet a = 0, b = 0, c = 0, d = 0;

    ESepQuad() = default;
    ESepQuad(NodeSet a_, NodeSet b_, NodeSet c_, NodeSet d_);
    auto operator<=>(const ESepQuad&) const = default;
};

// Decided on the canonical pDAG of g via reachability in the moralized
// ancestral graph. Throws on overlapping or empty A/B.
bool d_separated(const MDag& g, const SepTriple& t);

// Every holding triple over the visible nodes, sorted; a comparable
// fingerprint of g.
std::vector<SepTriple> all_dsep_relations(const MDag& g);

// d-separation on the subgraph with D deleted.
bool e_separated(const MDag& g, const ESepQuad& q);

// Exhaustive over disjoint quads (A, B nonempty; C, D possibly empty).
std::vector<ESepQuad> all_esep_relations(const MDag& g);

// Serialization: "0|2|1" for {a} _||_ {c} | {b}; e-sep adds "!D".
std::string to_string(const SepTriple& t);
std::string to_string(const ESepQuad& q);

// d-separation decided directly on a pDAG (sets of *visible* node indices).
// Used by the mDAG-level deciders and by latent-free Markov-class counting.
bool pdag_d_separated(const PDag& p, NodeSet a, NodeSet b, NodeSet c);

}  // namespace mdag
