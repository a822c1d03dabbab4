#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mdag/graph.hpp"

namespace mdag {

// All canonical mDAGs on n nodes consistent with the fixed nodal ordering:
// the cross product of forward-edge directed structures and simplicial
// complexes (facet antichains over >= 2-element subsets).
struct Universe {
    int n = 0;
    std::vector<MDag> mdags;
    std::unordered_map<std::string, int> index;  // encoding -> position

    int size() const { return static_cast<int>(mdags.size()); }
    const MDag& operator[](int i) const { return mdags[i]; }
    int index_of(const MDag& g) const {
        auto it = index.find(g.encode());
        return it == index.end() ? -1 : it->second;
    }
};

Universe enumerate_universe(int n);

// All mDAGs on n labeled nodes with any acyclic orientation of the directed
// structure. Proof chains between ordered mDAGs may pass through members of
// this larger set, so the equivalence closure runs here.
Universe enumerate_ambient(int n);

// All facet antichains on n labeled nodes (9 for n=3, 114 for n=4).
std::vector<std::vector<NodeSet>> enumerate_complexes(int n);

}  // namespace mdag
