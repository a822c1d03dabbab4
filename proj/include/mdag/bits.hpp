#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace mdag {

// Node index into the fixed nodal ordering.
using NodeId = int;

// Set of visible nodes as a bitmask. The library caps n at 16 so every
// NodeSet fits comfortably in 32 bits.
using NodeSet = uint32_t;

constexpr int kMaxNodes = 16;

inline int set_size(NodeSet s) { return std::popcount(s); }
inline bool contains(NodeSet s, NodeId v) { return (s >> v) & 1u; }
inline NodeSet with(NodeSet s, NodeId v) { return s | (NodeSet(1) << v); }
inline NodeSet without(NodeSet s, NodeId v) { return s & ~(NodeSet(1) << v); }
inline bool is_subset(NodeSet a, NodeSet b) { return (a & ~b) == 0; }
inline NodeSet full_set(int n) { return (NodeSet(1) << n) - 1; }
inline NodeSet single(NodeId v) { return NodeSet(1) << v; }
inline int lowest_bit(NodeSet s) { return std::countr_zero(s); }

// Calls f(v) for each node in s, in increasing index order.
template <typename F>
inline void for_each_node(NodeSet s, F&& f) {
    while (s) {
        NodeId v = std::countr_zero(s);
        f(v);
        s &= s - 1;
    }
}

inline std::vector<NodeId> set_to_vector(NodeSet s) {
    std::vector<NodeId> out;
    for_each_node(s, [&](NodeId v) { out.push_back(v); });
    return out;
}

// Enumerates all nonempty subsets of mask, ascending as integers.
template <typename F>
inline void for_each_subset(NodeSet mask, F&& f) {
    for (NodeSet sub = mask; sub; sub = (sub - 1) & mask) f(sub);
}

}  // namespace mdag
