#pragma once

#include <utility>
#include <vector>

#include "mdag/graph.hpp"

namespace mdag {

struct DistrictPartition {
    std::vector<NodeSet> blocks;  // disjoint, cover all nodes, sorted

    NodeSet block_of(NodeId v) const;
};

// Maximal facet-connected node sets; singletons for nodes in no facet.
DistrictPartition districts(const MDag& g);

// District of the set a (union over members) within the subgraph induced by
// `alive`.
NodeSet district_of(const MDag& g, NodeSet a, NodeSet alive);

// Fixpoint of alternating district and ancestor restriction, starting from
// the full node set. Always contains a.
NodeSet closure(const MDag& g, NodeSet a);

// v and w are densely connected when v is a parent of <{w}>, w is a parent
// of <{v}>, or <{v,w}> is bidirected-connected in its induced sub-mDAG.
bool densely_connected(const MDag& g, NodeId v, NodeId w);

// All unordered densely connected pairs, sorted; a comparable fingerprint.
std::vector<std::pair<NodeId, NodeId>> densely_connected_pairs(const MDag& g);

}  // namespace mdag
