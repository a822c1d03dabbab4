#include "mdag/connectivity.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdag {

NodeSet DistrictPartition::block_of(NodeId v) const {
    for (NodeSet b : blocks)
        if (contains(b, v)) return b;
    return 0;
}

NodeSet district_of(const MDag& g, NodeSet a, NodeSet alive) {
    NodeSet seen = a & alive;
    bool grew = true;
    while (grew) {
        grew = false;
        for (NodeSet f : g.complex.facets()) {
            NodeSet fa = f & alive;
            if (set_size(fa) >= 2 && (fa & seen) && (fa & ~seen)) {
                seen |= fa;
                grew = true;
            }
        }
    }
    return seen;
}

DistrictPartition districts(const MDag& g) {
    int n = g.node_count();
    DistrictPartition out;
    NodeSet remaining = full_set(n);
    while (remaining) {
        NodeId v = lowest_bit(remaining);
        NodeSet d = district_of(g, single(v), full_set(n));
        out.blocks.push_back(d);
        remaining &= ~d;
    }
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

NodeSet closure(const MDag& g, NodeSet a) {
    if (a == 0) throw std::invalid_argument("closure: empty set");
    NodeSet cur = full_set(g.node_count());
    for (;;) {
        NodeSet d = district_of(g, a, cur);
        NodeSet an = g.directed.ancestors_within(a, d);
        if (an == cur) return cur;
        cur = an;
    }
}

bool densely_connected(const MDag& g, NodeId v, NodeId w) {
    if (v == w) throw std::invalid_argument("densely_connected: v == w");
    NodeSet cw = closure(g, single(w));
    if (contains(g.directed.parents_of_set(cw), v)) return true;
    NodeSet cv = closure(g, single(v));
    if (contains(g.directed.parents_of_set(cv), w)) return true;
    NodeSet cvw = closure(g, single(v) | single(w));
    return district_of(g, single(lowest_bit(cvw)), cvw) == cvw;
}

std::vector<std::pair<NodeId, NodeId>> densely_connected_pairs(const MDag& g) {
    std::vector<std::pair<NodeId, NodeId>> out;
    int n = g.node_count();
    for (NodeId v = 0; v < n; ++v)
        for (NodeId w = v + 1; w < n; ++w)
            if (densely_connected(g, v, w)) out.emplace_back(v, w);
    return out;
}

}  // namespace mdag
