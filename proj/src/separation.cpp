#include "mdag/separation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mdag {

SepTriple::SepTriple(NodeSet a_, NodeSet b_, NodeSet c_) : a(a_), b(b_), c(c_) {
    if (a == 0 || b == 0) throw std::invalid_argument("SepTriple: A and B nonempty");
    if ((a & b) || (a & c) || (b & c))
        throw std::invalid_argument("SepTriple: sets must be disjoint");
    if (a > b) std::swap(a, b);
}

ESepQuad::ESepQuad(NodeSet a_, NodeSet b_, NodeSet c_, NodeSet d_)
    : a(a_), b(b_), c(c_), d(d_) {
    if (a == 0 || b == 0) throw std::invalid_argument("ESepQuad: A and B nonempty");
    if ((a & b) || (a & c) || (a & d) || (b & c) || (b & d) || (c & d))
        throw std::invalid_argument("ESepQuad: sets must be disjoint");
    if (a > b) std::swap(a, b);
}

bool pdag_d_separated(const PDag& p, NodeSet a, NodeSet b, NodeSet c) {
    using WideSet = PDag::WideSet;
    WideSet wa = a, wb = b, wc = c;
    WideSet relevant = p.ancestors_of(wa | wb | wc);

    // Moralize the ancestral subgraph: undirected edges for each directed
    // edge plus a clique over every node's parents.
    int t = p.total();
    std::vector<WideSet> adj(t, 0);
    for (int i = 0; i < t; ++i) {
        if (((relevant >> i) & 1) == 0) continue;
        WideSet ch = p.children(i) & relevant;
        for (int j = 0; j < t; ++j)
            if ((ch >> j) & 1) {
                adj[i] |= WideSet(1) << j;
                adj[j] |= WideSet(1) << i;
            }
    }
    for (int j = 0; j < t; ++j) {
        if (((relevant >> j) & 1) == 0) continue;
        WideSet par = p.parents(j) & relevant;
        for (int x = 0; x < t; ++x) {
            if (((par >> x) & 1) == 0) continue;
            adj[x] |= par & ~(WideSet(1) << x);
        }
    }

    WideSet blocked = wc;
    WideSet frontier = wa & ~blocked;
    WideSet seen = frontier;
    while (frontier) {
        WideSet next = 0;
        for (int i = 0; i < t; ++i)
            if ((frontier >> i) & 1) next |= adj[i];
        next &= relevant & ~blocked & ~seen;
        if (next & wb) return false;
        seen |= next;
        frontier = next;
    }
    return (seen & wb) == 0;
}

bool d_separated(const MDag& g, const SepTriple& t) {
    PDag p = canonical_pdag(g);
    return pdag_d_separated(p, t.a, t.b, t.c);
}

namespace {

// Enumerates assignments of each visible node to one of {A, B, C, out} /
// {A, B, C, D, out} and tests each canonical query once.
template <typename F>
void for_each_triple(int n, F&& f) {
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 4;
    for (int code = 0; code < total; ++code) {
        NodeSet a = 0, b = 0, c = 0;
        int x = code;
        for (int v = 0; v < n; ++v, x /= 4) {
            switch (x % 4) {
                case 1: a = with(a, v); break;
                case 2: b = with(b, v); break;
                case 3: c = with(c, v); break;
                default: break;
            }
        }
        if (a == 0 || b == 0 || a > b) continue;  // canonical: a < b
        f(a, b, c);
    }
}

}  // namespace

std::vector<SepTriple> all_dsep_relations(const MDag& g) {
    PDag p = canonical_pdag(g);
    std::vector<SepTriple> out;
    for_each_triple(g.node_count(), [&](NodeSet a, NodeSet b, NodeSet c) {
        if (pdag_d_separated(p, a, b, c)) out.push_back(SepTriple(a, b, c));
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool e_separated(const MDag& g, const ESepQuad& q) {
    NodeSet alive = full_set(g.node_count()) & ~q.d;
    std::vector<int> vis_map;
    PDag p = canonical_pdag_masked(g, alive, &vis_map);
    std::vector<int> compact(g.node_count(), -1);
    for (size_t i = 0; i < vis_map.size(); ++i) compact[vis_map[i]] = static_cast<int>(i);
    auto remap = [&](NodeSet s) {
        NodeSet out = 0;
        for_each_node(s, [&](NodeId v) { out = with(out, compact[v]); });
        return out;
    };
    return pdag_d_separated(p, remap(q.a), remap(q.b), remap(q.c));
}

std::vector<ESepQuad> all_esep_relations(const MDag& g) {
    int n = g.node_count();
    std::vector<ESepQuad> out;
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 5;
    // Group the queries by deletion set so each subgraph is built once.
    std::vector<std::vector<ESepQuad>> by_d(1u << n);
    for (int code = 0; code < total; ++code) {
        NodeSet a = 0, b = 0, c = 0, d = 0;
        int x = code;
        for (int v = 0; v < n; ++v, x /= 5) {
            switch (x % 5) {
                case 1: a = with(a, v); break;
                case 2: b = with(b, v); break;
                case 3: c = with(c, v); break;
                case 4: d = with(d, v); break;
                default: break;
            }
        }
        if (a == 0 || b == 0 || a > b) continue;
        by_d[d].push_back(ESepQuad(a, b, c, d));
    }
    for (NodeSet d = 0; d < (1u << n); ++d) {
        if (by_d[d].empty()) continue;
        NodeSet alive = full_set(n) & ~d;
        std::vector<int> vis_map;
        PDag p = canonical_pdag_masked(g, alive, &vis_map);
        std::vector<int> compact(n, -1);
        for (size_t i = 0; i < vis_map.size(); ++i)
            compact[vis_map[i]] = static_cast<int>(i);
        auto remap = [&](NodeSet s) {
            NodeSet m = 0;
            for_each_node(s, [&](NodeId v) { m = with(m, compact[v]); });
            return m;
        };
        for (const ESepQuad& q : by_d[d])
            if (pdag_d_separated(p, remap(q.a), remap(q.b), remap(q.c)))
                out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void append_set(std::ostringstream& os, NodeSet s) {
    bool first = true;
    for_each_node(s, [&](NodeId v) {
        if (!first) os << ",";
        os << v;
        first = false;
    });
}

}  // namespace

std::string to_string(const SepTriple& t) {
    std::ostringstream os;
    append_set(os, t.a);
    os << "|";
    append_set(os, t.b);
    os << "|";
    append_set(os, t.c);
    return os.str();
}

std::string to_string(const ESepQuad& q) {
    std::ostringstream os;
    append_set(os, q.a);
    os << "|";
    append_set(os, q.b);
    os << "|";
    append_set(os, q.c);
    if (q.d) {
        os << "!";
        append_set(os, q.d);
    }
    return os.str();
}

}  // namespace mdag
