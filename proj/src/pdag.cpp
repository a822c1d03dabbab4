#include "mdag/pdag.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdag {

PDag::PDag(int visible_count, int latent_count)
    : nv_(visible_count), nl_(latent_count), children_(nv_ + nl_, 0) {
    if (total() > kMaxTotal) throw std::invalid_argument("pDAG too large");
}

PDag::WideSet PDag::parents(int v) const {
    WideSet p = 0;
    for (int i = 0; i < total(); ++i)
        if (has_edge(i, v)) p |= WideSet(1) << i;
    return p;
}

void PDag::add_edge(int i, int j) { children_[i] |= WideSet(1) << j; }
void PDag::remove_edge(int i, int j) { children_[i] &= ~(WideSet(1) << j); }

PDag::WideSet PDag::ancestors_of(WideSet s) const {
    WideSet seen = s;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int i = 0; i < total(); ++i) {
            WideSet bit = WideSet(1) << i;
            if ((seen & bit) == 0 && (children_[i] & seen)) {
                seen |= bit;
                grew = true;
            }
        }
    }
    return seen;
}

bool PDag::is_acyclic() const {
    // Kahn peel.
    std::vector<int> indeg(total(), 0);
    for (int i = 0; i < total(); ++i)
        for (int j = 0; j < total(); ++j)
            if (has_edge(i, j)) indeg[j]++;
    std::vector<int> stack;
    for (int i = 0; i < total(); ++i)
        if (indeg[i] == 0) stack.push_back(i);
    int removed = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        removed++;
        for (int j = 0; j < total(); ++j)
            if (has_edge(u, j) && --indeg[j] == 0) stack.push_back(j);
    }
    return removed == total();
}

void PDag::check_valid() const {
    if (!is_acyclic()) throw std::invalid_argument("pDAG has a cycle");
    for (int i = 0; i < nv_; ++i)
        for (int j = 0; j < i; ++j)
            if (has_edge(i, j))
                throw std::invalid_argument("visible edge violates the nodal ordering");
}

bool PDag::latents_exogenous() const {
    for (int u = nv_; u < total(); ++u)
        if (parents(u) != 0) return false;
    return true;
}

PDag exogenize(const PDag& p) {
    PDag q = p;
    // Latents are processed until none has parents; a latent parent of a
    // latent hands its own parents down, so iterate to a fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int u = q.visible_count(); u < q.total(); ++u) {
            PDag::WideSet par = q.parents(u);
            if (par == 0) continue;
            PDag::WideSet ch = q.children(u);
            for (int a = 0; a < q.total(); ++a) {
                if (((par >> a) & 1) == 0) continue;
                q.remove_edge(a, u);
                for (int b = 0; b < q.total(); ++b)
                    if ((ch >> b) & 1) q.add_edge(a, b);
            }
            changed = true;
        }
    }
    return q;
}

PDag remove_redundant(const PDag& p) {
    if (!p.latents_exogenous())
        throw std::invalid_argument("remove_redundant: latents must be exogenous");
    int nv = p.visible_count(), nl = p.latent_count();
    std::vector<PDag::WideSet> ch(nl);
    for (int u = 0; u < nl; ++u) ch[u] = p.children(nv + u);

    // u is redundant when some surviving latent v has ch(u) subseteq ch(v).
    // Scanning higher indices first makes the tie-break deterministic: of two
    // latents with identical child sets the higher-index one goes.
    std::vector<bool> dead(nl, false);
    for (int u = nl - 1; u >= 0; --u) {
        for (int v = 0; v < nl; ++v) {
            if (v == u || dead[v]) continue;
            if ((ch[u] & ~ch[v]) == 0) {
                dead[u] = true;
                break;
            }
        }
    }

    std::vector<int> keep;
    for (int u = 0; u < nl; ++u)
        if (!dead[u]) keep.push_back(u);
    PDag q(nv, static_cast<int>(keep.size()));
    for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j)
            if (p.has_edge(i, j)) q.add_edge(i, j);
    }
    for (size_t k = 0; k < keep.size(); ++k) {
        PDag::WideSet c = ch[keep[k]];
        for (int j = 0; j < nv; ++j)
            if ((c >> j) & 1) q.add_edge(nv + static_cast<int>(k), j);
    }
    return q;
}

PDag re_reduce(const PDag& p) { return remove_redundant(exogenize(p)); }

MDag lnodes_to_faces(const PDag& p) {
    PDag r = re_reduce(p);
    int nv = r.visible_count();
    DirectedStructure d(nv);
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
            if (r.has_edge(i, j)) d.add_edge(i, j);
    std::vector<NodeSet> facets;
    for (int u = nv; u < r.total(); ++u) {
        NodeSet f = static_cast<NodeSet>(r.children(u) & full_set(nv));
        if (set_size(f) >= 2) facets.push_back(f);
    }
    return MDag(std::move(d), SimplicialComplex(nv, facets));
}

PDag canonical_pdag(const MDag& g) {
    int nv = g.node_count();
    const auto& facets = g.complex.facets();
    PDag p(nv, static_cast<int>(facets.size()));
    for (int i = 0; i < nv; ++i)
        for_each_node(g.directed.children(i), [&](NodeId j) { p.add_edge(i, j); });
    for (size_t k = 0; k < facets.size(); ++k)
        for_each_node(facets[k],
                      [&](NodeId j) { p.add_edge(nv + static_cast<int>(k), j); });
    return p;
}

PDag canonical_pdag_masked(const MDag& g, NodeSet alive, std::vector<int>* vis_map) {
    int n = g.node_count();
    std::vector<int> compact(n, -1);
    std::vector<int> back;
    for (int v = 0; v < n; ++v)
        if (contains(alive, v)) {
            compact[v] = static_cast<int>(back.size());
            back.push_back(v);
        }
    std::vector<NodeSet> facets;
    for (NodeSet f : g.complex.facets()) {
        NodeSet inter = f & alive;
        if (set_size(inter) < 2) continue;
        NodeSet mapped = 0;
        for_each_node(inter, [&](NodeId v) { mapped = with(mapped, compact[v]); });
        facets.push_back(mapped);
    }
    // Restriction can make one facet a subset of another.
    SimplicialComplex sc(static_cast<int>(back.size()), facets);

    int nv = static_cast<int>(back.size());
    PDag p(nv, static_cast<int>(sc.facets().size()));
    for (int v = 0; v < n; ++v) {
        if (!contains(alive, v)) continue;
        for_each_node(g.directed.children(v) & alive,
                      [&](NodeId w) { p.add_edge(compact[v], compact[w]); });
    }
    for (size_t k = 0; k < sc.facets().size(); ++k)
        for_each_node(sc.facets()[k],
                      [&](NodeId j) { p.add_edge(nv + static_cast<int>(k), j); });
    if (vis_map) *vis_map = back;
    return p;
}

}  // namespace mdag
