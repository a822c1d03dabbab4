#pragma once

#include <cstdint>
#include <vector>

#include "mdag/graph.hpp"

namespace mdag {

// A partitioned DAG: visible nodes 0..nv-1 followed by latent nodes
// nv..nv+nl-1. Edges among visible nodes respect the nodal ordering; latent
// nodes may point anywhere (acyclicity is checked on construction). Wide
// masks are used because visible + latent can exceed 16.
class PDag {
  public:
    using WideSet = uint64_t;
    static constexpr int kMaxTotal = 48;

    PDag() = default;
    PDag(int visible_count, int latent_count);

    int visible_count() const { return nv_; }
    int latent_count() const { return nl_; }
    int total() const { return nv_ + nl_; }
    bool is_visible(int v) const { return v < nv_; }
    bool is_latent(int v) const { return v >= nv_; }

    WideSet children(int v) const { return children_[v]; }
    WideSet parents(int v) const;
    bool has_edge(int i, int j) const { return (children_[i] >> j) & 1; }
    void add_edge(int i, int j);
    void remove_edge(int i, int j);

    WideSet ancestors_of(WideSet s) const;  // includes s
    bool is_acyclic() const;
    void check_valid() const;  // throws on cycles or visible-order violations

    bool latents_exogenous() const;

  private:
    int nv_ = 0, nl_ = 0;
    std::vector<WideSet> children_;
};

// Makes every latent node parentless; each former parent of an endogenous
// latent gains a direct edge to each of its children.
PDag exogenize(const PDag& p);

// Removes a maximal set of latents whose child set is contained in another
// latent's child set. All latents must already be exogenous. Ties between
// latents with identical child sets are broken by removing the higher index.
PDag remove_redundant(const PDag& p);

PDag re_reduce(const PDag& p);  // remove_redundant after exogenize; idempotent

// The mDAG associated with p: visible-visible edges of the RE-reduction plus
// one facet per surviving latent's child set.
MDag lnodes_to_faces(const PDag& p);

// One exogenous latent per facet of size >= 2; lnodes_to_faces round-trips.
PDag canonical_pdag(const MDag& g);

// Canonical pDAG of the sub-mDAG of g induced by `alive`, with node ids kept
// in g's numbering (emitted indices are compacted; `vis_map` gives, for each
// compacted visible index, the original node id).
PDag canonical_pdag_masked(const MDag& g, NodeSet alive, std::vector<int>* vis_map);

}  // namespace mdag
