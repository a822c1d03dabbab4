#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mdag/bits.hpp"

namespace mdag {

// Directed structure over the visible nodes. Stored as one children bitmask
// per node. Structures built by the parser or the enumerator only have edges
// i->j with i < j (the fixed nodal ordering); permutation images may not.
class DirectedStructure {
  public:
    DirectedStructure() = default;
    explicit DirectedStructure(int n) : n_(n), children_{} {}

    int node_count() const { return n_; }
    NodeSet children(NodeId v) const { return children_[v]; }
    bool has_edge(NodeId i, NodeId j) const { return contains(children_[i], j); }
    void add_edge(NodeId i, NodeId j) { children_[i] = with(children_[i], j); }
    void remove_edge(NodeId i, NodeId j) { children_[i] = without(children_[i], j); }

    NodeSet parents(NodeId v) const;
    NodeSet parents_of_set(NodeSet s) const;  // union of parents, not subtracting s
    // Ancestors/descendants include v itself.
    NodeSet ancestors(NodeId v) const { return ancestors_of_set(single(v)); }
    NodeSet descendants(NodeId v) const;
    NodeSet ancestors_of_set(NodeSet s) const;
    // Ancestors of s computed inside the subgraph induced by `alive`.
    NodeSet ancestors_within(NodeSet s, NodeSet alive) const;

    int edge_count() const;
    bool edges_subset_of(const DirectedStructure& other) const;
    bool is_ordered() const;  // every edge goes forward in the ordering

    bool operator==(const DirectedStructure& o) const {
        return n_ == o.n_ && children_ == o.children_;
    }

  private:
    int n_ = 0;
    std::array<NodeSet, kMaxNodes> children_{};
};

// Simplicial complex over the visible nodes, stored as the sorted list of its
// facets of size >= 2. Singleton faces are implicit: every singleton is a
// face, and {v} is a facet exactly when v appears in no stored facet.
class SimplicialComplex {
  public:
    SimplicialComplex() = default;
    explicit SimplicialComplex(int n) : n_(n) {}
    SimplicialComplex(int n, std::vector<NodeSet> facets);

    int node_count() const { return n_; }
    const std::vector<NodeSet>& facets() const { return facets_; }

    // F is a face iff F is contained in some facet (singletons always are).
    bool is_face(NodeSet f) const;
    bool covered(NodeId v) const;  // v lies in some stored facet
    NodeSet facets_containing(NodeId v, std::vector<NodeSet>* out = nullptr) const;

    // All faces of size >= 1, including implicit singletons.
    std::vector<NodeSet> all_faces() const;

    // Adds a facet, dropping any stored facet it absorbs. No-op if f is
    // already a face.
    void add_facet(NodeSet f);

    // Every face of this complex is a face of `other`.
    bool faces_subset_of(const SimplicialComplex& other) const;

    bool operator==(const SimplicialComplex& o) const {
        return n_ == o.n_ && facets_ == o.facets_;
    }

  private:
    void normalize();
    int n_ = 0;
    std::vector<NodeSet> facets_;  // sorted, antichain, each of size >= 2
};

class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<int> map) : map_(std::move(map)) {}
    static Permutation identity(int n);

    int size() const { return static_cast<int>(map_.size()); }
    int operator()(int v) const { return map_[v]; }
    Permutation inverse() const;
    Permutation compose(const Permutation& then) const;  // v -> then(this(v))
    NodeSet apply(NodeSet s) const;

    bool operator==(const Permutation& o) const { return map_ == o.map_; }

  private:
    std::vector<int> map_;
};

// All permutations of {0..n-1}, deterministic order.
std::vector<Permutation> all_permutations(int n);

struct UndirectedGraph {
    int n = 0;
    std::array<NodeSet, kMaxNodes> adj{};

    bool has_edge(NodeId u, NodeId w) const { return contains(adj[u], w); }
    void add_edge(NodeId u, NodeId w) {
        adj[u] = with(adj[u], w);
        adj[w] = with(adj[w], u);
    }
    bool edges_subset_of(const UndirectedGraph& o) const;
    bool operator==(const UndirectedGraph& o) const;
};

// An mDAG: directed structure plus simplicial complex over the same nodes.
struct MDag {
    DirectedStructure directed;
    SimplicialComplex complex;

    MDag() = default;
    MDag(DirectedStructure d, SimplicialComplex c)
        : directed(std::move(d)), complex(std::move(c)) {}

    int node_count() const { return directed.node_count(); }
    bool operator==(const MDag& o) const {
        return directed == o.directed && complex == o.complex;
    }

    // Canonical encoding: child bitmasks in node order, then the sorted
    // facet list. Equal encodings <=> equal mDAGs.
    std::string encode() const;
};

MDag make_mdag(int n, const std::vector<std::pair<int, int>>& edges,
               const std::vector<NodeSet>& facets);

// Queries.
NodeSet parents(const MDag& g, NodeId v);
NodeSet children(const MDag& g, NodeId v);
NodeSet ancestors(const MDag& g, NodeId v);
NodeSet descendants(const MDag& g, NodeId v);
bool is_ordered(const MDag& g);
bool is_confounder_free(const MDag& g);
bool is_directed_edge_free(const MDag& g);
UndirectedGraph skeleton(const MDag& g);

// Subgraph induced by s; node indices are recompacted, order preserved.
MDag induced_subgraph(const MDag& g, NodeSet s);

// Edge a->b maps to pi(a)->pi(b), facets map elementwise. The result may
// violate the nodal ordering; check is_ordered().
MDag apply_permutation(const MDag& g, const Permutation& pi);

// Text format:
//   nodes <n>
//   edges <i>-><j>,...
//   facets {i,j,...};{...}
// Throws std::invalid_argument on malformed input, out-of-order edges, or
// out-of-range indices.
std::string to_text(const MDag& g);
MDag parse_text(const std::string& text);

// JSON mirror with fields "n", "edges" (pairs), "facets" (arrays).
std::string to_json(const MDag& g);
MDag parse_json(const std::string& json);

MDag load_mdag_file(const std::string& path);  // picks format by content

}  // namespace mdag
