#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdag/graph.hpp"

namespace mdag {

// edges(h) within edges(g) and every face of h within g's faces. Implies
// observational dominance of g over h.
bool structurally_dominates(const MDag& g, const MDag& h);

// HLP edge-adding: the added edge x->y is harmless when y already sees
// everything x does. Inapplicable when x lies in no facet of size >= 2 (its
// private randomness would become visible to y). The pair is not required
// to respect the nodal ordering; the conditions imply the result is acyclic.
bool hlp_applicable(const MDag& g, NodeId x, NodeId y);
MDag hlp_apply(const MDag& g, NodeId x, NodeId y);

// Weak facet-merging: C a facet, D a disjoint face, every node of C
// confounded only through C, and C with its parents feeding every node of
// D. Adds the facet C u D. (Taking D as a face rather than a facet is what
// the pDAG-language form of the merging theorem licenses: the latent added
// for a non-maximal D is redundant.)
bool weak_fm_applicable(const MDag& g, NodeSet c, NodeSet d);
MDag weak_fm_apply(const MDag& g, NodeSet c, NodeSet d);

// Moderate facet-merging relaxes the exclusivity condition: every other
// facet meeting C must contain D.
bool moderate_fm_applicable(const MDag& g, NodeSet c, NodeSet d);
MDag moderate_fm_apply(const MDag& g, NodeSet c, NodeSet d);

// Strong facet-merging: several facets C_i sharing one eligible D are merged
// simultaneously, adding every facet C_i u D.
bool strong_fm_applicable(const MDag& g, const std::vector<NodeSet>& cs, NodeSet d);
MDag strong_fm_apply(const MDag& g, const std::vector<NodeSet>& cs, NodeSet d);

// Evans' rule: weak facet-merging followed by deletion of every edge from C
// into D (each deletion is an HLP edge-removal on the merged complex).
MDag evans_apply(const MDag& g, NodeSet c, NodeSet d);

enum class Rule { SD, HLP, WeakFM, ModerateFM, StrongFM, Evans };

struct RuleTier {
    bool sd = false, hlp = false, weakfm = false, moderatefm = false,
         strongfm = false, evans = false;

    static RuleTier parse(const std::string& csv);  // "sd,hlp,weakfm,..."
    static RuleTier all();
    std::string to_string() const;
    bool any_equivalence_rule() const {
        return hlp || weakfm || moderatefm || strongfm || evans;
    }
};

struct RuleApplication {
    Rule rule;
    int source;  // universe index
    int target;
    NodeId x = -1, y = -1;          // HLP parameters
    std::vector<NodeSet> cs;        // FM parameters
    NodeSet d = 0;
};

// For each mDAG in the universe, every application of the active equivalence
// rules (targets resolved through `index_of`, which must return a valid index
// for every in-universe mDAG).
std::vector<RuleApplication> enumerate_rule_applications(
    const std::vector<MDag>& universe, const RuleTier& rules,
    const std::function<int(const MDag&)>& index_of);

struct EquivalenceResult {
    std::vector<int> block_of;               // universe index -> block id
    std::vector<std::vector<int>> blocks;    // block id -> sorted member indices
    // Directed block-level dominance edges proven by structural dominance,
    // transitively closed; blocks mutually dominating are already merged.
    std::vector<std::pair<int, int>> dominance_edges;
};

// Union-find over every applicable rule application; with SD active, blocks
// that dominate each other through a structural-dominance cycle are merged.
// The closure runs over the ambient set of mDAGs with arbitrary acyclic
// orientation (proof chains routinely leave the fixed-ordering universe)
// and the partition is restricted to the given universe at the end. The
// result is independent of application order.
EquivalenceResult saturate_equivalences(const std::vector<MDag>& universe,
                                        const RuleTier& rules);

}  // namespace mdag
