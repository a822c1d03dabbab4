#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdag/connectivity.hpp"
#include "mdag/dominance.hpp"
#include "mdag/graph.hpp"
#include "mdag/separation.hpp"
#include "mdag/support.hpp"
#include "mdag/universe.hpp"

namespace mdag {

// Nondominance-proving rules, in the order they are applied (cheap first).
enum class NondomRule { Skel = 0, Dsep, Esep, Dc, Def, Supports };

struct NondomRuleSet {
    bool skel = false, dsep = false, esep = false, dc = false, def = false;
    int supports_max_events = 0;  // 0 = supports rule off

    static NondomRuleSet parse(const std::string& csv, int supports_events);
    std::string label(int events_cap = -1) const;
};

struct ClassifyConfig {
    int n = 3;
    RuleTier dominance = RuleTier::all();
    NondomRuleSet nondominance;
    CardVec cards;               // defaults to all-binary
    std::string cache_dir;       // empty = no cache
    bool verify_fingerprints = true;
    int threads = 1;             // reserved; computations are deterministic
};

// Raised when a proven dominance meets a proven nondominance for the same
// ordered pair. The CLI maps it to exit code 3.
struct ContradictionError : std::runtime_error {
    int block_a, block_b;
    ContradictionError(int a, int b, const std::string& what)
        : std::runtime_error(what), block_a(a), block_b(b) {}
};

enum class AlgebraicStatus { Algebraic, Nonalgebraic, Unknown };

struct BlockInfo {
    std::vector<int> members;  // universe indices
    int representative;        // member with fewest facets (support search speed)
    bool has_confounder_free = false;
    int def_member = -1;       // universe index of the directed-edge-free member

    UndirectedGraph skel;
    std::vector<SepTriple> dsep;
    std::vector<ESepQuad> esep;
    std::vector<std::pair<NodeId, NodeId>> dc;
    // support_bits[k] covers supports with exactly k+2 events; empty when the
    // block was already identified before that tier was reached.
    std::vector<std::vector<uint8_t>> support_bits;
};

struct TierCount {
    std::string label;
    int components = 0;
    int identified = 0;
};

struct ClassificationLedger {
    int n = 0;
    RuleTier dominance_rules;
    NondomRuleSet nondominance_rules;
    CardVec cards;

    Universe universe;
    EquivalenceResult equivalence;  // blocks + transitively closed dominance
    std::vector<BlockInfo> blocks;

    // First rule proving block a does not dominate block b; -1 if unproven.
    // Indexed a * blocks.size() + b.
    std::vector<int8_t> nondominance;

    std::vector<int> component_of;  // proven-inequivalence component per block
    int component_count = 0;

    std::vector<TierCount> tier_counts;  // cumulative rows, cheap rules first

    std::vector<AlgebraicStatus> algebraic_status;  // per block
    int nonalgebraic_lower = 0;
    int algebraic_upper = 0;

    int block_count() const { return static_cast<int>(blocks.size()); }
    bool proven_nondominance(int a, int b) const {
        return nondominance[static_cast<size_t>(a) * blocks.size() + b] >= 0;
    }
    bool proven_dominance(int a, int b) const;  // from the closed edge set
    bool identified(int b) const;

    std::string to_json(bool include_members = true) const;
};

// Full pipeline: universe enumeration, dominance saturation, nondominance
// passes in rule order, inequivalence components, identified classes, and
// algebraicness bounds.
ClassificationLedger classify(const ClassifyConfig& config);

// Components / identified counts for a sub-row of the configured rule set
// (fingerprints must already be computed by classify).
int count_components(const ClassificationLedger& ledger, const NondomRuleSet& rules);
int count_identified(const ClassificationLedger& ledger, const NondomRuleSet& rules);

// Blocks whose equivalence block is a singleton inequivalence component.
std::vector<int> identified_classes(const ClassificationLedger& ledger);

// The number of distinct d-separation fingerprints over all labeled DAGs on
// n nodes; an upper bound on the number of algebraic equivalence classes.
int markov_class_count(int n);

struct HasseDiagram {
    // Directed edges of the transitive reduction, block id to block id.
    std::vector<std::pair<int, int>> edges;
    std::vector<int> maximal, minimal;
};

HasseDiagram partial_order_report(const ClassificationLedger& ledger);

std::string hasse_to_dot(const ClassificationLedger& ledger, const HasseDiagram& h);
std::string hasse_to_json(const ClassificationLedger& ledger, const HasseDiagram& h);

// Pairwise verdict for two mDAGs under a configured pipeline.
enum class CompareVerdict { Equivalent, ADominatesB, BDominatesA, Incomparable, Unresolved };
struct CompareResult {
    CompareVerdict verdict;
    std::string provenance;
};
CompareResult compare_mdags(const MDag& a, const MDag& b, const ClassifyConfig& config);

}  // namespace mdag
