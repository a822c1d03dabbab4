#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/pdag.hpp"
#include "mdag/separation.hpp"

namespace mdag {

// Per-visible-node outcome cardinalities.
using CardVec = std::vector<int>;

// An event is an outcome tuple packed into a mixed-radix integer, node 0
// most significant, so numeric order matches digit-string order.
using EventId = uint32_t;

struct EventSpace {
    CardVec cards;
    std::vector<int> stride;
    int total = 0;

    explicit EventSpace(CardVec c);
    int digit(EventId e, int v) const { return (static_cast<int>(e) / stride[v]) % cards[v]; }
    EventId pack(const std::vector<int>& digits) const;
    std::string to_string(EventId e) const;  // digit string, e.g. "0110"
    EventId parse(const std::string& digits) const;
};

// Sorted duplicate-free nonempty list of events.
using Support = std::vector<EventId>;

std::string support_to_string(const EventSpace& space, const Support& s);
Support parse_support(const EventSpace& space, const std::string& lines);

// A deterministic functional model: per visible node a table from
// (visible-parent valuation, latent-parent valuation, error value) to an
// outcome. Latent and error variables all have cardinality k.
struct ResponseAssignment {
    int k = 0;
    struct NodeTable {
        std::vector<int> visible_parents;  // ascending node ids
        std::vector<int> latent_parents;   // facet indices of the pDAG
        std::vector<uint8_t> out;          // [visIdx][latIdx][error] -> outcome
        int vis_count = 1, lat_count = 1;
    };
    std::vector<NodeTable> nodes;
};

// Evaluates the model over every joint latent+error valuation; used to check
// that a witness generates exactly its support.
Support evaluate_assignment(const PDag& p, const CardVec& cards,
                            const ResponseAssignment& ra);

// Decides whether some deterministic functional model with every latent and
// error cardinality k = |s| generates exactly the event set s. p must be
// RE-reduced (all latents exogenous).
bool support_realizable(const PDag& p, const CardVec& cards, const Support& s,
                        ResponseAssignment* witness = nullptr);

// All realizable supports with at most max_events events, in lexicographic
// order.
std::vector<Support> enumerate_realizable_supports(const PDag& p, const CardVec& cards,
                                                   int max_events);

// True when a d-separation relation of g is possibilistically violated by s:
// for some conditioning value the co-occurring (A, B) projections are not a
// product set. True implies s is unrealizable by g; false is inconclusive.
bool ci_rules_out(const MDag& g, const CardVec& cards, const Support& s);
bool ci_rules_out(const std::vector<SepTriple>& relations, const EventSpace& space,
                  const Support& s);

// The two-event binary support where the listed variables are perfectly
// correlated and all others are pinned to 0.
Support perfect_correlation_support(NodeSet nodes, int n);

// The 2^(n-1)-event binary support with v and w perfectly correlated and all
// other variables free.
Support dense_correlation_support(NodeId v, NodeId w, int n);

struct NondominanceEvidence {
    // A support realizable by h but not by g proves g does not dominate h.
    std::optional<Support> g_not_dominates_h;
    std::optional<Support> h_not_dominates_g;
};

// Searches supports ascending in event count (2..max_events), prefiltered by
// ci_rules_out, in deterministic lexicographic order.
NondominanceEvidence compare_support_profiles(const MDag& g, const MDag& h,
                                              const CardVec& cards, int max_events);

// On-disk cache of realizability verdicts, keyed by (mDAG encoding, cards,
// event count). Writes are atomic (tmp file + rename).
class SupportCache {
  public:
    SupportCache() = default;  // disabled
    explicit SupportCache(std::string dir);

    bool enabled() const { return !dir_.empty(); }
    // Bit i of the result corresponds to the i-th support of that event
    // count in lexicographic order.
    std::optional<std::vector<uint8_t>> load(const std::string& key) const;
    void store(const std::string& key, const std::vector<uint8_t>& bits) const;

    static std::string key_for(const MDag& g, const CardVec& cards, int events);

  private:
    std::string dir_;
};

// Realizability bitmap over all supports with exactly `events` events, in
// lexicographic order, for the mDAG's canonical pDAG. Cache-aware.
std::vector<uint8_t> realizable_bitmap(const MDag& g, const CardVec& cards, int events,
                                       const SupportCache& cache);

// Enumerates all supports of a fixed event count lexicographically.
// next_combination advances `comb` (ascending event ids); returns false after
// the last one.
bool next_combination(std::vector<EventId>& comb, int total);
uint64_t combination_count(int total, int events);

namespace detail {
// The diagonal-hosting symmetry break is an optimization; oracle-style tests
// disable it and compare verdicts. latent_card < |s| (e.g. -1) means |s|,
// the cardinality that the completeness bound needs; larger values let
// property tests confirm monotone completeness.
bool support_realizable_impl(const PDag& p, const CardVec& cards, const Support& s,
                             bool diagonal_symmetry, ResponseAssignment* witness,
                             int latent_card);
}  // namespace detail

}  // namespace mdag
