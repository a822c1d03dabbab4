#include "mdag/classifier.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mdag {

NondomRuleSet NondomRuleSet::parse(const std::string& csv, int supports_events) {
    NondomRuleSet r;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "skel") r.skel = true;
        else if (tok == "dsep") r.dsep = true;
        else if (tok == "esep") r.esep = true;
        else if (tok == "dc") r.dc = true;
        else if (tok == "def") r.def = true;
        else if (tok == "supports") r.supports_max_events = supports_events;
        else if (tok == "none") {}
        else throw std::invalid_argument("unknown nondominance rule '" + tok + "'");
    }
    return r;
}

std::string NondomRuleSet::label(int events_cap) const {
    std::string s;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!s.empty()) s += "+";
        s += name;
    };
    add(skel, "skel");
    add(dsep, "d-sep");
    add(esep, "e-sep");
    add(dc, "DC");
    add(def, "DEF");
    int cap = events_cap < 0 ? supports_max_events : events_cap;
    if (supports_max_events > 0 && cap > 0) {
        if (!s.empty()) s += "+";
        s += "supps<=" + std::to_string(cap);
    }
    return s.empty() ? "none" : s;
}

bool ClassificationLedger::proven_dominance(int a, int b) const {
    auto key = std::make_pair(a, b);
    return std::binary_search(equivalence.dominance_edges.begin(),
                              equivalence.dominance_edges.end(), key);
}

bool ClassificationLedger::identified(int b) const {
    int comp = component_of[b];
    int count = 0;
    for (int x = 0; x < block_count(); ++x)
        if (component_of[x] == comp) ++count;
    return count == 1;
}

namespace {

struct Fingerprints {
    UndirectedGraph skel;
    std::vector<SepTriple> dsep;
    std::vector<ESepQuad> esep;
    std::vector<std::pair<NodeId, NodeId>> dc;
};

Fingerprints compute_fingerprints(const MDag& g, const NondomRuleSet& rules) {
    Fingerprints f;
    if (rules.skel) f.skel = skeleton(g);
    if (rules.dsep) f.dsep = all_dsep_relations(g);
    if (rules.esep) f.esep = all_esep_relations(g);
    if (rules.dc) f.dc = densely_connected_pairs(g);
    return f;
}

bool same_fingerprints(const Fingerprints& a, const Fingerprints& b,
                       const NondomRuleSet& rules) {
    if (rules.skel && !(a.skel == b.skel)) return false;
    if (rules.dsep && a.dsep != b.dsep) return false;
    if (rules.esep && a.esep != b.esep) return false;
    if (rules.dc && a.dc != b.dc) return false;
    return true;
}

// Group key for the inequivalence-component computation: blocks in different
// groups are pairwise proven inequivalent by some fingerprint rule.
std::string group_key(const BlockInfo& b, const NondomRuleSet& rules, int events_cap,
                      bool* resolved) {
    std::string key;
    if (rules.skel) {
        for (int v = 0; v < b.skel.n; ++v) {
            key += std::to_string(b.skel.adj[v]);
            key += ',';
        }
        key += '/';
    }
    if (rules.dsep) {
        for (const auto& t : b.dsep) key += to_string(t) + ";";
        key += '/';
    }
    if (rules.esep) {
        for (const auto& q : b.esep) key += to_string(q) + ";";
        key += '/';
    }
    if (rules.dc) {
        for (auto [v, w] : b.dc)
            key += std::to_string(v) + "-" + std::to_string(w) + ";";
        key += '/';
    }
    if (rules.supports_max_events > 0) {
        int cap = std::min(events_cap, rules.supports_max_events);
        for (int e = 2; e <= cap; ++e) {
            size_t idx = static_cast<size_t>(e - 2);
            if (idx >= b.support_bits.size()) {
                // The block was identified before this tier was computed;
                // it stays a singleton under any finer comparison.
                *resolved = true;
                return key;
            }
            key.append(reinterpret_cast<const char*>(b.support_bits[idx].data()),
                       b.support_bits[idx].size());
            key += '/';
        }
    }
    return key;
}

// Connected components of the not-yet-proven-inequivalent graph. Inside a
// fingerprint group every pair is unresolved except directed-edge-free
// versus directed-edge-free (distinct directed-edge-free mDAGs are always
// proven inequivalent), so a group splits into singletons exactly when all
// of its blocks carry a directed-edge-free member; one non-carrier keeps
// the group connected through itself.
std::vector<int> compute_components(const std::vector<BlockInfo>& blocks,
                                    const NondomRuleSet& rules, int events_cap,
                                    int* count_out) {
    std::map<std::string, std::vector<int>> groups;
    int next = 0;
    std::vector<int> comp(blocks.size(), -1);
    for (size_t b = 0; b < blocks.size(); ++b) {
        bool resolved = false;
        std::string key = group_key(blocks[b], rules, events_cap, &resolved);
        if (resolved) comp[b] = next++;
        else groups[key].push_back(static_cast<int>(b));
    }
    for (const auto& [key, members] : groups) {
        bool all_def = rules.def;
        for (int b : members)
            if (blocks[b].def_member < 0) all_def = false;
        if (all_def && members.size() > 1) {
            for (int b : members) comp[b] = next++;
        } else {
            for (int b : members) comp[b] = next;
            ++next;
        }
    }
    if (count_out) *count_out = next;
    return comp;
}

int count_identified_from(const std::vector<int>& comp, int count) {
    std::vector<int> size(count, 0);
    for (int c : comp) size[c]++;
    int identified = 0;
    for (int c : comp)
        if (size[c] == 1) identified++;
    return identified;
}

// Directed nondominance tests between two blocks, cheapest rule first.
// Returns the rule index or -1.
int first_proving_rule(const BlockInfo& x, const BlockInfo& y,
                       const NondomRuleSet& rules,
                       const std::vector<MDag>& mdags) {
    // x does not dominate y when:
    if (rules.skel) {  // y's skeleton has an edge absent from x's
        for (int v = 0; v < y.skel.n; ++v)
            if (y.skel.adj[v] & ~x.skel.adj[v]) return static_cast<int>(NondomRule::Skel);
    }
    if (rules.dsep) {  // x presents a d-separation that y lacks
        for (const auto& t : x.dsep)
            if (!std::binary_search(y.dsep.begin(), y.dsep.end(), t))
                return static_cast<int>(NondomRule::Dsep);
    }
    if (rules.esep) {
        for (const auto& q : x.esep)
            if (!std::binary_search(y.esep.begin(), y.esep.end(), q))
                return static_cast<int>(NondomRule::Esep);
    }
    if (rules.dc) {  // a pair densely connected in y but not in x
        for (const auto& p : y.dc)
            if (!std::binary_search(x.dc.begin(), x.dc.end(), p))
                return static_cast<int>(NondomRule::Dc);
    }
    if (rules.def && x.def_member >= 0 && y.def_member >= 0 &&
        x.def_member != y.def_member) {
        if (!structurally_dominates(mdags[x.def_member], mdags[y.def_member]))
            return static_cast<int>(NondomRule::Def);
    }
    if (rules.supports_max_events > 0) {  // a support realizable by y, not x
        size_t tiers = std::min(x.support_bits.size(), y.support_bits.size());
        for (size_t t = 0; t < tiers; ++t) {
            const auto& bx = x.support_bits[t];
            const auto& by = y.support_bits[t];
            for (size_t i = 0; i < bx.size(); ++i)
                if (by[i] & ~bx[i]) return static_cast<int>(NondomRule::Supports);
        }
    }
    return -1;
}

void verify_block_fingerprints(const Universe& u,
                               const std::vector<BlockInfo>& blocks,
                               const NondomRuleSet& rules) {
    for (size_t b = 0; b < blocks.size(); ++b) {
        const BlockInfo& info = blocks[b];
        Fingerprints r;
        r.skel = info.skel;
        r.dsep = info.dsep;
        r.esep = info.esep;
        r.dc = info.dc;
        for (int m : info.members) {
            if (m == info.representative) continue;
            Fingerprints f = compute_fingerprints(u.mdags[m], rules);
            if (!same_fingerprints(f, r, rules))
                throw std::logic_error(
                    "fingerprint differs inside proven-equivalence block " +
                    std::to_string(b) + " (member " + u.mdags[m].encode() + ")");
        }
    }
}

}  // namespace

ClassificationLedger classify(const ClassifyConfig& config) {
    ClassificationLedger led;
    led.n = config.n;
    led.dominance_rules = config.dominance;
    led.nondominance_rules = config.nondominance;
    led.cards = config.cards.empty() ? CardVec(config.n, 2) : config.cards;
    if (static_cast<int>(led.cards.size()) != config.n)
        throw std::invalid_argument("cards length must equal n");

    led.universe = enumerate_universe(config.n);
    led.equivalence = saturate_equivalences(led.universe.mdags, config.dominance);
    std::sort(led.equivalence.dominance_edges.begin(),
              led.equivalence.dominance_edges.end());

    int nb = static_cast<int>(led.equivalence.blocks.size());
    const NondomRuleSet& rules = config.nondominance;

    // Per-block structure and graphical fingerprints.
    led.blocks.resize(nb);
    for (int b = 0; b < nb; ++b) {
        BlockInfo& info = led.blocks[b];
        info.members = led.equivalence.blocks[b];
        info.representative = info.members[0];
        size_t best = led.universe.mdags[info.representative].complex.facets().size();
        for (int m : info.members) {
            const MDag& g = led.universe.mdags[m];
            if (g.complex.facets().size() < best) {
                best = g.complex.facets().size();
                info.representative = m;
            }
            if (is_confounder_free(g)) info.has_confounder_free = true;
            if (is_directed_edge_free(g)) {
                if (info.def_member >= 0)
                    throw std::logic_error(
                        "two directed-edge-free mDAGs in one proven-equivalence "
                        "block; a dominance rule is unsound");
                info.def_member = m;
            }
        }
        Fingerprints f =
            compute_fingerprints(led.universe.mdags[info.representative], rules);
        info.skel = f.skel;
        info.dsep = f.dsep;
        info.esep = f.esep;
        info.dc = f.dc;
    }
    if (config.verify_fingerprints)
        verify_block_fingerprints(led.universe, led.blocks, rules);

    // Tier rows for the fingerprint rules, cheap rules first.
    auto push_row = [&](const NondomRuleSet& r, int cap, const std::string& label) {
        int count = 0;
        auto comp = compute_components(led.blocks, r, cap, &count);
        led.tier_counts.push_back({label, count, count_identified_from(comp, count)});
    };
    if (rules.skel) {
        NondomRuleSet r;
        r.skel = true;
        push_row(r, 0, "skel");
    }
    if (rules.dsep) {
        NondomRuleSet d;
        d.dsep = true;
        push_row(d, 0, "d-sep");
        if (rules.skel) {
            d.skel = true;
            push_row(d, 0, "d-sep+skel");
        }
    }
    if (rules.esep) {
        NondomRuleSet e;
        e.esep = true;
        push_row(e, 0, "e-sep");
        if (rules.dc) {
            e.dc = true;
            push_row(e, 0, "DC+e-sep");
            if (rules.def) {
                e.def = true;
                push_row(e, 0, "DEF+DC+e-sep");
            }
        }
    }

    // Support fingerprints, ascending in event count; only blocks still in a
    // multi-block component are extended, and runs are resumable through the
    // cache.
    if (rules.supports_max_events > 0) {
        SupportCache cache(config.cache_dir);
        for (int e = 2; e <= rules.supports_max_events; ++e) {
            int count = 0;
            auto comp = compute_components(led.blocks, rules, e - 1, &count);
            std::vector<int> size(count, 0);
            for (int c : comp) size[c]++;
            for (int b = 0; b < nb; ++b) {
                if (size[comp[b]] == 1) continue;
                if (static_cast<int>(led.blocks[b].support_bits.size()) != e - 2)
                    continue;  // resolved at an earlier tier
                led.blocks[b].support_bits.push_back(
                    realizable_bitmap(led.universe.mdags[led.blocks[b].representative],
                                      led.cards, e, cache));
            }
            push_row(rules, e, rules.label(e));
        }
    }

    // Final components and directed nondominance records.
    led.component_of = compute_components(led.blocks, rules,
                                          rules.supports_max_events,
                                          &led.component_count);
    led.nondominance.assign(static_cast<size_t>(nb) * nb, -1);
    for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b) {
            if (a == b) continue;
            led.nondominance[static_cast<size_t>(a) * nb + b] =
                static_cast<int8_t>(first_proving_rule(led.blocks[a], led.blocks[b],
                                                       rules, led.universe.mdags));
        }

    // A proven dominance contradicting a proven nondominance is fatal.
    for (auto [a, b] : led.equivalence.dominance_edges)
        if (led.proven_nondominance(a, b))
            throw ContradictionError(
                a, b,
                "block " + std::to_string(a) + " both dominates and provably "
                "does not dominate block " + std::to_string(b));

    // Algebraicness. Method 2: Markov classes of all labeled DAGs bound the
    // algebraic classes from above. Method 1: an inequivalence component
    // none of whose members has a permutation image in a component holding a
    // confounder-free mDAG is certifiably nonalgebraic.
    led.algebraic_upper = markov_class_count(config.n);
    {
        std::vector<char> comp_has_cf(led.component_count, 0);
        for (int b = 0; b < nb; ++b)
            if (led.blocks[b].has_confounder_free) comp_has_cf[led.component_of[b]] = 1;

        auto perms = all_permutations(config.n);
        std::vector<char> comp_possibly_algebraic(led.component_count, 0);
        led.algebraic_status.assign(nb, AlgebraicStatus::Unknown);
        for (int i = 0; i < led.universe.size(); ++i) {
            int b = led.equivalence.block_of[i];
            for (const auto& pi : perms) {
                MDag image = apply_permutation(led.universe.mdags[i], pi);
                if (!is_ordered(image)) continue;
                int j = led.universe.index_of(image);
                int bj = led.equivalence.block_of[j];
                if (led.blocks[bj].has_confounder_free)
                    led.algebraic_status[b] = AlgebraicStatus::Algebraic;
                if (comp_has_cf[led.component_of[bj]])
                    comp_possibly_algebraic[led.component_of[b]] = 1;
            }
        }
        led.nonalgebraic_lower = 0;
        for (int c = 0; c < led.component_count; ++c)
            if (!comp_possibly_algebraic[c]) led.nonalgebraic_lower++;
        for (int b = 0; b < nb; ++b)
            if (!comp_possibly_algebraic[led.component_of[b]])
                led.algebraic_status[b] = AlgebraicStatus::Nonalgebraic;
    }

    return led;
}

int count_components(const ClassificationLedger& ledger, const NondomRuleSet& rules) {
    int count = 0;
    compute_components(ledger.blocks, rules, rules.supports_max_events, &count);
    return count;
}

int count_identified(const ClassificationLedger& ledger, const NondomRuleSet& rules) {
    int count = 0;
    auto comp =
        compute_components(ledger.blocks, rules, rules.supports_max_events, &count);
    return count_identified_from(comp, count);
}

std::vector<int> identified_classes(const ClassificationLedger& ledger) {
    std::vector<int> size(ledger.component_count, 0);
    for (int c : ledger.component_of) size[c]++;
    std::vector<int> out;
    for (int b = 0; b < ledger.block_count(); ++b)
        if (size[ledger.component_of[b]] == 1) out.push_back(b);
    return out;
}

int markov_class_count(int n) {
    std::set<std::string> fingerprints;
    int slots = n * (n - 1);
    for (unsigned em = 0; em < (1u << slots); ++em) {
        DirectedStructure d(n);
        int bit = 0;
        bool bad = false;
        for (int i = 0; i < n && !bad; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if ((em >> bit) & 1) {
                    if (d.has_edge(j, i)) {
                        bad = true;
                        break;
                    }
                    d.add_edge(i, j);
                }
                ++bit;
            }
        if (bad) continue;
        NodeSet remaining = full_set(n);
        bool progress = true;
        while (remaining && progress) {
            progress = false;
            for (int v = 0; v < n; ++v) {
                if (!contains(remaining, v)) continue;
                bool has_parent = false;
                for (int w = 0; w < n; ++w)
                    if (contains(remaining, w) && d.has_edge(w, v)) has_parent = true;
                if (!has_parent) {
                    remaining = without(remaining, v);
                    progress = true;
                }
            }
        }
        if (remaining) continue;  // cyclic
        MDag g(d, SimplicialComplex(n));
        std::string key;
        for (const auto& t : all_dsep_relations(g)) key += to_string(t) + ";";
        fingerprints.insert(key);
    }
    return static_cast<int>(fingerprints.size());
}

HasseDiagram partial_order_report(const ClassificationLedger& ledger) {
    if (ledger.block_count() == 0)
        throw std::invalid_argument("partial_order_report: empty ledger");
    int nb = ledger.block_count();
    const auto& closed = ledger.equivalence.dominance_edges;
    std::vector<std::vector<bool>> reach(nb, std::vector<bool>(nb, false));
    for (auto [a, b] : closed) reach[a][b] = true;

    HasseDiagram h;
    for (auto [a, b] : closed) {
        bool redundant = false;
        for (int c = 0; c < nb && !redundant; ++c)
            if (c != a && c != b && reach[a][c] && reach[c][b]) redundant = true;
        if (!redundant) h.edges.emplace_back(a, b);
    }
    std::vector<bool> has_in(nb, false), has_out(nb, false);
    for (auto [a, b] : closed) {
        has_in[b] = true;
        has_out[a] = true;
    }
    for (int b = 0; b < nb; ++b) {
        if (!has_in[b]) h.maximal.push_back(b);
        if (!has_out[b]) h.minimal.push_back(b);
    }
    return h;
}

std::string hasse_to_dot(const ClassificationLedger& ledger, const HasseDiagram& h) {
    std::ostringstream os;
    os << "digraph dominance {\n  rankdir=TB;\n";
    for (int b = 0; b < ledger.block_count(); ++b) {
        os << "  b" << b << " [label=\"#" << b << " ("
           << ledger.blocks[b].members.size() << " mDAGs)\\n"
           << ledger.universe.mdags[ledger.blocks[b].representative].encode()
           << "\"];\n";
    }
    for (auto [a, b] : h.edges) os << "  b" << a << " -> b" << b << ";\n";
    os << "}\n";
    return os.str();
}

std::string hasse_to_json(const ClassificationLedger& ledger, const HasseDiagram& h) {
    nlohmann::ordered_json j;
    j["blocks"] = ledger.block_count();
    auto edges = nlohmann::ordered_json::array();
    for (auto [a, b] : h.edges) edges.push_back({a, b});
    j["edges"] = edges;
    j["maximal"] = h.maximal;
    j["minimal"] = h.minimal;
    return j.dump(2);
}

std::string ClassificationLedger::to_json(bool include_members) const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["dominance_rules"] = dominance_rules.to_string();
    j["nondominance_rules"] = nondominance_rules.label();
    j["cards"] = cards;
    j["universe_size"] = universe.size();
    j["block_count"] = block_count();
    j["component_count"] = component_count;

    std::vector<int> comp_size(component_count, 0);
    for (int c : component_of) comp_size[c]++;

    auto blocks_json = nlohmann::ordered_json::array();
    for (int b = 0; b < block_count(); ++b) {
        nlohmann::ordered_json bj;
        bj["id"] = b;
        bj["size"] = blocks[b].members.size();
        bj["representative"] = universe.mdags[blocks[b].representative].encode();
        bj["confounder_free"] = blocks[b].has_confounder_free;
        bj["directed_edge_free"] = blocks[b].def_member >= 0;
        bj["component"] = component_of[b];
        bj["identified"] = comp_size[component_of[b]] == 1;
        switch (algebraic_status[b]) {
            case AlgebraicStatus::Algebraic: bj["algebraic"] = "algebraic"; break;
            case AlgebraicStatus::Nonalgebraic: bj["algebraic"] = "nonalgebraic"; break;
            default: bj["algebraic"] = "unknown"; break;
        }
        if (include_members) {
            auto ms = nlohmann::ordered_json::array();
            for (int m : blocks[b].members) ms.push_back(universe.mdags[m].encode());
            bj["members"] = ms;
        }
        blocks_json.push_back(std::move(bj));
    }
    j["blocks"] = blocks_json;

    auto dom = nlohmann::ordered_json::array();
    for (auto [a, b] : equivalence.dominance_edges) dom.push_back({a, b});
    j["dominance_closure"] = dom;

    static const char* rule_names[] = {"skel", "dsep", "esep", "dc", "def", "supports"};
    auto nd = nlohmann::ordered_json::array();
    for (int a = 0; a < block_count(); ++a)
        for (int b = 0; b < block_count(); ++b) {
            if (a == b) continue;
            int8_t r = nondominance[static_cast<size_t>(a) * block_count() + b];
            if (r >= 0) nd.push_back({a, b, rule_names[r]});
        }
    j["nondominance"] = nd;

    auto tiers = nlohmann::ordered_json::array();
    for (const auto& t : tier_counts)
        tiers.push_back({{"rules", t.label},
                         {"components", t.components},
                         {"identified", t.identified}});
    j["tiers"] = tiers;
    j["nonalgebraic_lower"] = nonalgebraic_lower;
    j["algebraic_upper"] = algebraic_upper;
    return j.dump();
}

CompareResult compare_mdags(const MDag& a, const MDag& b, const ClassifyConfig& config) {
    if (a.node_count() != b.node_count())
        throw std::invalid_argument("compare: node counts differ");
    ClassifyConfig cfg = config;
    cfg.n = a.node_count();
    ClassificationLedger led = classify(cfg);
    int ia = led.universe.index_of(a), ib = led.universe.index_of(b);
    if (ia < 0 || ib < 0) throw std::invalid_argument("compare: mDAG not in universe");
    int ba = led.equivalence.block_of[ia], bb = led.equivalence.block_of[ib];

    static const char* rule_names[] = {"skel", "dsep", "esep", "dc", "def", "supports"};
    if (ba == bb)
        return {CompareVerdict::Equivalent,
                "same proven-equivalence block (" + led.dominance_rules.to_string() +
                    ")"};
    bool dom_ab = led.proven_dominance(ba, bb);
    bool dom_ba = led.proven_dominance(bb, ba);
    int nd_ab = led.nondominance[static_cast<size_t>(ba) * led.block_count() + bb];
    int nd_ba = led.nondominance[static_cast<size_t>(bb) * led.block_count() + ba];
    if (dom_ab && nd_ba >= 0)
        return {CompareVerdict::ADominatesB,
                std::string("structural dominance; strictness by ") + rule_names[nd_ba]};
    if (dom_ba && nd_ab >= 0)
        return {CompareVerdict::BDominatesA,
                std::string("structural dominance; strictness by ") + rule_names[nd_ab]};
    if (nd_ab >= 0 && nd_ba >= 0)
        return {CompareVerdict::Incomparable,
                std::string("nondominance both ways: ") + rule_names[nd_ab] + " / " +
                    rule_names[nd_ba]};
    return {CompareVerdict::Unresolved, "no rule decides this pair"};
}

}  // namespace mdag
