#include "mdag/dominance.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mdag/universe.hpp"

namespace mdag {

bool structurally_dominates(const MDag& g, const MDag& h) {
    if (g.node_count() != h.node_count())
        throw std::invalid_argument("structurally_dominates: node count mismatch");
    return h.directed.edges_subset_of(g.directed) &&
           h.complex.faces_subset_of(g.complex);
}

bool hlp_applicable(const MDag& g, NodeId x, NodeId y) {
    if (x == y || g.directed.has_edge(x, y)) return false;
    if (!is_subset(g.directed.parents(x), g.directed.parents(y))) return false;
    if (!g.complex.covered(x)) return false;  // {x} itself is a facet then
    for (NodeSet f : g.complex.facets())
        if (contains(f, x) && !contains(f, y)) return false;
    return true;
}

MDag hlp_apply(const MDag& g, NodeId x, NodeId y) {
    if (x == y) throw std::invalid_argument("hlp_apply: x == y");
    if (g.directed.has_edge(x, y))
        throw std::invalid_argument("hlp_apply: edge already present");
    // The applicability conditions rule this out: a path y~>x would end in a
    // parent of x, which is then a parent of y, closing a cycle.
    if (contains(g.directed.descendants(y), x))
        throw std::invalid_argument("hlp_apply: edge would create a cycle");
    MDag out = g;
    out.directed.add_edge(x, y);
    return out;
}

namespace {

// Facets of g including the implicit singleton facets of uncovered nodes.
std::vector<NodeSet> facets_with_singletons(const MDag& g) {
    std::vector<NodeSet> fs = g.complex.facets();
    for (int v = 0; v < g.node_count(); ++v)
        if (!g.complex.covered(v)) fs.push_back(single(v));
    std::sort(fs.begin(), fs.end());
    return fs;
}

bool is_facet(const MDag& g, NodeSet f) {
    if (set_size(f) >= 2) {
        const auto& fs = g.complex.facets();
        return std::find(fs.begin(), fs.end(), f) != fs.end();
    }
    return f != 0 && !g.complex.covered(lowest_bit(f));
}

// pa(C) u C within the parents of every d in D.
bool fm_feeding_condition(const MDag& g, NodeSet c, NodeSet d) {
    NodeSet need = g.directed.parents_of_set(c) | c;
    bool ok = true;
    for_each_node(d, [&](NodeId v) {
        if (!is_subset(need, g.directed.parents(v))) ok = false;
    });
    return ok;
}

MDag add_facets(const MDag& g, const std::vector<NodeSet>& fs) {
    MDag out = g;
    for (NodeSet f : fs) out.complex.add_facet(f);
    return out;
}

}  // namespace

bool weak_fm_applicable(const MDag& g, NodeSet c, NodeSet d) {
    if ((c & d) || d == 0 || !is_facet(g, c) || !g.complex.is_face(d)) return false;
    if (!fm_feeding_condition(g, c, d)) return false;
    // C must be the only facet containing any of its nodes.
    for (NodeSet f : g.complex.facets())
        if (f != c && (f & c)) return false;
    return true;
}

MDag weak_fm_apply(const MDag& g, NodeSet c, NodeSet d) {
    if (c & d) throw std::invalid_argument("weak_fm_apply: C and D overlap");
    if (!is_facet(g, c)) throw std::invalid_argument("weak_fm_apply: C not a facet");
    if (d == 0 || !g.complex.is_face(d))
        throw std::invalid_argument("weak_fm_apply: D not a face");
    return add_facets(g, {c | d});
}

bool moderate_fm_applicable(const MDag& g, NodeSet c, NodeSet d) {
    if ((c & d) || d == 0 || !is_facet(g, c) || !g.complex.is_face(d)) return false;
    if (!fm_feeding_condition(g, c, d)) return false;
    // Facets other than C that meet C must contain all of D.
    for (NodeSet f : g.complex.facets())
        if (f != c && (f & c) && !is_subset(d, f)) return false;
    return true;
}

MDag moderate_fm_apply(const MDag& g, NodeSet c, NodeSet d) {
    if (c & d) throw std::invalid_argument("moderate_fm_apply: C and D overlap");
    if (!is_facet(g, c)) throw std::invalid_argument("moderate_fm_apply: C not a facet");
    if (d == 0 || !g.complex.is_face(d))
        throw std::invalid_argument("moderate_fm_apply: D not a face");
    return add_facets(g, {c | d});
}

bool strong_fm_applicable(const MDag& g, const std::vector<NodeSet>& cs, NodeSet d) {
    if (cs.empty() || d == 0 || !g.complex.is_face(d)) return false;
    NodeSet cu = 0;
    for (NodeSet c : cs) {
        if (!is_facet(g, c) || (c & d)) return false;
        if (!fm_feeding_condition(g, c, d)) return false;
        cu |= c;
    }
    for (NodeSet f : g.complex.facets())
        if ((f & cu) && !is_subset(f, cu) && !is_subset(d, f)) return false;
    return true;
}

MDag strong_fm_apply(const MDag& g, const std::vector<NodeSet>& cs, NodeSet d) {
    if (cs.empty()) throw std::invalid_argument("strong_fm_apply: no C facets");
    if (d == 0 || !g.complex.is_face(d))
        throw std::invalid_argument("strong_fm_apply: D not a face");
    std::vector<NodeSet> merged;
    for (NodeSet c : cs) {
        if (c & d) throw std::invalid_argument("strong_fm_apply: C and D overlap");
        if (!is_facet(g, c))
            throw std::invalid_argument("strong_fm_apply: C not a facet");
        merged.push_back(c | d);
    }
    return add_facets(g, merged);
}

MDag evans_apply(const MDag& g, NodeSet c, NodeSet d) {
    MDag out = weak_fm_apply(g, c, d);
    for_each_node(c, [&](NodeId i) {
        for_each_node(d, [&](NodeId j) {
            if (out.directed.has_edge(i, j)) out.directed.remove_edge(i, j);
        });
    });
    return out;
}

RuleTier RuleTier::parse(const std::string& csv) {
    RuleTier t;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "sd") t.sd = true;
        else if (tok == "hlp") t.hlp = true;
        else if (tok == "weakfm") t.weakfm = true;
        else if (tok == "moderatefm") t.moderatefm = true;
        else if (tok == "strongfm") t.strongfm = true;
        else if (tok == "evans") t.evans = true;
        else if (tok == "none") {}
        else throw std::invalid_argument("unknown rule '" + tok + "'");
    }
    return t;
}

RuleTier RuleTier::all() {
    RuleTier t;
    t.sd = t.hlp = t.weakfm = t.moderatefm = t.strongfm = true;
    return t;
}

std::string RuleTier::to_string() const {
    std::string s;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!s.empty()) s += ",";
        s += name;
    };
    add(sd, "sd");
    add(hlp, "hlp");
    add(weakfm, "weakfm");
    add(moderatefm, "moderatefm");
    add(strongfm, "strongfm");
    add(evans, "evans");
    return s.empty() ? "none" : s;
}

std::vector<RuleApplication> enumerate_rule_applications(
    const std::vector<MDag>& universe, const RuleTier& rules,
    const std::function<int(const MDag&)>& index_of) {
    std::vector<RuleApplication> apps;
    auto resolve = [&](const MDag& m) {
        int idx = index_of(m);
        if (idx < 0) throw std::logic_error("rule output not found in universe");
        return idx;
    };

    for (size_t gi = 0; gi < universe.size(); ++gi) {
        const MDag& g = universe[gi];
        int n = g.node_count();
        std::vector<NodeSet> facets = facets_with_singletons(g);
        std::vector<NodeSet> faces = g.complex.all_faces();

        if (rules.hlp) {
            for (NodeId x = 0; x < n; ++x)
                for (NodeId y = 0; y < n; ++y)
                    if (x != y && hlp_applicable(g, x, y)) {
                        RuleApplication a{Rule::HLP, static_cast<int>(gi),
                                          resolve(hlp_apply(g, x, y))};
                        a.x = x;
                        a.y = y;
                        apps.push_back(a);
                    }
        }
        if (rules.weakfm || rules.evans) {
            for (NodeSet c : facets)
                for (NodeSet d : faces) {
                    if (c & d) continue;
                    if (!weak_fm_applicable(g, c, d)) continue;
                    if (rules.weakfm) {
                        RuleApplication a{Rule::WeakFM, static_cast<int>(gi),
                                          resolve(weak_fm_apply(g, c, d))};
                        a.cs = {c};
                        a.d = d;
                        apps.push_back(a);
                    }
                    if (rules.evans) {
                        RuleApplication a{Rule::Evans, static_cast<int>(gi),
                                          resolve(evans_apply(g, c, d))};
                        a.cs = {c};
                        a.d = d;
                        apps.push_back(a);
                    }
                }
        }
        if (rules.moderatefm) {
            for (NodeSet c : facets)
                for (NodeSet d : faces) {
                    if (c & d) continue;
                    if (!moderate_fm_applicable(g, c, d)) continue;
                    RuleApplication a{Rule::ModerateFM, static_cast<int>(gi),
                                      resolve(moderate_fm_apply(g, c, d))};
                    a.cs = {c};
                    a.d = d;
                    apps.push_back(a);
                }
        }
        if (rules.strongfm) {
            for (NodeSet d : faces) {
                std::vector<NodeSet> eligible;
                for (NodeSet c : facets)
                    if (!(c & d) && fm_feeding_condition(g, c, d))
                        eligible.push_back(c);
                if (eligible.empty()) continue;
                int m = static_cast<int>(eligible.size());
                for (unsigned sub = 1; sub < (1u << m); ++sub) {
                    std::vector<NodeSet> cs;
                    for (int i = 0; i < m; ++i)
                        if ((sub >> i) & 1) cs.push_back(eligible[i]);
                    if (!strong_fm_applicable(g, cs, d)) continue;
                    RuleApplication a{Rule::StrongFM, static_cast<int>(gi),
                                      resolve(strong_fm_apply(g, cs, d))};
                    a.cs = cs;
                    a.d = d;
                    apps.push_back(a);
                }
            }
        }
    }
    return apps;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

struct Tarjan {
    const std::vector<std::vector<int>>& adj;
    std::vector<int> index, low, comp;
    std::vector<int> stack;
    std::vector<bool> on_stack;
    int counter = 0, comp_count = 0;

    explicit Tarjan(const std::vector<std::vector<int>>& a)
        : adj(a), index(a.size(), -1), low(a.size(), 0), comp(a.size(), -1),
          on_stack(a.size(), false) {}

    void run() {
        for (size_t v = 0; v < adj.size(); ++v)
            if (index[v] < 0) strongconnect(static_cast<int>(v));
    }

    void strongconnect(int root) {
        std::vector<std::pair<int, size_t>> call;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, ei] = call.back();
            if (ei == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            bool descended = false;
            while (ei < adj[v].size()) {
                int w = adj[v][ei++];
                if (index[w] < 0) {
                    call.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                for (;;) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = comp_count;
                    if (w == v) break;
                }
                comp_count++;
            }
            int child = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[child]);
        }
    }
};

// Structural-dominance cover moves: dropping one directed edge, or dropping
// one facet (keeping its boundary faces). Every structural dominance is a
// chain of covers, so these edges generate the full reachability relation.
std::vector<int> sd_cover_targets(const Universe& amb, const MDag& g) {
    std::vector<int> out;
    int n = g.node_count();
    for (int i = 0; i < n; ++i)
        for_each_node(g.directed.children(i), [&](NodeId j) {
            MDag h = g;
            h.directed.remove_edge(i, j);
            int idx = amb.index_of(h);
            if (idx < 0) throw std::logic_error("cover target missing");
            out.push_back(idx);
        });
    for (NodeSet f : g.complex.facets()) {
        std::vector<NodeSet> next;
        for (NodeSet other : g.complex.facets())
            if (other != f) next.push_back(other);
        for_each_node(f, [&](NodeId v) {
            NodeSet sub = without(f, v);
            if (set_size(sub) >= 2) next.push_back(sub);
        });
        MDag h(g.directed, SimplicialComplex(n, next));
        int idx = amb.index_of(h);
        if (idx < 0) throw std::logic_error("cover target missing");
        out.push_back(idx);
    }
    return out;
}

}  // namespace

EquivalenceResult saturate_equivalences(const std::vector<MDag>& universe,
                                        const RuleTier& rules) {
    if (universe.empty()) return {};
    int n_nodes = universe[0].node_count();
    Universe amb = enumerate_ambient(n_nodes);
    int na = amb.size();

    std::vector<int> uni_to_amb(universe.size());
    for (size_t i = 0; i < universe.size(); ++i) {
        int idx = amb.index_of(universe[i]);
        if (idx < 0) throw std::logic_error("universe member missing from ambient set");
        uni_to_amb[i] = idx;
    }

    UnionFind uf(na);
    if (rules.any_equivalence_rule()) {
        auto apps = enumerate_rule_applications(
            amb.mdags, rules, [&](const MDag& m) { return amb.index_of(m); });
        for (const auto& a : apps) uf.merge(a.source, a.target);
    }

    // Ambient blocks.
    std::vector<int> amb_block(na, -1);
    std::vector<int> block_rep;
    for (int i = 0; i < na; ++i) {
        int r = uf.find(i);
        if (amb_block[r] < 0) {
            amb_block[r] = static_cast<int>(block_rep.size());
            block_rep.push_back(r);
        }
        amb_block[i] = amb_block[r];
    }
    int nb = static_cast<int>(block_rep.size());

    std::vector<std::pair<int, int>> closed_edges;
    if (rules.sd) {
        // Cover edges between ambient blocks.
        std::vector<std::pair<int, int>> epairs;
        for (int i = 0; i < na; ++i) {
            int bi = amb_block[i];
            for (int j : sd_cover_targets(amb, amb.mdags[i])) {
                int bj = amb_block[j];
                if (bi != bj) epairs.emplace_back(bi, bj);
            }
        }
        std::sort(epairs.begin(), epairs.end());
        epairs.erase(std::unique(epairs.begin(), epairs.end()), epairs.end());

        std::vector<std::vector<int>> adj(nb);
        for (auto [a, b] : epairs) adj[a].push_back(b);
        Tarjan scc(adj);
        scc.run();

        // Blocks on a dominance cycle merge; recompute the block structure.
        std::vector<int> comp_first(scc.comp_count, -1);
        for (int b = 0; b < nb; ++b) {
            int c = scc.comp[b];
            if (comp_first[c] < 0) comp_first[c] = b;
            else uf.merge(block_rep[comp_first[c]], block_rep[b]);
        }
        std::fill(amb_block.begin(), amb_block.end(), -1);
        block_rep.clear();
        for (int i = 0; i < na; ++i) {
            int r = uf.find(i);
            if (amb_block[r] < 0) {
                amb_block[r] = static_cast<int>(block_rep.size());
                block_rep.push_back(r);
            }
            amb_block[i] = amb_block[r];
        }
        int nb2 = static_cast<int>(block_rep.size());

        // Recompute cover pairs on the merged blocks.
        std::vector<std::pair<int, int>> epairs2;
        epairs2.reserve(epairs.size());
        for (int i = 0; i < na; ++i) {
            int bi = amb_block[i];
            for (int j : sd_cover_targets(amb, amb.mdags[i])) {
                int bj = amb_block[j];
                if (bi != bj) epairs2.emplace_back(bi, bj);
            }
        }
        std::sort(epairs2.begin(), epairs2.end());
        epairs2.erase(std::unique(epairs2.begin(), epairs2.end()), epairs2.end());

        // Transitive closure over the condensed DAG via reverse topological
        // bitset sweep.
        std::vector<std::vector<int>> adj2(nb2);
        std::vector<int> indeg(nb2, 0);
        for (auto [a, b] : epairs2) {
            adj2[a].push_back(b);
            indeg[b]++;
        }
        std::vector<int> topo;
        {
            std::vector<int> q;
            for (int b = 0; b < nb2; ++b)
                if (indeg[b] == 0) q.push_back(b);
            while (!q.empty()) {
                int v = q.back();
                q.pop_back();
                topo.push_back(v);
                for (int w : adj2[v])
                    if (--indeg[w] == 0) q.push_back(w);
            }
            if (static_cast<int>(topo.size()) != nb2)
                throw std::logic_error("dominance graph has a residual cycle");
        }
        size_t words = (nb2 + 63) / 64;
        std::vector<uint64_t> reach(static_cast<size_t>(nb2) * words, 0);
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            int v = *it;
            uint64_t* rv = &reach[static_cast<size_t>(v) * words];
            rv[v / 64] |= uint64_t(1) << (v % 64);
            for (int w : adj2[v]) {
                const uint64_t* rw = &reach[static_cast<size_t>(w) * words];
                for (size_t k = 0; k < words; ++k) rv[k] |= rw[k];
            }
        }

        // Restrict to blocks that contain ordered-universe members; the
        // closed reachability between them is the proven dominance relation.
        std::vector<int> uni_blocks;  // ambient block ids holding universe members
        {
            std::vector<char> seen(nb2, 0);
            for (size_t i = 0; i < universe.size(); ++i) {
                int b = amb_block[uni_to_amb[i]];
                if (!seen[b]) {
                    seen[b] = 1;
                    uni_blocks.push_back(b);
                }
            }
        }
        std::sort(uni_blocks.begin(), uni_blocks.end());
        std::unordered_map<int, int> amb_block_to_out;
        for (size_t i = 0; i < uni_blocks.size(); ++i)
            amb_block_to_out[uni_blocks[i]] = static_cast<int>(i);
        for (size_t i = 0; i < uni_blocks.size(); ++i) {
            const uint64_t* ri = &reach[static_cast<size_t>(uni_blocks[i]) * words];
            for (size_t j = 0; j < uni_blocks.size(); ++j) {
                if (i == j) continue;
                int bj = uni_blocks[j];
                if ((ri[bj / 64] >> (bj % 64)) & 1)
                    closed_edges.emplace_back(static_cast<int>(i),
                                              static_cast<int>(j));
            }
        }
        // Renumber universe blocks below using the same sorted order.
        EquivalenceResult res;
        res.block_of.resize(universe.size());
        res.blocks.assign(uni_blocks.size(), {});
        for (size_t i = 0; i < universe.size(); ++i) {
            int b = amb_block_to_out[amb_block[uni_to_amb[i]]];
            res.block_of[i] = b;
            res.blocks[b].push_back(static_cast<int>(i));
        }
        res.dominance_edges = std::move(closed_edges);
        return res;
    }

    // Without structural dominance: restrict the equivalence blocks.
    EquivalenceResult res;
    std::unordered_map<int, int> renum;
    res.block_of.resize(universe.size());
    for (size_t i = 0; i < universe.size(); ++i) {
        int b = amb_block[uni_to_amb[i]];
        auto it = renum.find(b);
        int out;
        if (it == renum.end()) {
            out = static_cast<int>(res.blocks.size());
            renum[b] = out;
            res.blocks.emplace_back();
        } else {
            out = it->second;
        }
        res.block_of[i] = out;
        res.blocks[out].push_back(static_cast<int>(i));
    }
    res.dominance_edges.clear();
    return res;
}

}  // namespace mdag
