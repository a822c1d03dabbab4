#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <algorithm>
#include <vector>

#include "mdag/connectivity.hpp"
#include "mdag/graph.hpp"
#include "mdag/pdag.hpp"
#include "mdag/separation.hpp"
#include "mdag/support.hpp"

namespace mdag::testing {

// Named 3-node representatives, nodal ordering (a,b,c) = (0,1,2).
inline MDag evans() { return make_mdag(3, {{0, 1}, {0, 2}}, {0b011, 0b101}); }
inline MDag instrumental_bac() { return make_mdag(3, {{0, 2}}, {0b011, 0b101}); }
inline MDag instrumental_cab() { return make_mdag(3, {{0, 1}}, {0b011, 0b101}); }
inline MDag instrumental_abc() { return make_mdag(3, {{0, 1}, {1, 2}}, {0b110}); }
inline MDag collider_a() { return make_mdag(3, {}, {0b011, 0b101}); }
inline MDag collider_b() { return make_mdag(3, {}, {0b011, 0b110}); }
inline MDag collider_c() { return make_mdag(3, {{0, 2}, {1, 2}}, {}); }
inline MDag fork3() { return make_mdag(3, {{0, 1}, {0, 2}}, {}); }
inline MDag chain3() { return make_mdag(3, {{0, 1}, {1, 2}}, {}); }
inline MDag triangle() { return make_mdag(3, {}, {0b011, 0b101, 0b110}); }
inline MDag saturated3() { return make_mdag(3, {}, {0b111}); }
inline MDag factorizing3() { return make_mdag(3, {}, {}); }

// Eight-node mDAG with districts {a,b,c,h}, {d}, {e,f,g}; the closure of
// {b,c,g} is {a,b,c,g}.
inline MDag districts_fixture() {
    return make_mdag(8, {{0, 1}, {2, 3}, {4, 6}},
                     {0b00000011, 0b00000110, 0b10000001, 0b00110000, 0b01100000});
}

inline std::vector<NodeSet> random_facets(std::mt19937& rng, int n, int max_facets) {
    std::uniform_int_distribution<int> count(0, max_facets);
    std::uniform_int_distribution<NodeSet> mask(0, full_set(n));
    std::vector<NodeSet> fs;
    int c = count(rng);
    for (int i = 0; i < c; ++i) {
        NodeSet f = mask(rng);
        if (set_size(f) >= 2) fs.push_back(f);
    }
    return fs;
}

inline MDag random_mdag(std::mt19937& rng, int n) {
    DirectedStructure d(n);
    std::bernoulli_distribution coin(0.4);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) d.add_edge(i, j);
    return MDag(std::move(d), SimplicialComplex(n, random_facets(rng, n, n)));
}

// Random pDAG with nv visible and nl latent nodes; latents may be endogenous.
inline PDag random_pdag(std::mt19937& rng, int nv, int nl) {
    PDag p(nv, nl);
    std::bernoulli_distribution coin(0.35);
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j)
            if (coin(rng)) p.add_edge(i, j);
    // Latent-latent edges only low index -> high index, keeping acyclicity.
    for (int u = nv; u < nv + nl; ++u) {
        for (int j = 0; j < nv; ++j) {
            if (coin(rng)) p.add_edge(u, j);      // latent -> visible
            else if (coin(rng)) p.add_edge(j, u); // visible -> latent
        }
        for (int w = u + 1; w < nv + nl; ++w)
            if (coin(rng)) p.add_edge(u, w);
    }
    return p;
}

// Path-enumeration d-separation oracle: A and B are d-separated by C iff
// every simple path between them is blocked (a non-collider in C, or a
// collider none of whose descendants is in C).
inline bool dsep_path_oracle(const PDag& p, NodeSet a, NodeSet b, NodeSet c) {
    int t = p.total();
    using WideSet = PDag::WideSet;
    WideSet conditioned = c;

    std::vector<WideSet> desc(t);
    for (int v = 0; v < t; ++v) {
        WideSet seen = WideSet(1) << v, frontier = seen;
        while (frontier) {
            WideSet next = 0;
            for (int u = 0; u < t; ++u)
                if ((frontier >> u) & 1) next |= p.children(u);
            frontier = next & ~seen;
            seen |= next;
        }
        desc[v] = seen;
    }

    std::vector<bool> on_path(t, false);
    bool found_active = false;

    // v is the path's current endpoint; into_v tells whether the last edge
    // points into v. Extending to w makes v internal, so v's blocking rule
    // is checked against the pair of edge directions at v.
    std::function<void(int, bool)> dfs = [&](int v, bool into_v) {
        for (int w = 0; w < t && !found_active; ++w) {
            if (on_path[w]) continue;
            bool into_w;
            if (p.has_edge(v, w)) into_w = true;        // v -> w
            else if (p.has_edge(w, v)) into_w = false;  // v <- w
            else continue;

            bool collider = into_v && !into_w;
            if (collider) {
                if ((desc[v] & conditioned) == 0) continue;
            } else {
                if ((conditioned >> v) & 1) continue;
            }

            if ((WideSet(b) >> w) & 1) {
                found_active = true;
                return;
            }
            on_path[w] = true;
            dfs(w, into_w);
            on_path[w] = false;
        }
    };

    for (int s = 0; s < t && !found_active; ++s) {
        if (((WideSet(a) >> s) & 1) == 0) continue;
        for (int w = 0; w < t && !found_active; ++w) {
            bool into_w;
            if (p.has_edge(s, w)) into_w = true;
            else if (p.has_edge(w, s)) into_w = false;
            else continue;
            if ((WideSet(b) >> w) & 1) return false;  // direct edge, active
            on_path.assign(t, false);
            on_path[s] = on_path[w] = true;
            dfs(w, into_w);
        }
    }
    return !found_active;
}

// Exhaustive support-realizability oracle: enumerates every assignment of a
// nonempty outcome subset to every response-table entry and tests whether
// the cascade image equals s. Blows up quickly; tiny instances only.
inline bool support_oracle(const PDag& p, const CardVec& cards, const Support& s) {
    EventSpace space(cards);
    int nv = p.visible_count(), m = p.latent_count();
    int k = static_cast<int>(s.size());

    struct Node {
        std::vector<int> vispa, latpa;
        int vis_count = 1, lat_count = 1;
        int base = 0;  // offset into the flat entry array
    };
    std::vector<Node> nodes(nv);
    int entries = 0;
    for (int v = 0; v < nv; ++v) {
        Node& nd = nodes[v];
        for (int u = 0; u < v; ++u)
            if (p.has_edge(u, v)) nd.vispa.push_back(u);
        for (int l = 0; l < m; ++l)
            if (p.has_edge(nv + l, v)) nd.latpa.push_back(l);
        for (int u : nd.vispa) nd.vis_count *= cards[u];
        for (size_t i = 0; i < nd.latpa.size(); ++i) nd.lat_count *= k;
        nd.base = entries;
        entries += nd.vis_count * nd.lat_count;
    }

    std::vector<int> option_count(entries);
    double combos = 1;
    for (int v = 0; v < nv; ++v)
        for (int i = 0; i < nodes[v].vis_count * nodes[v].lat_count; ++i) {
            option_count[nodes[v].base + i] = (1 << cards[v]) - 1;
            combos *= option_count[nodes[v].base + i];
        }
    if (combos > 2e7) throw std::runtime_error("support_oracle: instance too large");

    int lam_total = 1;
    for (int l = 0; l < m; ++l) lam_total *= k;

    std::vector<int> odometer(entries, 1);  // subset masks, 1..(2^c - 1)
    std::vector<int> lambda(std::max(m, 1));
    for (;;) {
        // Evaluate this table assignment.
        uint32_t hit = 0;
        bool closed = true;
        for (int code = 0; code < lam_total && closed; ++code) {
            int cc = code;
            for (int l = 0; l < m; ++l) {
                lambda[l] = cc % k;
                cc /= k;
            }
            std::vector<std::vector<int>> stack = {std::vector<int>()};
            while (!stack.empty() && closed) {
                std::vector<int> digits = stack.back();
                stack.pop_back();
                int v = static_cast<int>(digits.size());
                if (v == nv) {
                    EventId e = space.pack(digits);
                    auto it = std::lower_bound(s.begin(), s.end(), e);
                    if (it == s.end() || *it != e) closed = false;
                    else hit |= 1u << (it - s.begin());
                    continue;
                }
                const Node& nd = nodes[v];
                int vi = 0, mult = 1;
                for (size_t i = 0; i < nd.vispa.size(); ++i) {
                    vi += digits[nd.vispa[i]] * mult;
                    mult *= cards[nd.vispa[i]];
                }
                int li = 0;
                for (size_t i = 0; i < nd.latpa.size(); ++i)
                    li = li * k + lambda[nd.latpa[i]];
                int mask = odometer[nd.base + vi * nd.lat_count + li];
                for (int d = 0; d < cards[v]; ++d) {
                    if (((mask >> d) & 1) == 0) continue;
                    auto next = digits;
                    next.push_back(d);
                    stack.push_back(std::move(next));
                }
            }
        }
        if (closed && hit == ((k >= 32) ? ~0u : ((1u << k) - 1))) return true;

        int i = 0;
        while (i < entries) {
            if (++odometer[i] <= option_count[i]) break;
            odometer[i] = 1;
            ++i;
        }
        if (i == entries) return false;
    }
}

}  // namespace mdag::testing
