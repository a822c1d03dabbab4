#include "mdag/universe.hpp"

#include <functional>
#include <stdexcept>

namespace mdag {

std::vector<std::vector<NodeSet>> enumerate_complexes(int n) {
    std::vector<NodeSet> candidates;
    for (NodeSet s = 0; s <= full_set(n); ++s)
        if (set_size(s) >= 2) candidates.push_back(s);

    std::vector<std::vector<NodeSet>> out;
    std::vector<NodeSet> chosen;
    // Candidates are scanned in increasing mask order; every antichain is
    // produced exactly once with its facets sorted.
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == candidates.size()) {
            out.push_back(chosen);
            return;
        }
        rec(i + 1);
        NodeSet f = candidates[i];
        for (NodeSet g : chosen)
            if (is_subset(f, g) || is_subset(g, f)) return;
        chosen.push_back(f);
        rec(i + 1);
        chosen.pop_back();
    };
    rec(0);
    return out;
}

namespace {

void build_index(Universe& u) {
    u.index.reserve(u.mdags.size() * 2);
    for (int i = 0; i < u.size(); ++i) {
        auto [it, fresh] = u.index.emplace(u.mdags[i].encode(), i);
        if (!fresh) throw std::logic_error("duplicate mDAG encoding");
    }
}

}  // namespace

Universe enumerate_universe(int n) {
    if (n < 2 || n > kMaxNodes) throw std::invalid_argument("n out of range");
    auto complexes = enumerate_complexes(n);

    Universe u;
    u.n = n;
    int pairs = n * (n - 1) / 2;
    for (unsigned em = 0; em < (1u << pairs); ++em) {
        DirectedStructure d(n);
        int bit = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++bit)
                if ((em >> bit) & 1) d.add_edge(i, j);
        for (const auto& facets : complexes)
            u.mdags.emplace_back(d, SimplicialComplex(n, facets));
    }
    build_index(u);
    return u;
}

Universe enumerate_ambient(int n) {
    if (n < 2 || n > 5) throw std::invalid_argument("ambient enumeration: n out of range");
    auto complexes = enumerate_complexes(n);

    Universe u;
    u.n = n;
    int slots = n * (n - 1);
    for (unsigned em = 0; em < (1u << slots); ++em) {
        DirectedStructure d(n);
        int bit = 0;
        bool both = false;
        for (int i = 0; i < n && !both; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if ((em >> bit) & 1) {
                    if (d.has_edge(j, i)) {
                        both = true;
                        break;
                    }
                    d.add_edge(i, j);
                }
                ++bit;
            }
        if (both) continue;
        // Acyclicity via iterative source peeling.
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
        if (remaining) continue;
        for (const auto& facets : complexes)
            u.mdags.emplace_back(d, SimplicialComplex(n, facets));
    }
    build_index(u);
    return u;
}

}  // namespace mdag
