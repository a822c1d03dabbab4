#include "mdag/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mdag {

NodeSet DirectedStructure::parents(NodeId v) const {
    NodeSet p = 0;
    for (int i = 0; i < n_; ++i)
        if (contains(children_[i], v)) p = with(p, i);
    return p;
}

NodeSet DirectedStructure::parents_of_set(NodeSet s) const {
    NodeSet p = 0;
    for (int i = 0; i < n_; ++i)
        if (children_[i] & s) p = with(p, i);
    return p;
}

NodeSet DirectedStructure::descendants(NodeId v) const {
    NodeSet seen = single(v);
    NodeSet frontier = seen;
    while (frontier) {
        NodeSet next = 0;
        for_each_node(frontier, [&](NodeId u) { next |= children_[u]; });
        frontier = next & ~seen;
        seen |= next;
    }
    return seen;
}

NodeSet DirectedStructure::ancestors_of_set(NodeSet s) const {
    return ancestors_within(s, full_set(n_));
}

NodeSet DirectedStructure::ancestors_within(NodeSet s, NodeSet alive) const {
    NodeSet seen = s & alive;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int i = 0; i < n_; ++i) {
            if (!contains(alive, i) || contains(seen, i)) continue;
            if (children_[i] & seen) {
                seen = with(seen, i);
                grew = true;
            }
        }
    }
    return seen;
}

int DirectedStructure::edge_count() const {
    int c = 0;
    for (int i = 0; i < n_; ++i) c += set_size(children_[i]);
    return c;
}

bool DirectedStructure::edges_subset_of(const DirectedStructure& other) const {
    for (int i = 0; i < n_; ++i)
        if (!is_subset(children_[i], other.children_[i])) return false;
    return true;
}

bool DirectedStructure::is_ordered() const {
    for (int i = 0; i < n_; ++i)
        if (children_[i] & ((single(i) << 1) - 1)) return false;
    return true;
}

SimplicialComplex::SimplicialComplex(int n, std::vector<NodeSet> facets)
    : n_(n), facets_(std::move(facets)) {
    normalize();
}

void SimplicialComplex::normalize() {
    std::vector<NodeSet> keep;
    for (NodeSet f : facets_) {
        if (set_size(f) < 2) continue;
        bool absorbed = false;
        for (NodeSet g : facets_) {
            if (g != f && is_subset(f, g)) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed) keep.push_back(f);
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    facets_ = keep;
}

bool SimplicialComplex::is_face(NodeSet f) const {
    if (set_size(f) <= 1) return true;
    for (NodeSet g : facets_)
        if (is_subset(f, g)) return true;
    return false;
}

bool SimplicialComplex::covered(NodeId v) const {
    for (NodeSet g : facets_)
        if (contains(g, v)) return true;
    return false;
}

NodeSet SimplicialComplex::facets_containing(NodeId v, std::vector<NodeSet>* out) const {
    NodeSet joined = 0;
    for (NodeSet g : facets_)
        if (contains(g, v)) {
            joined |= g;
            if (out) out->push_back(g);
        }
    return joined;
}

std::vector<NodeSet> SimplicialComplex::all_faces() const {
    std::vector<NodeSet> faces;
    for (NodeSet f : facets_)
        for_each_subset(f, [&](NodeSet sub) { faces.push_back(sub); });
    for (int v = 0; v < n_; ++v) faces.push_back(single(v));
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    return faces;
}

void SimplicialComplex::add_facet(NodeSet f) {
    if (is_face(f)) return;
    facets_.push_back(f);
    normalize();
}

bool SimplicialComplex::faces_subset_of(const SimplicialComplex& other) const {
    for (NodeSet f : facets_)
        if (!other.is_face(f)) return false;
    return true;
}

Permutation Permutation::identity(int n) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
    std::vector<int> m(map_.size());
    for (size_t i = 0; i < map_.size(); ++i) m[map_[i]] = static_cast<int>(i);
    return Permutation(std::move(m));
}

Permutation Permutation::compose(const Permutation& then) const {
    std::vector<int> m(map_.size());
    for (size_t i = 0; i < map_.size(); ++i) m[i] = then(map_[i]);
    return Permutation(std::move(m));
}

NodeSet Permutation::apply(NodeSet s) const {
    NodeSet out = 0;
    for_each_node(s, [&](NodeId v) { out = with(out, map_[v]); });
    return out;
}

std::vector<Permutation> all_permutations(int n) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation(m));
    } while (std::next_permutation(m.begin(), m.end()));
    return out;
}

bool UndirectedGraph::edges_subset_of(const UndirectedGraph& o) const {
    for (int i = 0; i < n; ++i)
        if (!is_subset(adj[i], o.adj[i])) return false;
    return true;
}

bool UndirectedGraph::operator==(const UndirectedGraph& o) const {
    if (n != o.n) return false;
    for (int i = 0; i < n; ++i)
        if (adj[i] != o.adj[i]) return false;
    return true;
}

std::string MDag::encode() const {
    std::string s;
    int n = node_count();
    s.reserve(2 + n * 3 + complex.facets().size() * 3);
    s += static_cast<char>('0' + n);
    s += ':';
    for (int i = 0; i < n; ++i) {
        char buf[8];
        snprintf(buf, sizeof buf, "%04x", directed.children(i));
        s += buf;
    }
    s += '/';
    for (NodeSet f : complex.facets()) {
        char buf[8];
        snprintf(buf, sizeof buf, "%04x.", f);
        s += buf;
    }
    return s;
}

MDag make_mdag(int n, const std::vector<std::pair<int, int>>& edges,
               const std::vector<NodeSet>& facets) {
    DirectedStructure d(n);
    for (auto [i, j] : edges) d.add_edge(i, j);
    return MDag(std::move(d), SimplicialComplex(n, facets));
}

NodeSet parents(const MDag& g, NodeId v) { return g.directed.parents(v); }
NodeSet children(const MDag& g, NodeId v) { return g.directed.children(v); }
NodeSet ancestors(const MDag& g, NodeId v) { return g.directed.ancestors(v); }
NodeSet descendants(const MDag& g, NodeId v) { return g.directed.descendants(v); }

bool is_ordered(const MDag& g) {
    int n = g.node_count();
    for (int i = 0; i < n; ++i)
        if (g.directed.children(i) & ((single(i) << 1) - 1)) return false;
    return true;
}

bool is_confounder_free(const MDag& g) { return g.complex.facets().empty(); }

bool is_directed_edge_free(const MDag& g) { return g.directed.edge_count() == 0; }

UndirectedGraph skeleton(const MDag& g) {
    UndirectedGraph u;
    u.n = g.node_count();
    for (int i = 0; i < u.n; ++i)
        for_each_node(g.directed.children(i), [&](NodeId j) { u.add_edge(i, j); });
    for (NodeSet f : g.complex.facets())
        for_each_node(f, [&](NodeId a) {
            for_each_node(f, [&](NodeId b) {
                if (a < b) u.add_edge(a, b);
            });
        });
    return u;
}

MDag induced_subgraph(const MDag& g, NodeSet s) {
    if (s == 0) throw std::invalid_argument("induced_subgraph: empty node set");
    int n = g.node_count();
    std::vector<int> compact(n, -1);
    int m = 0;
    for (int v = 0; v < n; ++v)
        if (contains(s, v)) compact[v] = m++;

    DirectedStructure d(m);
    for (int v = 0; v < n; ++v) {
        if (!contains(s, v)) continue;
        for_each_node(g.directed.children(v) & s,
                      [&](NodeId w) { d.add_edge(compact[v], compact[w]); });
    }
    std::vector<NodeSet> facets;
    for (NodeSet f : g.complex.facets()) {
        NodeSet inter = f & s;
        NodeSet mapped = 0;
        for_each_node(inter, [&](NodeId v) { mapped = with(mapped, compact[v]); });
        if (set_size(mapped) >= 2) facets.push_back(mapped);
    }
    return MDag(std::move(d), SimplicialComplex(m, facets));
}

MDag apply_permutation(const MDag& g, const Permutation& pi) {
    int n = g.node_count();
    DirectedStructure d(n);
    for (int i = 0; i < n; ++i)
        for_each_node(g.directed.children(i),
                      [&](NodeId j) { d.add_edge(pi(i), pi(j)); });
    std::vector<NodeSet> facets;
    for (NodeSet f : g.complex.facets()) facets.push_back(pi.apply(f));
    return MDag(std::move(d), SimplicialComplex(n, facets));
}

std::string to_text(const MDag& g) {
    std::ostringstream os;
    int n = g.node_count();
    os << "nodes " << n << "\n";
    os << "edges";
    bool first = true;
    for (int i = 0; i < n; ++i)
        for_each_node(g.directed.children(i), [&](NodeId j) {
            os << (first ? " " : ",") << i << "->" << j;
            first = false;
        });
    os << "\nfacets";
    first = true;
    for (NodeSet f : g.complex.facets()) {
        os << (first ? " " : ";") << "{";
        bool fi = true;
        for_each_node(f, [&](NodeId v) {
            os << (fi ? "" : ",") << v;
            fi = false;
        });
        os << "}";
        first = false;
    }
    os << "\n";
    return os.str();
}

namespace {

[[noreturn]] void bad(const std::string& why) {
    throw std::invalid_argument("mDAG parse error: " + why);
}

}  // namespace

MDag parse_text(const std::string& text) {
    std::istringstream is(text);
    std::string kw;
    int n = 0;
    if (!(is >> kw >> n) || kw != "nodes") bad("expected 'nodes <n>'");
    if (n < 1 || n > kMaxNodes) bad("node count out of range");

    std::string line;
    std::getline(is, line);
    if (!std::getline(is, line)) bad("missing 'edges' line");
    std::istringstream es(line);
    if (!(es >> kw) || kw != "edges") bad("expected 'edges'");
    DirectedStructure d(n);
    std::string rest;
    std::getline(es, rest);
    {
        std::istringstream rs(rest);
        std::string tok;
        while (std::getline(rs, tok, ',')) {
            if (tok.find_first_not_of(" \t") == std::string::npos) continue;
            int i, j;
            char c1, c2;
            std::istringstream ts(tok);
            if (!(ts >> i >> c1 >> c2 >> j) || c1 != '-' || c2 != '>')
                bad("malformed edge '" + tok + "'");
            if (i < 0 || j < 0 || i >= n || j >= n) bad("edge index out of range");
            if (i >= j) bad("edge violates the nodal ordering");
            d.add_edge(i, j);
        }
    }

    std::vector<NodeSet> facets;
    if (std::getline(is, line)) {
        std::istringstream fs(line);
        if (!(fs >> kw) || kw != "facets") bad("expected 'facets'");
        std::getline(fs, rest);
        std::istringstream rs(rest);
        std::string tok;
        while (std::getline(rs, tok, ';')) {
            size_t l = tok.find('{'), r = tok.find('}');
            if (l == std::string::npos) continue;
            if (r == std::string::npos) bad("unterminated facet");
            NodeSet f = 0;
            std::istringstream inner(tok.substr(l + 1, r - l - 1));
            std::string num;
            while (std::getline(inner, num, ',')) {
                int v = std::stoi(num);
                if (v < 0 || v >= n) bad("facet index out of range");
                f = with(f, v);
            }
            if (set_size(f) < 2) bad("facet of size < 2");
            facets.push_back(f);
        }
    }
    return MDag(std::move(d), SimplicialComplex(n, facets));
}

std::string to_json(const MDag& g) {
    nlohmann::ordered_json j;
    int n = g.node_count();
    j["n"] = n;
    auto edges = nlohmann::ordered_json::array();
    for (int i = 0; i < n; ++i)
        for_each_node(g.directed.children(i),
                      [&](NodeId k) { edges.push_back({i, k}); });
    j["edges"] = edges;
    auto facets = nlohmann::ordered_json::array();
    for (NodeSet f : g.complex.facets()) facets.push_back(set_to_vector(f));
    j["facets"] = facets;
    return j.dump();
}

MDag parse_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    if (n < 1 || n > kMaxNodes) bad("node count out of range");
    DirectedStructure d(n);
    for (const auto& e : j.at("edges")) {
        int a = e.at(0).get<int>(), b = e.at(1).get<int>();
        if (a < 0 || b < 0 || a >= n || b >= n) bad("edge index out of range");
        if (a >= b) bad("edge violates the nodal ordering");
        d.add_edge(a, b);
    }
    std::vector<NodeSet> facets;
    for (const auto& fj : j.at("facets")) {
        NodeSet f = 0;
        for (const auto& v : fj) {
            int x = v.get<int>();
            if (x < 0 || x >= n) bad("facet index out of range");
            f = with(f, x);
        }
        if (set_size(f) < 2) bad("facet of size < 2");
        facets.push_back(f);
    }
    return MDag(std::move(d), SimplicialComplex(n, facets));
}

MDag load_mdag_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json(text);
    return parse_text(text);
}

}  // namespace mdag
