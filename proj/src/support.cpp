#include "mdag/support.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdag {

EventSpace::EventSpace(CardVec c) : cards(std::move(c)) {
    stride.resize(cards.size());
    int acc = 1;
    for (int v = static_cast<int>(cards.size()) - 1; v >= 0; --v) {
        if (cards[v] < 1 || cards[v] > 8)
            throw std::invalid_argument("cardinality out of range");
        stride[v] = acc;
        acc *= cards[v];
    }
    total = acc;
}

EventId EventSpace::pack(const std::vector<int>& digits) const {
    EventId e = 0;
    for (size_t v = 0; v < cards.size(); ++v)
        e += static_cast<EventId>(digits[v] * stride[v]);
    return e;
}

std::string EventSpace::to_string(EventId e) const {
    std::string s;
    for (size_t v = 0; v < cards.size(); ++v)
        s += static_cast<char>('0' + digit(e, static_cast<int>(v)));
    return s;
}

EventId EventSpace::parse(const std::string& digits) const {
    if (digits.size() != cards.size())
        throw std::invalid_argument("event has wrong length");
    std::vector<int> d(cards.size());
    for (size_t v = 0; v < cards.size(); ++v) {
        d[v] = digits[v] - '0';
        if (d[v] < 0 || d[v] >= cards[v]) throw std::invalid_argument("digit out of range");
    }
    return pack(d);
}

std::string support_to_string(const EventSpace& space, const Support& s) {
    std::string out;
    for (EventId e : s) {
        out += space.to_string(e);
        out += "\n";
    }
    return out;
}

Support parse_support(const EventSpace& space, const std::string& lines) {
    Support s;
    std::istringstream is(lines);
    std::string line;
    while (std::getline(is, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty()) continue;
        s.push_back(space.parse(line));
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) throw std::invalid_argument("empty support");
    return s;
}

bool next_combination(std::vector<EventId>& comb, int total) {
    int e = static_cast<int>(comb.size());
    for (int i = e - 1; i >= 0; --i) {
        if (comb[i] < static_cast<EventId>(total - (e - i))) {
            comb[i]++;
            for (int j = i + 1; j < e; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

uint64_t combination_count(int total, int events) {
    if (events < 0 || events > total) return 0;
    uint64_t r = 1;
    for (int i = 0; i < events; ++i) r = r * (total - i) / (i + 1);
    return r;
}

namespace {

// Backtracking search for a set-valued response model generating exactly s.
//
// Each visible node carries a table from (visible-parent valuation, latent-
// parent valuation) to a nonempty outcome subset; the subset is the image of
// the node's absorbed error variable. A support is realizable iff tables
// exist whose cascade image over all latent valuations is exactly s, with
// every latent cardinality k = |s| (coarse-graining any witness model to the
// event list shows k = |s| suffices).
//
// With the diagonal requirement on: event i must appear in the cascade of
// the all-i latent valuation. This is sound because each latent's value
// columns can be rewired per event witness (copying columns never enlarges
// the image), and it is what makes refutation tractable.
struct SupportSolver {
    const PDag& p;
    const EventSpace& space;
    const Support* s = nullptr;
    int nv, m, ns, k;  // ns = |s| events, k = latent cardinality >= ns
    bool diagonal;

    struct Node {
        std::vector<int> vispa;
        std::vector<int> latpa;
        std::vector<int> visstride;  // per vispa position
        int vis_count = 1, lat_count = 1;
        std::vector<uint8_t> table;  // subset masks, 0 = unassigned
    };
    std::vector<Node> nodes;

    // s as per-node digits.
    std::vector<std::array<uint8_t, kMaxNodes>> event_digits;

    // Trail of table assignments for rollback.
    struct TrailEntry {
        int node, idx;
    };
    std::vector<TrailEntry> trail;

    struct ChoicePoint {
        int node, idx;
        size_t trail_size;
        size_t gen_size;
        int lambda_pos;  // index into sweep order
        const std::vector<uint8_t>* options;
        size_t next = 0;
    };
    std::vector<ChoicePoint> choices;

    std::vector<int> gen_stack;  // event indices, for rollback
    uint32_t gen_mask = 0;

    // Option lists for choice points, indexed by allowed mask and required
    // digit (+1); shared across supports. options_for[c] is built once per
    // distinct node cardinality.
    std::vector<std::vector<std::vector<uint8_t>>> option_table;  // [card]

    std::vector<int> sweep;        // latent valuation codes in visit order
    std::vector<int> lambda_digits;  // scratch, size m

    SupportSolver(const PDag& pd, const EventSpace& sp, int event_count,
                  bool use_diagonal, int latent_card)
        : p(pd), space(sp), nv(pd.visible_count()),
          m(pd.latent_count()), ns(event_count),
          k(latent_card < ns ? ns : latent_card), diagonal(use_diagonal),
          lambda_digits(std::max(m, 1)) {
        nodes.resize(nv);
        for (int v = 0; v < nv; ++v) {
            Node& nd = nodes[v];
            for (int u = 0; u < v; ++u)
                if (p.has_edge(u, v)) nd.vispa.push_back(u);
            for (int l = 0; l < m; ++l)
                if (p.has_edge(nv + l, v)) nd.latpa.push_back(l);
            nd.visstride.resize(nd.vispa.size());
            for (size_t i = 0; i < nd.vispa.size(); ++i) {
                nd.visstride[i] = nd.vis_count;
                nd.vis_count *= space.cards[nd.vispa[i]];
            }
            for (size_t i = 0; i < nd.latpa.size(); ++i) nd.lat_count *= k;
            nd.table.assign(static_cast<size_t>(nd.vis_count) * nd.lat_count, 0);
        }
        int max_card = 2;
        for (int v = 0; v < nv; ++v) max_card = std::max(max_card, space.cards[v]);
        option_table.resize(max_card + 1);
        for (int c = 2; c <= max_card; ++c) {
            auto& per_card = option_table[c];
            per_card.resize((1u << c) * (c + 1));
            for (uint8_t allowed = 1; allowed < (1u << c); ++allowed)
                for (int req = -1; req < c; ++req) {
                    auto& list = per_card[allowed * (c + 1) + (req + 1)];
                    for (uint8_t sub = allowed; sub; sub = (sub - 1) & allowed)
                        list.push_back(sub);
                    std::sort(list.begin(), list.end(), [&](uint8_t a, uint8_t b) {
                        bool ra = req >= 0 && ((a >> req) & 1);
                        bool rb = req >= 0 && ((b >> req) & 1);
                        if (ra != rb) return ra;
                        int pa = std::popcount(a), pb = std::popcount(b);
                        if (pa != pb) return pa < pb;
                        return a < b;
                    });
                }
        }
        event_digits.resize(ns);

        // Diagonals first, then the rest in lex order.
        int total = 1;
        for (int l = 0; l < m; ++l) total *= k;
        std::vector<bool> is_diag(total, false);
        if (m > 0) {
            for (int i = 0; i < k; ++i) {
                int code = 0, mult = 1;
                for (int l = 0; l < m; ++l) {
                    code += i * mult;
                    mult *= k;
                }
                is_diag[code] = true;
                sweep.push_back(code);
            }
            for (int c = 0; c < total; ++c)
                if (!is_diag[c]) sweep.push_back(c);
        } else {
            sweep.push_back(0);
        }
    }

    // Reseats the solver on a new support of the same event count; table
    // shapes, sweep order and option tables are reused.
    void reset(const Support& supp) {
        s = &supp;
        for (int i = 0; i < ns; ++i)
            for (int v = 0; v < nv; ++v)
                event_digits[i][v] = static_cast<uint8_t>(space.digit(supp[i], v));
        for (auto& nd : nodes) std::fill(nd.table.begin(), nd.table.end(), 0);
        trail.clear();
        choices.clear();
        gen_stack.clear();
        gen_mask = 0;
    }

    void decode_lambda(int code) {
        for (int l = 0; l < m; ++l) {
            lambda_digits[l] = code % k;
            code /= k;
        }
    }

    int entry_index(const Node& nd, const std::array<uint8_t, kMaxNodes>& x) const {
        int vis = 0;
        for (size_t i = 0; i < nd.vispa.size(); ++i)
            vis += x[nd.vispa[i]] * nd.visstride[i];
        int lat = 0;
        for (size_t i = 0; i < nd.latpa.size(); ++i)
            lat = lat * k + lambda_digits[nd.latpa[i]];
        return vis * nd.lat_count + lat;
    }

    void assign(int node, int idx, uint8_t mask) {
        nodes[node].table[idx] = mask;
        trail.push_back({node, idx});
    }

    void rollback_trail(size_t to) {
        while (trail.size() > to) {
            auto [node, idx] = trail.back();
            trail.pop_back();
            nodes[node].table[idx] = 0;
        }
    }

    void rollback_gen(size_t to) {
        while (gen_stack.size() > to) {
            gen_mask &= ~(1u << gen_stack.back());
            gen_stack.pop_back();
        }
    }

    // Allowed digits for node v given the alive subrange [lo,hi) of s.
    // Returns a bitmask over digits; also notes the digit of the required
    // event when it lies in the subrange.
    uint8_t allowed_digits(int v, int lo, int hi) const {
        uint8_t mask = 0;
        for (int i = lo; i < hi; ++i) mask |= uint8_t(1) << event_digits[i][v];
        return mask;
    }

    // Narrows [lo,hi) to events whose digit at v equals d.
    std::pair<int, int> narrow(int v, int lo, int hi, int d) const {
        int a = lo;
        while (a < hi && event_digits[a][v] != d) ++a;
        int b = a;
        while (b < hi && event_digits[b][v] == d) ++b;
        return {a, b};
    }

    // Cascades one latent valuation; x holds digits chosen so far. The
    // subrange [lo,hi) lists the events of s compatible with the prefix.
    // required = event index that must appear among this valuation's paths
    // (or -1). Creates choice points at unassigned entries.
    bool cascade(int pos, int v, int lo, int hi, std::array<uint8_t, kMaxNodes>& x,
                 int required) {
        if (v == nv) {
            if (!(gen_mask & (1u << lo))) {
                gen_mask |= 1u << lo;
                gen_stack.push_back(lo);
            }
            return true;
        }
        Node& nd = nodes[v];
        int idx = entry_index(nd, x);
        uint8_t allowed = allowed_digits(v, lo, hi);
        uint8_t cur = nd.table[idx];
        if (cur == 0) {
            int req_digit = -1;
            if (required >= lo && required < hi) req_digit = event_digits[required][v];
            int c = space.cards[v];
            const auto& opts = option_table[c][allowed * (c + 1) + (req_digit + 1)];
            ChoicePoint cp;
            cp.node = v;
            cp.idx = idx;
            cp.trail_size = trail.size();
            cp.gen_size = gen_stack.size();
            cp.lambda_pos = pos;
            cp.options = &opts;
            cp.next = 1;
            assign(v, idx, opts[0]);
            choices.push_back(std::move(cp));
            cur = nodes[v].table[idx];
        } else {
            if (cur & ~allowed) return false;  // some value exits the support
        }
        // Every value of the set must lead a live path.
        for (int d = 0; d < space.cards[v]; ++d) {
            if (((cur >> d) & 1) == 0) continue;
            auto [a, b] = narrow(v, lo, hi, d);
            x[v] = static_cast<uint8_t>(d);
            int req = (required >= lo && required < hi &&
                       event_digits[required][v] == d)
                          ? required
                          : -1;
            if (!cascade(pos, v + 1, a, b, x, req)) return false;
        }
        return true;
    }

    // Runs the valuation at sweep position pos, including the diagonal
    // hosting requirement.
    bool run_position(int pos) {
        decode_lambda(sweep[pos]);
        std::array<uint8_t, kMaxNodes> x{};
        int required = (diagonal && m > 0 && pos < ns) ? pos : -1;
        if (!cascade(pos, 0, 0, ns, x, required)) return false;
        if (required >= 0 && !(gen_mask & (1u << required))) return false;
        return true;
    }

    bool solve() {
        int pos = 0;
        int total = static_cast<int>(sweep.size());
        for (;;) {
            if (pos == total) {
                uint32_t all = (ns >= 32) ? ~0u : ((1u << ns) - 1);
                if (gen_mask == all) return true;
                if (!backtrack(pos)) return false;
                continue;
            }
            if (run_position(pos)) {
                ++pos;
            } else if (!backtrack(pos)) {
                return false;
            }
        }
    }

    // Restores the newest choice point that still has an untried option and
    // resumes the sweep at its valuation; later positions replay under the
    // new assignment. Returns false once the search space is exhausted.
    bool backtrack(int& pos) {
        while (!choices.empty()) {
            ChoicePoint& cp = choices.back();
            rollback_trail(cp.trail_size);
            rollback_gen(cp.gen_size);
            if (cp.next < cp.options->size()) {
                assign(cp.node, cp.idx, (*cp.options)[cp.next++]);
                pos = cp.lambda_pos;
                return true;
            }
            choices.pop_back();
        }
        return false;
    }

    ResponseAssignment extract_witness() const {
        ResponseAssignment ra;
        ra.k = k;
        ra.nodes.resize(nv);
        for (int v = 0; v < nv; ++v) {
            const Node& nd = nodes[v];
            auto& nt = ra.nodes[v];
            nt.visible_parents = nd.vispa;
            nt.latent_parents = nd.latpa;
            nt.vis_count = nd.vis_count;
            nt.lat_count = nd.lat_count;
            nt.out.assign(static_cast<size_t>(nd.vis_count) * nd.lat_count * k, 0);
            for (int vi = 0; vi < nd.vis_count; ++vi)
                for (int li = 0; li < nd.lat_count; ++li) {
                    uint8_t mask = nd.table[static_cast<size_t>(vi) * nd.lat_count + li];
                    std::vector<uint8_t> vals;
                    for (int d = 0; d < space.cards[v]; ++d)
                        if ((mask >> d) & 1) vals.push_back(static_cast<uint8_t>(d));
                    if (vals.empty()) vals.push_back(0);  // never consulted
                    for (int e = 0; e < k; ++e) {
                        size_t at = (static_cast<size_t>(vi) * nd.lat_count + li) *
                                        static_cast<size_t>(k) +
                                    e;
                        nt.out[at] = vals[std::min<size_t>(e, vals.size() - 1)];
                    }
                }
        }
        return ra;
    }
};

}  // namespace

namespace detail {

bool support_realizable_impl(const PDag& p, const CardVec& cards, const Support& s,
                             bool diagonal_symmetry, ResponseAssignment* witness,
                             int latent_card) {
    if (static_cast<int>(cards.size()) != p.visible_count())
        throw std::invalid_argument("support_realizable: cardinality mismatch");
    if (!p.latents_exogenous())
        throw std::invalid_argument("support_realizable: latents must be exogenous");
    EventSpace space(cards);
    if (s.empty()) throw std::invalid_argument("support_realizable: empty support");
    for (EventId e : s)
        if (static_cast<int>(e) >= space.total)
            throw std::invalid_argument("support_realizable: event out of range");
    if (!std::is_sorted(s.begin(), s.end()))
        throw std::invalid_argument("support_realizable: support not canonical");

    SupportSolver solver(p, space, static_cast<int>(s.size()), diagonal_symmetry,
                         latent_card);
    solver.reset(s);
    if (!solver.solve()) return false;
    if (witness) *witness = solver.extract_witness();
    return true;
}

}  // namespace detail

bool support_realizable(const PDag& p, const CardVec& cards, const Support& s,
                        ResponseAssignment* witness) {
    return detail::support_realizable_impl(p, cards, s, /*diagonal_symmetry=*/true,
                                           witness, -1);
}

Support evaluate_assignment(const PDag& p, const CardVec& cards,
                            const ResponseAssignment& ra) {
    EventSpace space(cards);
    int nv = p.visible_count();
    int k = ra.k;
    int m = p.latent_count();
    int total = 1;
    for (int l = 0; l < m; ++l) total *= k;

    Support out;
    std::vector<int> lambda(std::max(m, 1));
    for (int code = 0; code < total; ++code) {
        int c = code;
        for (int l = 0; l < m; ++l) {
            lambda[l] = c % k;
            c /= k;
        }
        // Per-valuation set cascade: each node contributes the image of its
        // error variable at the given inputs.
        std::vector<std::pair<std::vector<int>, int>> stack;  // (digits, depth)
        stack.push_back({std::vector<int>(nv, 0), 0});
        while (!stack.empty()) {
            auto [digits, v] = stack.back();
            stack.pop_back();
            if (v == nv) {
                std::vector<int> d(digits.begin(), digits.end());
                out.push_back(space.pack(d));
                continue;
            }
            const auto& nt = ra.nodes[v];
            int vi = 0, mult = 1;
            for (size_t i = 0; i < nt.visible_parents.size(); ++i) {
                vi += digits[nt.visible_parents[i]] * mult;
                mult *= cards[nt.visible_parents[i]];
            }
            int li = 0;
            for (size_t i = 0; i < nt.latent_parents.size(); ++i)
                li = li * k + lambda[nt.latent_parents[i]];
            uint32_t seen = 0;
            for (int e = 0; e < k; ++e) {
                size_t at =
                    (static_cast<size_t>(vi) * nt.lat_count + li) * static_cast<size_t>(k) + e;
                uint8_t val = ra.nodes[v].out[at];
                if (seen & (1u << val)) continue;
                seen |= 1u << val;
                auto next = digits;
                next[v] = val;
                stack.push_back({std::move(next), v + 1});
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Support> enumerate_realizable_supports(const PDag& p, const CardVec& cards,
                                                   int max_events) {
    EventSpace space(cards);
    if (max_events < 1 || max_events > space.total)
        throw std::invalid_argument("enumerate_realizable_supports: bad max_events");
    MDag g = lnodes_to_faces(p);
    auto relations = all_dsep_relations(g);
    std::vector<Support> out;
    for (int e = 1; e <= max_events; ++e) {
        std::vector<EventId> comb(e);
        for (int i = 0; i < e; ++i) comb[i] = i;
        do {
            Support s(comb.begin(), comb.end());
            if (ci_rules_out(relations, space, s)) continue;
            if (support_realizable(p, cards, s)) out.push_back(s);
        } while (next_combination(comb, space.total));
    }
    return out;
}

bool ci_rules_out(const std::vector<SepTriple>& relations, const EventSpace& space,
                  const Support& s) {
    for (const SepTriple& t : relations) {
        // Project the support onto (A, B) for each value of C; independence
        // forces a product set.
        std::vector<std::pair<int, std::pair<int, int>>> proj;
        proj.reserve(s.size());
        for (EventId e : s) {
            int xc = 0, xa = 0, xb = 0;
            for (int v = 0; v < static_cast<int>(space.cards.size()); ++v) {
                int d = space.digit(e, v);
                if (contains(t.c, v)) xc = xc * space.cards[v] + d;
                else if (contains(t.a, v)) xa = xa * space.cards[v] + d;
                else if (contains(t.b, v)) xb = xb * space.cards[v] + d;
            }
            proj.push_back({xc, {xa, xb}});
        }
        std::sort(proj.begin(), proj.end());
        size_t i = 0;
        while (i < proj.size()) {
            size_t j = i;
            while (j < proj.size() && proj[j].first == proj[i].first) ++j;
            std::vector<int> as, bs;
            std::vector<std::pair<int, int>> pairs;
            for (size_t x = i; x < j; ++x) {
                as.push_back(proj[x].second.first);
                bs.push_back(proj[x].second.second);
                pairs.push_back(proj[x].second);
            }
            auto uniq = [](std::vector<int>& v) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            };
            uniq(as);
            uniq(bs);
            std::sort(pairs.begin(), pairs.end());
            pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
            if (pairs.size() != as.size() * bs.size()) return true;
            i = j;
        }
    }
    return false;
}

bool ci_rules_out(const MDag& g, const CardVec& cards, const Support& s) {
    return ci_rules_out(all_dsep_relations(g), EventSpace(cards), s);
}

Support perfect_correlation_support(NodeSet nodes, int n) {
    if (nodes == 0) throw std::invalid_argument("perfect_correlation_support: empty set");
    EventSpace space(CardVec(n, 2));
    std::vector<int> zero(n, 0), one(n, 0);
    for_each_node(nodes, [&](NodeId v) { one[v] = 1; });
    Support s = {space.pack(zero), space.pack(one)};
    std::sort(s.begin(), s.end());
    return s;
}

Support dense_correlation_support(NodeId v, NodeId w, int n) {
    EventSpace space(CardVec(n, 2));
    Support s;
    for (EventId e = 0; e < static_cast<EventId>(space.total); ++e)
        if (space.digit(e, v) == space.digit(e, w)) s.push_back(e);
    return s;
}

NondominanceEvidence compare_support_profiles(const MDag& g, const MDag& h,
                                              const CardVec& cards, int max_events) {
    if (g.node_count() != h.node_count())
        throw std::invalid_argument("compare_support_profiles: node count mismatch");
    EventSpace space(cards);
    PDag pg = canonical_pdag(g), ph = canonical_pdag(h);
    auto rg = all_dsep_relations(g), rh = all_dsep_relations(h);

    NondominanceEvidence ev;
    for (int e = 2; e <= max_events; ++e) {
        if (ev.g_not_dominates_h && ev.h_not_dominates_g) break;
        std::vector<EventId> comb(e);
        for (int i = 0; i < e; ++i) comb[i] = i;
        do {
            Support s(comb.begin(), comb.end());
            bool real_g = !ci_rules_out(rg, space, s) && support_realizable(pg, cards, s);
            bool real_h = !ci_rules_out(rh, space, s) && support_realizable(ph, cards, s);
            if (!ev.g_not_dominates_h && real_h && !real_g) ev.g_not_dominates_h = s;
            if (!ev.h_not_dominates_g && real_g && !real_h) ev.h_not_dominates_g = s;
            if (ev.g_not_dominates_h && ev.h_not_dominates_g) break;
        } while (next_combination(comb, space.total));
    }
    return ev;
}

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

SupportCache::SupportCache(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string SupportCache::key_for(const MDag& g, const CardVec& cards, int events) {
    std::string key = g.encode() + "|c";
    for (int c : cards) key += static_cast<char>('0' + c);
    key += "|e" + std::to_string(events);
    return key;
}

std::optional<std::vector<uint8_t>> SupportCache::load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    char name[32];
    snprintf(name, sizeof name, "%016llx.bin",
             static_cast<unsigned long long>(fnv1a(key)));
    std::ifstream in(std::filesystem::path(dir_) / name, std::ios::binary);
    if (!in) return std::nullopt;
    uint32_t klen = 0;
    in.read(reinterpret_cast<char*>(&klen), 4);
    std::string stored(klen, '\0');
    in.read(stored.data(), klen);
    if (stored != key) return std::nullopt;
    uint32_t blen = 0;
    in.read(reinterpret_cast<char*>(&blen), 4);
    std::vector<uint8_t> bits(blen);
    in.read(reinterpret_cast<char*>(bits.data()), blen);
    if (!in) return std::nullopt;
    return bits;
}

void SupportCache::store(const std::string& key, const std::vector<uint8_t>& bits) const {
    if (!enabled()) return;
    char name[32];
    snprintf(name, sizeof name, "%016llx.bin",
             static_cast<unsigned long long>(fnv1a(key)));
    auto final_path = std::filesystem::path(dir_) / name;
    auto tmp_path = final_path;
    tmp_path += ".tmp";
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        uint32_t klen = static_cast<uint32_t>(key.size());
        out.write(reinterpret_cast<const char*>(&klen), 4);
        out.write(key.data(), klen);
        uint32_t blen = static_cast<uint32_t>(bits.size());
        out.write(reinterpret_cast<const char*>(&blen), 4);
        out.write(reinterpret_cast<const char*>(bits.data()), blen);
    }
    std::filesystem::rename(tmp_path, final_path);
}

std::vector<uint8_t> realizable_bitmap(const MDag& g, const CardVec& cards, int events,
                                       const SupportCache& cache) {
    std::string key = SupportCache::key_for(g, cards, events);
    if (auto hit = cache.load(key)) return *hit;

    EventSpace space(cards);
    uint64_t count = combination_count(space.total, events);
    std::vector<uint8_t> bits((count + 7) / 8, 0);
    PDag p = canonical_pdag(g);
    auto relations = all_dsep_relations(g);
    SupportSolver solver(p, space, events, /*use_diagonal=*/true, events);

    std::vector<EventId> comb(events);
    for (int i = 0; i < events; ++i) comb[i] = i;
    Support s(events, 0);
    uint64_t rank = 0;
    do {
        std::copy(comb.begin(), comb.end(), s.begin());
        if (!ci_rules_out(relations, space, s)) {
            solver.reset(s);
            if (solver.solve()) bits[rank >> 3] |= uint8_t(1) << (rank & 7);
        }
        ++rank;
    } while (next_combination(comb, space.total));

    cache.store(key, bits);
    return bits;
}

}  // namespace mdag
