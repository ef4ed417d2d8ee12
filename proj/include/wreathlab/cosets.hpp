#pragma once

#include <optional>
#include <sstream>
#include <vector>

#include "wreathlab/wreath.hpp"

namespace wreathlab {

/// Two-row marked graph of a pair (g1, g2): lower i connects to upper s2(i)
/// on the positive side, lower -i to upper -s1(i) on the negative side.
/// Original edges carry half-integer part 0.
struct MarkedPairGraph {
    const GroupTable* group = nullptr;
    int N = 0;
    // 1-indexed by |i|; targets are the unsigned upper indices
    std::vector<int> pos_target, neg_target;
    std::vector<int> pos_gamma, neg_gamma;
    std::vector<int> pos_half2, neg_half2;

    bool operator==(const MarkedPairGraph& o) const {
        return group == o.group && N == o.N && pos_target == o.pos_target &&
               neg_target == o.neg_target && pos_gamma == o.pos_gamma &&
               neg_gamma == o.neg_gamma && pos_half2 == o.pos_half2 && neg_half2 == o.neg_half2;
    }
};

inline GPair pair_multiply(const GPair& a, const GPair& b) {
    return {multiply(a.first, b.first), multiply(a.second, b.second)};
}

inline GPair pair_inverse(const GPair& a) { return {inverse(a.first), inverse(a.second)}; }

inline MarkedPairGraph graph_of(const GPair& g, int N) {
    require_same_group(g.first, g.second);
    if (pair_max_support(g) > N)
        throw std::invalid_argument("graph_of: N smaller than the pair's support");
    const GroupTable& G = *g.first.group;
    MarkedPairGraph out;
    out.group = &G;
    out.N = N;
    out.pos_target.assign(N + 1, 0);
    out.neg_target.assign(N + 1, 0);
    out.pos_gamma.assign(N + 1, G.identity());
    out.neg_gamma.assign(N + 1, G.identity());
    out.pos_half2.assign(N + 1, 0);
    out.neg_half2.assign(N + 1, 0);
    for (int i = 1; i <= N; ++i) {
        out.pos_target[i] = g.second.perm.apply(i);
        out.pos_gamma[i] = g.second.tuple.at(i, G);
        out.neg_target[i] = g.first.perm.apply(i);
        out.neg_gamma[i] = g.first.tuple.at(i, G);
    }
    return out;
}

/// Gluing with `top` above `bottom`; equals graph_of of the componentwise
/// product. Markings multiply along joined edges.
inline MarkedPairGraph compose_graphs(const MarkedPairGraph& top, const MarkedPairGraph& bottom) {
    if (top.N != bottom.N || top.group != bottom.group)
        throw std::invalid_argument("compose_graphs: mismatched graphs");
    const GroupTable& G = *top.group;
    MarkedPairGraph out = top;
    for (int i = 1; i <= top.N; ++i) {
        int k = bottom.pos_target[i];
        out.pos_target[i] = top.pos_target[k];
        out.pos_gamma[i] = G.mult(top.pos_gamma[k], bottom.pos_gamma[i]);
        out.pos_half2[i] = top.pos_half2[k] + bottom.pos_half2[i];
        int kn = bottom.neg_target[i];
        out.neg_target[i] = top.neg_target[kn];
        out.neg_gamma[i] = G.mult(top.neg_gamma[kn], bottom.neg_gamma[i]);
        out.neg_half2[i] = top.neg_half2[kn] + bottom.neg_half2[i];
    }
    return out;
}

// ---- admissible diagrams ----------------------------------------------------

struct DiagVertex {
    int idx = 0;      // signed, never 0
    bool upper = false;

    bool operator==(const DiagVertex& o) const { return idx == o.idx && upper == o.upper; }
    bool operator<(const DiagVertex& o) const {
        if (upper != o.upper) return upper < o.upper;
        return idx < o.idx;
    }
};

struct DiagEdge {
    DiagVertex from, to;
    int half2 = 0;  // twice the half-integer marking
    int gamma = 0;

    bool operator==(const DiagEdge& o) const {
        return from == o.from && to == o.to && half2 == o.half2 && gamma == o.gamma;
    }
    bool operator<(const DiagEdge& o) const {
        if (!(from == o.from)) return from < o.from;
        if (!(to == o.to)) return to < o.to;
        if (half2 != o.half2) return half2 < o.half2;
        return gamma < o.gamma;
    }
};

/// Vertex-colored marked matching on the 4n window vertices, plus marked
/// circles. Circles marked (1, class(e)) are never stored. Equality is exact
/// identity of edges, markings and the circle multiset.
struct AdmissibleDiagram {
    const GroupTable* group = nullptr;
    int n = 0;
    std::vector<DiagEdge> edges;                 // sorted
    std::vector<std::pair<int, int>> circles;    // sorted (weight, class id)
    std::optional<GPair> rep;                    // a representative of the coset

    bool same_diagram(const AdmissibleDiagram& o) const {
        return group == o.group && n == o.n && edges == o.edges && circles == o.circles;
    }
};

namespace coset_detail {

struct TraceEdge {
    DiagVertex from, to;
    int half2 = 0;
    int gamma = 0;
};

struct TraceGraph {
    const GroupTable* group;
    std::vector<TraceEdge> edges;
    std::map<DiagVertex, std::vector<int>> incident;

    void add(DiagVertex a, DiagVertex b, int half2, int gamma) {
        int id = static_cast<int>(edges.size());
        edges.push_back({a, b, half2, gamma});
        incident[a].push_back(id);
        incident[b].push_back(id);
    }
};

struct WalkStep {
    int edge = -1;
    bool forward = true;
};

/// Follows the undirected path/cycle starting at `v` leaving along `first`.
inline std::vector<WalkStep> walk(const TraceGraph& g, DiagVertex v, int first,
                                  std::vector<bool>& used, DiagVertex* terminal) {
    std::vector<WalkStep> steps;
    int e = first;
    DiagVertex cur = v;
    while (true) {
        used[e] = true;
        bool fwd = g.edges[e].from == cur;
        steps.push_back({e, fwd});
        cur = fwd ? g.edges[e].to : g.edges[e].from;
        const auto& inc = g.incident.at(cur);
        int next = -1;
        for (int cand : inc)
            if (!used[cand]) { next = cand; break; }
        if (next < 0) break;
        e = next;
    }
    if (terminal) *terminal = cur;
    return steps;
}

/// Marking of a traversal: half-integers add, group parts compose with later
/// edges multiplying on the left; reversed edges contribute inverses.
inline std::pair<int, int> accumulate(const TraceGraph& g, const std::vector<WalkStep>& steps) {
    const GroupTable& G = *g.group;
    int half2 = 0, gamma = G.identity();
    for (const auto& st : steps) {
        const TraceEdge& e = g.edges[st.edge];
        half2 += e.half2;
        int part = st.forward ? e.gamma : G.inv(e.gamma);
        gamma = G.mult(part, gamma);
    }
    return {half2, gamma};
}

inline bool valid_initial(DiagVertex v) { return (!v.upper && v.idx > 0) || (v.upper && v.idx < 0); }

}  // namespace coset_detail

/// Four-step construction of the admissible diagram of the double coset
/// containing g. Returns add half-weight crossings outside the window; paths
/// are re-oriented so they start at an overlined-negative or
/// underlined-positive vertex, except single in-window edges which keep their
/// original direction. Closed components become circles marked by weight and
/// the conjugacy class of their group part.
inline AdmissibleDiagram theta(const GPair& g, int n, int ambient_slack = 2) {
    require_same_group(g.first, g.second);
    const GroupTable& G = *g.first.group;
    if (n < 0) throw std::invalid_argument("theta: n must be >= 0");
    if (ambient_slack < 1) throw std::invalid_argument("theta: ambient slack must be >= 1");
    const int N = std::max(n, pair_max_support(g)) + ambient_slack;
    auto classes = conjugacy_classes(G);

    coset_detail::TraceGraph tg;
    tg.group = &G;
    auto lower = [](int idx) { return DiagVertex{idx, false}; };
    auto upper = [](int idx) { return DiagVertex{idx, true}; };
    for (int i = 1; i <= N; ++i) {
        tg.add(lower(i), upper(g.second.perm.apply(i)), 0, g.second.tuple.at(i, G));
        tg.add(lower(-i), upper(-g.first.perm.apply(i)), 0, g.first.tuple.at(i, G));
    }
    for (int i = n + 1; i <= N; ++i) {
        tg.add(lower(-i), lower(i), 1, G.identity());   // lower return
        tg.add(upper(i), upper(-i), 1, G.identity());   // upper return
    }

    AdmissibleDiagram out;
    out.group = &G;
    out.n = n;
    out.rep = g;
    std::vector<bool> used(tg.edges.size(), false);

    // non-closed components: every in-window vertex has degree one
    for (const auto& [v, inc] : tg.incident) {
        if (std::abs(v.idx) > n) continue;
        if (inc.size() != 1) throw std::logic_error("theta: window vertex degree != 1");
        int e = inc[0];
        if (used[e]) continue;
        DiagVertex terminal;
        auto steps = coset_detail::walk(tg, v, e, used, &terminal);
        DiagVertex a = v, b = terminal;
        std::vector<coset_detail::WalkStep> oriented = steps;
        if (steps.size() == 1) {
            // single original edge entirely inside the window keeps its direction
            const auto& te = tg.edges[steps[0].edge];
            oriented[0].forward = true;
            a = te.from;
            b = te.to;
        } else if (!coset_detail::valid_initial(a)) {
            if (!coset_detail::valid_initial(b))
                throw std::logic_error("theta: path with no valid initial vertex");
            // re-walk from the other end
            std::reverse(oriented.begin(), oriented.end());
            for (auto& st : oriented) st.forward = !st.forward;
            std::swap(a, b);
        }
        auto [half2, gamma] = coset_detail::accumulate(tg, oriented);
        out.edges.push_back({a, b, half2, gamma});
    }

    // remaining components are cycles outside the window
    for (size_t e0 = 0; e0 < tg.edges.size(); ++e0) {
        if (used[e0]) continue;
        // pick the canonical start: smallest positive lower vertex in the cycle
        std::vector<bool> probe = used;
        DiagVertex term;
        auto loop = coset_detail::walk(tg, tg.edges[e0].from, static_cast<int>(e0), probe, &term);
        DiagVertex start{0, false};
        for (const auto& st : loop) {
            const auto& te = tg.edges[st.edge];
            for (DiagVertex cand : {te.from, te.to})
                if (!cand.upper && cand.idx > 0 && (start.idx == 0 || cand.idx < start.idx))
                    start = cand;
        }
        if (start.idx == 0) throw std::logic_error("theta: cycle without positive lower vertex");
        // the unique original edge leaving the start vertex gives the orientation
        int first = -1;
        for (int cand : tg.incident.at(start))
            if (!used[cand] && tg.edges[cand].from == start) first = cand;
        if (first < 0) throw std::logic_error("theta: cycle orientation not found");
        auto steps = coset_detail::walk(tg, start, first, used, &term);
        auto [half2, gamma] = coset_detail::accumulate(tg, steps);
        if (half2 % 2 != 0) throw std::logic_error("theta: cycle weight is not an integer");
        int weight = half2 / 2;
        int cls = classes.class_of[gamma];
        if (!(weight == 1 && cls == classes.class_of[G.identity()]))
            out.circles.push_back({weight, cls});
    }

    std::sort(out.edges.begin(), out.edges.end());
    std::sort(out.circles.begin(), out.circles.end());
    return out;
}

/// K_n(infinity)-sector membership for diagonal pairs.
inline bool in_Kn_infty(const GPair& g, int n) {
    return g.first == g.second && in_Gn_infty(g.first, n);
}

/// Representative-route product: theta_n(g * (omega, omega) * h) with the
/// separator pushed beyond both supports.
inline AdmissibleDiagram mult_repr(const AdmissibleDiagram& d1, const AdmissibleDiagram& d2,
                                   std::optional<int> force_m = std::nullopt) {
    if (d1.n != d2.n || d1.group != d2.group)
        throw std::invalid_argument("mult_repr: level mismatch");
    if (!d1.rep || !d2.rep)
        throw std::invalid_argument("mult_repr: both diagrams need representatives");
    const GroupTable& G = *d1.group;
    int n = d1.n;
    int m = force_m ? *force_m
                    : std::max(0, std::max(pair_max_support(*d1.rep), pair_max_support(*d2.rep)) - n) + 1;
    Permutation w = omega(n, m);
    GPair sep{WreathElement(G, w, {}), WreathElement(G, w, {})};
    GPair prod = pair_multiply(pair_multiply(*d1.rep, sep), *d2.rep);
    return theta(prod, n);
}

/// Diagram-pasting product: d1 above d2, re-traced through the glued middle
/// layer. Existing circles carry over; new cycles in the middle become
/// circles.
inline AdmissibleDiagram mult_diagram(const AdmissibleDiagram& d1, const AdmissibleDiagram& d2) {
    if (d1.n != d2.n || d1.group != d2.group)
        throw std::invalid_argument("mult_diagram: level mismatch");
    const GroupTable& G = *d1.group;
    auto classes = conjugacy_classes(G);
    const int n = d1.n;

    // layers: 0 = result lower (d2 lower), 1 = glued middle, 2 = result upper
    // (d1 upper); reuse DiagVertex with idx shifted by layer via the map key
    struct LVertex {
        int layer;
        DiagVertex v;
        bool operator<(const LVertex& o) const {
            if (layer != o.layer) return layer < o.layer;
            return v < o.v;
        }
        bool operator==(const LVertex& o) const { return layer == o.layer && v == o.v; }
    };
    struct LEdge {
        LVertex from, to;
        int half2, gamma;
    };
    std::vector<LEdge> edges;
    std::map<LVertex, std::vector<int>> incident;
    auto add = [&](LVertex a, LVertex b, int half2, int gamma) {
        int id = static_cast<int>(edges.size());
        edges.push_back({a, b, half2, gamma});
        incident[a].push_back(id);
        incident[b].push_back(id);
    };
    // the glued middle layer identifies d2's upper vertices with d1's lower
    // ones, so layer-1 vertices are keyed by index alone
    auto lift2 = [](DiagVertex v) {  // d2: lower -> layer 0, upper -> layer 1
        return v.upper ? LVertex{1, {v.idx, false}} : LVertex{0, {v.idx, false}};
    };
    auto lift1 = [](DiagVertex v) {  // d1: lower -> layer 1, upper -> layer 2
        return v.upper ? LVertex{2, {v.idx, true}} : LVertex{1, {v.idx, false}};
    };
    for (const auto& e : d2.edges) add(lift2(e.from), lift2(e.to), e.half2, e.gamma);
    for (const auto& e : d1.edges) add(lift1(e.from), lift1(e.to), e.half2, e.gamma);

    AdmissibleDiagram out;
    out.group = &G;
    out.n = n;
    out.circles = d1.circles;
    out.circles.insert(out.circles.end(), d2.circles.begin(), d2.circles.end());
    if (d1.rep && d2.rep) {
        int m = std::max(0, std::max(pair_max_support(*d1.rep), pair_max_support(*d2.rep)) - n) + 1;
        Permutation w = omega(n, m);
        GPair sep{WreathElement(G, w, {}), WreathElement(G, w, {})};
        out.rep = pair_multiply(pair_multiply(*d1.rep, sep), *d2.rep);
    }

    std::vector<bool> used(edges.size(), false);
    auto walk_from = [&](LVertex v, int first, LVertex* terminal) {
        std::vector<coset_detail::WalkStep> steps;
        int e = first;
        LVertex cur = v;
        while (true) {
            used[e] = true;
            bool fwd = edges[e].from == cur;
            steps.push_back({e, fwd});
            cur = fwd ? edges[e].to : edges[e].from;
            int next = -1;
            for (int cand : incident.at(cur))
                if (!used[cand]) { next = cand; break; }
            if (next < 0) break;
            e = next;
        }
        *terminal = cur;
        return steps;
    };
    auto accumulate = [&](const std::vector<coset_detail::WalkStep>& steps) {
        int half2 = 0, gamma = G.identity();
        for (const auto& st : steps) {
            const LEdge& e = edges[st.edge];
            half2 += e.half2;
            gamma = G.mult(st.forward ? e.gamma : G.inv(e.gamma), gamma);
        }
        return std::pair<int, int>{half2, gamma};
    };
    auto endpoint_sector_initial = [](LVertex v) {
        // result-lower positive or result-upper negative
        return (v.layer == 0 && v.v.idx > 0) || (v.layer == 2 && v.v.idx < 0);
    };
    auto to_result = [](LVertex v) { return DiagVertex{v.v.idx, v.layer == 2}; };

    // paths: endpoints are exactly the layer-0 and layer-2 vertices
    for (const auto& [v, inc] : incident) {
        if (v.layer == 1) continue;
        int e = inc[0];
        if (used[e]) continue;
        LVertex terminal;
        auto steps = walk_from(v, e, &terminal);
        int forward_count = 0;
        for (const auto& st : steps)
            if (st.forward) ++forward_count;
        auto reversed_steps = [&]() {
            auto r = steps;
            std::reverse(r.begin(), r.end());
            for (auto& st : r) st.forward = !st.forward;
            return r;
        };
        LVertex a = v, b = terminal;
        std::vector<coset_detail::WalkStep> oriented;
        int back_count = static_cast<int>(steps.size()) - forward_count;
        if (back_count == 0) {
            oriented = steps;  // natural inherited orientation
        } else if (forward_count == 0) {
            oriented = reversed_steps();
            std::swap(a, b);
        } else if (endpoint_sector_initial(a) != endpoint_sector_initial(b)) {
            if (endpoint_sector_initial(a)) {
                oriented = steps;
            } else {
                oriented = reversed_steps();
                std::swap(a, b);
            }
        } else if (forward_count != back_count) {
            if (forward_count > back_count) {
                oriented = steps;
            } else {
                oriented = reversed_steps();
                std::swap(a, b);
            }
        } else {
            // deterministic fallback: smaller initial vertex
            if (b < a) {
                oriented = reversed_steps();
                std::swap(a, b);
            } else {
                oriented = steps;
            }
        }
        auto [half2, gamma] = accumulate(oriented);
        out.edges.push_back({to_result(a), to_result(b), half2, gamma});
    }

    // cycles in the middle layer: orientation is inherited (all edges agree)
    for (size_t e0 = 0; e0 < edges.size(); ++e0) {
        if (used[e0]) continue;
        // canonical base: smallest positive middle vertex, leaving forward
        std::vector<bool> probe = used;
        LVertex term;
        auto loop = walk_from(edges[e0].from, static_cast<int>(e0), &term);
        used = probe;  // undo; rewalk from canonical start below
        LVertex start{1, {0, false}};
        for (const auto& st : loop)
            for (LVertex cand : {edges[st.edge].from, edges[st.edge].to})
                if (cand.v.idx > 0 && (start.v.idx == 0 || cand.v.idx < start.v.idx ||
                                       (cand.v.idx == start.v.idx && cand.v.upper < start.v.upper)))
                    start = cand;
        int first = -1;
        for (int cand : incident.at(start))
            if (!used[cand] && edges[cand].from == start) first = cand;
        if (first < 0) throw std::logic_error("mult_diagram: cycle orientation not found");
        auto steps = walk_from(start, first, &term);
        auto [half2, gamma] = accumulate(steps);
        if (half2 % 2 != 0) throw std::logic_error("mult_diagram: cycle weight not integral");
        int weight = half2 / 2;
        int cls = classes.class_of[gamma];
        if (!(weight == 1 && cls == classes.class_of[G.identity()]))
            out.circles.push_back({weight, cls});
    }

    std::sort(out.edges.begin(), out.edges.end());
    std::sort(out.circles.begin(), out.circles.end());
    return out;
}

inline AdmissibleDiagram involution(const AdmissibleDiagram& d) {
    if (!d.rep) throw std::invalid_argument("involution: diagram has no representative");
    return theta(pair_inverse(*d.rep), d.n);
}

/// Structural validity per the admissible-graph rules; single in-window
/// negative originals may run lower-to-upper.
inline void validate_diagram(const AdmissibleDiagram& d) {
    std::set<DiagVertex> seen;
    for (const auto& e : d.edges) {
        for (DiagVertex v : {e.from, e.to}) {
            if (v.idx == 0 || std::abs(v.idx) > d.n)
                throw std::logic_error("diagram vertex outside window");
            if (!seen.insert(v).second) throw std::logic_error("diagram vertex repeated");
        }
        bool ok =
            (e.from.upper && e.from.idx < 0 && !e.to.upper && e.to.idx < 0) ||   // o- -> u-
            (!e.from.upper && e.from.idx > 0 && !e.to.upper && e.to.idx < 0) ||  // u+ -> u-
            (!e.from.upper && e.from.idx > 0 && e.to.upper && e.to.idx > 0) ||   // u+ -> o+
            (e.from.upper && e.from.idx < 0 && e.to.upper && e.to.idx > 0) ||    // o- -> o+
            (!e.from.upper && e.from.idx < 0 && e.to.upper && e.to.idx < 0);     // in-window u- -> o-
        if (!ok) throw std::logic_error("diagram edge violates sector rules");
        if (e.half2 < 0) throw std::logic_error("diagram edge has negative weight");
    }
    if (static_cast<int>(seen.size()) != 4 * d.n)
        throw std::logic_error("diagram does not cover the window");
    for (auto [w, _] : d.circles)
        if (w < 1) throw std::logic_error("circle weight must be positive");
}

inline std::string half_string(int half2) {
    if (half2 % 2 == 0) return std::to_string(half2 / 2);
    return std::to_string(half2) + "/2";
}

inline std::string vertex_name(DiagVertex v) {
    std::string s = v.upper ? "o" : "u";
    s += v.idx > 0 ? "+" : "-";
    s += std::to_string(std::abs(v.idx));
    return s;
}

/// Deterministic Graphviz export: two ranked rows, edges labeled by their
/// markings, circles as isolated nodes.
inline std::string to_dot(const AdmissibleDiagram& d) {
    const GroupTable& G = *d.group;
    auto classes = conjugacy_classes(G);
    std::ostringstream os;
    os << "digraph coset {\n";
    os << "  rankdir=BT;\n";
    os << "  { rank=same;";
    for (int i = -d.n; i <= d.n; ++i)
        if (i != 0) os << " \"" << vertex_name({i, false}) << "\";";
    os << " }\n";
    os << "  { rank=same;";
    for (int i = -d.n; i <= d.n; ++i)
        if (i != 0) os << " \"" << vertex_name({i, true}) << "\";";
    os << " }\n";
    std::vector<DiagEdge> edges = d.edges;
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) {
        os << "  \"" << vertex_name(e.from) << "\" -> \"" << vertex_name(e.to) << "\" [label=\"("
           << half_string(e.half2) << ", " << G.element_name(e.gamma) << ")\"];\n";
    }
    int idx = 0;
    for (auto [w, cls] : d.circles) {
        os << "  \"circle" << idx++ << "\" [shape=circle, label=\"(" << w << ", cl("
           << G.element_name(classes.representatives[cls]) << "))\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace wreathlab
