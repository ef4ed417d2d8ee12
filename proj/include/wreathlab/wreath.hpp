#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wreathlab/group.hpp"

namespace wreathlab {

/// Finitely supported bijection of the positive integers.
///
/// Products compose left-to-right as functions: (s*t)(i) = s(t(i)).
class Permutation {
public:
    Permutation() = default;

    static Permutation from_map(std::map<int, int> images) {
        Permutation p;
        for (auto [k, v] : images) {
            if (k < 1 || v < 1) throw std::invalid_argument("permutation positions must be >= 1");
            if (k != v) p.images_[k] = v;
        }
        p.check_bijective();
        return p;
    }

    static Permutation cycle(const std::vector<int>& pts) {
        std::map<int, int> m;
        for (size_t i = 0; i < pts.size(); ++i) {
            int from = pts[i], to = pts[(i + 1) % pts.size()];
            if (m.count(from)) throw std::invalid_argument("repeated point in cycle");
            m[from] = to;
        }
        return from_map(std::move(m));
    }

    static Permutation transposition(int a, int b) { return cycle({a, b}); }

    int apply(int i) const {
        auto it = images_.find(i);
        return it == images_.end() ? i : it->second;
    }
    int operator()(int i) const { return apply(i); }

    bool is_identity() const { return images_.empty(); }

    std::vector<int> support() const {
        std::vector<int> s;
        s.reserve(images_.size());
        for (auto [k, _] : images_) s.push_back(k);
        return s;
    }

    int max_support() const { return images_.empty() ? 0 : images_.rbegin()->first; }

    Permutation inverse() const {
        Permutation p;
        for (auto [k, v] : images_) p.images_[v] = k;
        return p;
    }

    /// (s*t)(i) = s(t(i)); t acts first.
    friend Permutation operator*(const Permutation& s, const Permutation& t) {
        std::map<int, int> m;
        std::set<int> domain;
        for (auto [k, _] : s.images_) domain.insert(k);
        for (auto [k, _] : t.images_) domain.insert(k);
        for (int i : domain) {
            int v = s.apply(t.apply(i));
            if (v != i) m[i] = v;
        }
        Permutation p;
        p.images_ = std::move(m);
        return p;
    }

    bool operator==(const Permutation& o) const { return images_ == o.images_; }
    bool operator!=(const Permutation& o) const { return !(*this == o); }
    bool operator<(const Permutation& o) const { return images_ < o.images_; }

    /// Orbits of the action on support points, each listed from its minimum.
    std::vector<std::vector<int>> orbits() const {
        std::vector<std::vector<int>> out;
        std::set<int> seen;
        for (auto [k, _] : images_) {
            if (seen.count(k)) continue;
            std::vector<int> orb;
            int i = k;
            do {
                orb.push_back(i);
                seen.insert(i);
                i = apply(i);
            } while (i != k);
            out.push_back(std::move(orb));
        }
        return out;
    }

    const std::map<int, int>& as_map() const { return images_; }

private:
    void check_bijective() const {
        std::set<int> vals;
        for (auto [k, v] : images_) {
            if (!vals.insert(v).second)
                throw std::invalid_argument("permutation map is not injective");
            if (!images_.count(v))
                throw std::invalid_argument("permutation support is not closed");
        }
    }
    std::map<int, int> images_;
};

/// Orbit count of s on {1..m}, fixed points included.
inline int orbit_count(const Permutation& s, int m) {
    if (s.max_support() > m)
        throw std::invalid_argument("orbit_count: support exceeds range");
    std::vector<bool> seen(m + 1, false);
    int count = 0;
    for (int i = 1; i <= m; ++i) {
        if (seen[i]) continue;
        ++count;
        int j = i;
        do {
            seen[j] = true;
            j = s.apply(j);
        } while (j != i);
    }
    return count;
}

/// Block-swap permutation: exchanges (n, n+m] with (n+m, n+2m].
inline Permutation omega(int n, int m) {
    if (n < 0 || m < 1) throw std::invalid_argument("omega: need n >= 0, m >= 1");
    std::map<int, int> im;
    for (int i = n + 1; i <= n + m; ++i) im[i] = i + m;
    for (int i = n + m + 1; i <= n + 2 * m; ++i) im[i] = i - m;
    return Permutation::from_map(std::move(im));
}

/// Two-block shuffle: (n, n+l] moves up by m, (n+l, n+l+m] moves down by l.
inline Permutation omega2(int n, int l, int m) {
    if (n < 0 || l < 1 || m < 1) throw std::invalid_argument("omega2: need n >= 0, l,m >= 1");
    std::map<int, int> im;
    for (int i = n + 1; i <= n + l; ++i) im[i] = i + m;
    for (int i = n + l + 1; i <= n + l + m; ++i) im[i] = i - l;
    return Permutation::from_map(std::move(im));
}

/// Finitely supported tuple of base-group elements; identity entries are not
/// stored.
class GammaTuple {
public:
    GammaTuple() = default;

    static GammaTuple from_entries(const GroupTable& g, std::map<int, int> entries) {
        GammaTuple t;
        for (auto [pos, elem] : entries) {
            if (pos < 1) throw std::invalid_argument("tuple positions must be >= 1");
            if (elem < 0 || elem >= g.order())
                throw std::invalid_argument("tuple entry out of group range");
            if (elem != g.identity()) t.entries_[pos] = elem;
        }
        return t;
    }

    int at(int pos, const GroupTable& g) const {
        auto it = entries_.find(pos);
        return it == entries_.end() ? g.identity() : it->second;
    }

    bool is_identity() const { return entries_.empty(); }
    int max_support() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }
    const std::map<int, int>& entries() const { return entries_; }

    void set(int pos, int elem, const GroupTable& g) {
        if (pos < 1) throw std::invalid_argument("tuple positions must be >= 1");
        if (elem == g.identity())
            entries_.erase(pos);
        else
            entries_[pos] = elem;
    }

    GammaTuple inverse(const GroupTable& g) const {
        GammaTuple t;
        for (auto [p, x] : entries_) t.entries_[p] = g.inv(x);
        return t;
    }

    /// Pointwise product in Gamma_e^infty.
    GammaTuple times(const GammaTuple& o, const GroupTable& g) const {
        GammaTuple t;
        std::set<int> ps;
        for (auto [p, _] : entries_) ps.insert(p);
        for (auto [p, _] : o.entries_) ps.insert(p);
        for (int p : ps) {
            int v = g.mult(at(p, g), o.at(p, g));
            if (v != g.identity()) t.entries_[p] = v;
        }
        return t;
    }

    bool operator==(const GammaTuple& o) const { return entries_ == o.entries_; }
    bool operator!=(const GammaTuple& o) const { return !(*this == o); }

private:
    std::map<int, int> entries_;
};

/// Element of the wreath product, in the normal form s * gamma.
struct WreathElement {
    const GroupTable* group = nullptr;
    Permutation perm;
    GammaTuple tuple;

    WreathElement() = default;
    WreathElement(const GroupTable& g, Permutation s, GammaTuple t)
        : group(&g), perm(std::move(s)), tuple(std::move(t)) {}

    static WreathElement identity(const GroupTable& g) { return WreathElement(g, {}, {}); }

    bool is_identity() const { return perm.is_identity() && tuple.is_identity(); }
    int max_support() const { return std::max(perm.max_support(), tuple.max_support()); }

    bool operator==(const WreathElement& o) const {
        return group == o.group && perm == o.perm && tuple == o.tuple;
    }
    bool operator!=(const WreathElement& o) const { return !(*this == o); }
};

inline void require_same_group(const WreathElement& a, const WreathElement& b) {
    if (a.group != b.group)
        throw std::invalid_argument("wreath elements belong to different base groups");
}

/// Element of G x G, the ambient group of the double-coset calculus.
using GPair = std::pair<WreathElement, WreathElement>;

inline int pair_max_support(const GPair& a) {
    return std::max(a.first.max_support(), a.second.max_support());
}

/// (s_g g) * (s_h h): perm parts compose, the g-tuple is pulled through s_h.
inline WreathElement multiply(const WreathElement& g, const WreathElement& h) {
    require_same_group(g, h);
    const GroupTable& G = *g.group;
    Permutation s = g.perm * h.perm;
    GammaTuple t;
    std::set<int> ps;
    for (auto [p, _] : g.tuple.entries()) ps.insert(p);
    for (auto [p, _] : h.tuple.entries()) ps.insert(p);
    for (auto [p, _] : h.perm.as_map()) ps.insert(p);
    GammaTuple out;
    for (int p : ps) {
        int v = G.mult(g.tuple.at(h.perm.apply(p), G), h.tuple.at(p, G));
        if (v != G.identity()) out.set(p, v, G);
    }
    return WreathElement(G, std::move(s), std::move(out));
}

inline WreathElement inverse(const WreathElement& g) {
    const GroupTable& G = *g.group;
    Permutation si = g.perm.inverse();
    GammaTuple t;
    for (auto [p, x] : g.tuple.entries()) {
        // entry of the inverse at position s(p)
        t.set(g.perm.apply(p), G.inv(x), G);
    }
    return WreathElement(G, std::move(si), std::move(t));
}

/// Commuting factors s_p * gamma(p), one per nontrivial orbit; singleton
/// orbits appear only when they carry a nontrivial tuple entry.
inline std::vector<WreathElement> cycle_decompose(const WreathElement& g) {
    const GroupTable& G = *g.group;
    std::vector<WreathElement> out;
    std::set<int> covered;
    for (const auto& orb : g.perm.orbits()) {
        std::map<int, int> pm;
        GammaTuple t;
        for (int i : orb) {
            pm[i] = g.perm.apply(i);
            covered.insert(i);
            int v = g.tuple.at(i, G);
            if (v != G.identity()) t.set(i, v, G);
        }
        out.emplace_back(G, Permutation::from_map(std::move(pm)), std::move(t));
    }
    for (auto [p, x] : g.tuple.entries()) {
        if (covered.count(p)) continue;
        GammaTuple t;
        t.set(p, x, G);
        out.emplace_back(G, Permutation{}, std::move(t));
    }
    return out;
}

/// Ordered product of the tuple entries around one orbit, starting at
/// k = min(p) and walking against the permutation:
/// gamma_k * gamma_{s^-1(k)} * ... * gamma_{s^{-|p|+1}(k)}. This is the walk
/// order that telescopes under conjugation by tuples, so its conjugacy class
/// is constant on conjugacy classes of the wreath product. Changing the base
/// point rotates the product cyclically, which stays within the class.
inline int cycle_product(const WreathElement& g, const std::vector<int>& orbit) {
    const GroupTable& G = *g.group;
    if (orbit.empty()) throw std::invalid_argument("cycle_product: empty orbit");
    int k = *std::min_element(orbit.begin(), orbit.end());
    std::set<int> os(orbit.begin(), orbit.end());
    Permutation sinv = g.perm.inverse();
    int prod = G.identity();
    int i = k;
    for (size_t step = 0; step < orbit.size(); ++step) {
        if (!os.count(i)) throw std::invalid_argument("cycle_product: set is not an orbit");
        prod = G.mult(prod, g.tuple.at(i, G));
        i = sinv.apply(i);
    }
    if (i != k) throw std::invalid_argument("cycle_product: set is not an orbit");
    return prod;
}

/// Conjugacy invariant: multiset of (orbit length, class of the cycle
/// product), with all (1, class(e)) pairs dropped.
struct ConjInvariant {
    std::vector<std::pair<long, int>> pairs;  // sorted (length, class id)
    bool operator==(const ConjInvariant& o) const { return pairs == o.pairs; }
    bool operator!=(const ConjInvariant& o) const { return !(*this == o); }
    bool operator<(const ConjInvariant& o) const { return pairs < o.pairs; }
};

inline ConjInvariant invariant(const WreathElement& g, const ConjClasses& classes) {
    const GroupTable& G = *g.group;
    ConjInvariant inv;
    std::set<int> covered;
    for (const auto& orb : g.perm.orbits()) {
        for (int i : orb) covered.insert(i);
        inv.pairs.emplace_back(static_cast<long>(orb.size()),
                               classes.class_of[cycle_product(g, orb)]);
    }
    int id_class = classes.class_of[G.identity()];
    for (auto [p, x] : g.tuple.entries()) {
        if (covered.count(p)) continue;
        int c = classes.class_of[x];
        if (c != id_class) inv.pairs.emplace_back(1L, c);
    }
    std::sort(inv.pairs.begin(), inv.pairs.end());
    return inv;
}

inline ConjInvariant invariant(const WreathElement& g) {
    return invariant(g, conjugacy_classes(*g.group));
}

/// Conjugates g so that each orbit carries a single tuple entry: the reversed
/// product of its entries, sitting at the last point of the orbit walk from
/// min(p). Returns the conjugating tuple and the normalized element.
inline std::pair<GammaTuple, WreathElement> normal_form(const WreathElement& g) {
    const GroupTable& G = *g.group;
    GammaTuple conj;
    for (const auto& orb : g.perm.orbits()) {
        int base = *std::min_element(orb.begin(), orb.end());
        int acc = G.identity();  // gamma_{i(p)}^{-1} * ... accumulated
        int i = base;
        for (size_t l = 1; l < orb.size(); ++l) {
            acc = G.mult(acc, G.inv(g.tuple.at(i, G)));
            i = g.perm.apply(i);
            conj.set(i, acc, G);
        }
    }
    GammaTuple conj_inv = conj.inverse(G);
    WreathElement tilde(G, {}, conj);
    WreathElement result = multiply(multiply(tilde, g), WreathElement(G, {}, conj_inv));
    return {conj, result};
}

/// For two elements with the same single-cycle permutation part, finds a pure
/// tuple conjugator mapping one to the other, or nullopt when the conjugacy
/// invariants differ.
inline std::optional<GammaTuple> same_cycle_conjugator(const WreathElement& sb,
                                                       const WreathElement& sg) {
    require_same_group(sb, sg);
    const GroupTable& G = *sb.group;
    if (sb.perm != sg.perm)
        throw std::invalid_argument("same_cycle_conjugator: permutation parts differ");
    auto orbs = sb.perm.orbits();
    if (orbs.size() > 1)
        throw std::invalid_argument("same_cycle_conjugator: permutation part is not a single cycle");
    std::vector<int> orbit;
    if (orbs.size() == 1) {
        orbit = orbs[0];
        std::set<int> os(orbit.begin(), orbit.end());
        for (auto [p, _] : sb.tuple.entries())
            if (!os.count(p))
                throw std::invalid_argument("same_cycle_conjugator: tuple outside the cycle");
        for (auto [p, _] : sg.tuple.entries())
            if (!os.count(p))
                throw std::invalid_argument("same_cycle_conjugator: tuple outside the cycle");
    } else {
        // identity permutation: both tuples must share a single support point
        if (sb.tuple.entries().size() > 1 || sg.tuple.entries().size() > 1 ||
            sb.tuple.entries().empty() != sg.tuple.entries().empty())
            throw std::invalid_argument("same_cycle_conjugator: not single-cycle data");
        if (sb.tuple.entries().empty()) return GammaTuple{};
        int p1 = sb.tuple.entries().begin()->first;
        int p2 = sg.tuple.entries().begin()->first;
        if (p1 != p2) throw std::invalid_argument("same_cycle_conjugator: supports differ");
        orbit = {p1};
    }
    auto classes = conjugacy_classes(G);
    if (invariant(sb, classes) != invariant(sg, classes)) return std::nullopt;

    auto [cb, nb] = normal_form(sb);
    auto [cg, ng] = normal_form(sg);
    // normalized elements carry one entry each, at the same position
    int pos = -1, vb = G.identity(), vg = G.identity();
    if (!nb.tuple.entries().empty()) {
        pos = nb.tuple.entries().begin()->first;
        vb = nb.tuple.entries().begin()->second;
    }
    if (!ng.tuple.entries().empty()) {
        int p2 = ng.tuple.entries().begin()->first;
        if (pos >= 0 && p2 != pos) return std::nullopt;
        pos = p2;
        vg = ng.tuple.entries().begin()->second;
    }
    int w = -1;
    for (int x = 0; x < G.order(); ++x)
        if (G.mult(G.mult(x, vb), G.inv(x)) == vg) { w = x; break; }
    if (w < 0) return std::nullopt;
    GammaTuple delta;
    for (int i : orbit) delta.set(i, w, G);
    // total conjugator cg^{-1} * delta * cb
    return cg.inverse(G).times(delta.times(cb, G), G);
}

inline bool in_Gn_infty(const WreathElement& g, int n) {
    for (auto [p, v] : g.perm.as_map())
        if (p <= n || v <= n) return false;
    for (auto [p, _] : g.tuple.entries())
        if (p <= n) return false;
    return true;
}

// ---- element grammar -------------------------------------------------------
//
//   element ::= "e" labels? | cycles labels?
//   cycles  ::= ("(" int (" " int)+ ")")+
//   labels  ::= "[" pos ":" name ("," pos ":" name)* "]"
//
// The "e" form with labels covers pure tuples, which the cycle syntax cannot
// express.

namespace detail {

struct Parser {
    const std::string& text;
    const GroupTable& group;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + msg);
    }
    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    int parse_int() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected a positive integer");
        int v = std::stoi(text.substr(start, pos - start));
        if (v < 1) { pos = start; fail("positions must be >= 1"); }
        return v;
    }
    std::string parse_name() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_' || text[pos] == '-' || text[pos] == '^'))
            ++pos;
        if (pos == start) fail("expected a group element name");
        return text.substr(start, pos - start);
    }
};

}  // namespace detail

inline WreathElement parse_element(const std::string& text, const GroupTable& g) {
    detail::Parser p{text, g};
    p.skip_ws();
    Permutation perm;
    if (p.peek('e')) {
        ++p.pos;
    } else if (p.peek('(')) {
        std::map<int, int> images;
        while (p.peek('(')) {
            p.expect('(');
            std::vector<int> pts;
            pts.push_back(p.parse_int());
            while (!p.peek(')')) pts.push_back(p.parse_int());
            p.expect(')');
            if (pts.size() < 2) p.fail("cycles need at least two points");
            for (size_t i = 0; i < pts.size(); ++i) {
                int from = pts[i], to = pts[(i + 1) % pts.size()];
                if (images.count(from)) p.fail("point " + std::to_string(from) + " repeated");
                images[from] = to;
            }
        }
        perm = Permutation::from_map(std::move(images));
    } else {
        p.fail("expected 'e' or a cycle");
    }
    GammaTuple tuple;
    if (p.peek('[')) {
        p.expect('[');
        while (true) {
            int pos = p.parse_int();
            p.expect(':');
            std::string name = p.parse_name();
            auto elem = g.element_by_name(name);
            if (!elem) p.fail("'" + name + "' is not an element of " + g.name());
            if (tuple.entries().count(pos)) p.fail("label position repeated");
            tuple.set(pos, *elem, g);
            if (p.peek(',')) { p.expect(','); continue; }
            break;
        }
        p.expect(']');
    }
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return WreathElement(g, std::move(perm), std::move(tuple));
}

inline std::string format_element(const WreathElement& g) {
    const GroupTable& G = *g.group;
    std::ostringstream os;
    auto orbs = g.perm.orbits();
    std::sort(orbs.begin(), orbs.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    if (orbs.empty()) {
        os << "e";
    } else {
        for (const auto& orb : orbs) {
            os << "(";
            for (size_t i = 0; i < orb.size(); ++i) os << (i ? " " : "") << orb[i];
            os << ")";
        }
    }
    if (!g.tuple.is_identity()) {
        os << "[";
        bool first = true;
        for (auto [p, x] : g.tuple.entries()) {
            os << (first ? "" : ",") << p << ":" << G.element_name(x);
            first = false;
        }
        os << "]";
    }
    return os.str();
}

}  // namespace wreathlab
