#include <catch2/catch_amalgamated.hpp>

#include "wreathlab/sampling.hpp"
#include "wreathlab/wreath.hpp"

using namespace wreathlab;

namespace {
const GroupTable& z2() {
    static GroupTable g = make_cyclic(2);
    return g;
}
const GroupTable& z3() {
    static GroupTable g = make_cyclic(3);
    return g;
}
const GroupTable& s3() {
    static GroupTable g = make_symmetric3();
    return g;
}
}  // namespace

TEST_CASE("permutation composition is left-to-right") {
    auto s = Permutation::transposition(1, 2);
    auto t = Permutation::transposition(2, 3);
    auto st = s * t;  // t first
    CHECK(st.apply(1) == 2);
    CHECK(st.apply(2) == 3);
    CHECK(st.apply(3) == 1);
}

TEST_CASE("worked product over Z2") {
    auto g1 = parse_element("(1 2)[1:g]", z2());
    auto g2 = parse_element("(2 3)[2:g]", z2());
    auto prod = multiply(g1, g2);
    CHECK(format_element(prod) == "(1 2 3)[1:g1,2:g1]");
    CHECK(prod == parse_element("(1 2 3)[1:g,2:g]", z2()));
}

TEST_CASE("identity and inverses") {
    Sampler rng(11);
    auto id = WreathElement::identity(z3());
    for (int i = 0; i < 50; ++i) {
        auto g = rng.element(z3());
        CHECK(multiply(g, id) == g);
        CHECK(multiply(id, g) == g);
        CHECK(multiply(g, inverse(g)).is_identity());
        CHECK(multiply(inverse(g), g).is_identity());
    }
    // pure tuple inverts entrywise
    auto t = parse_element("e[1:g1,4:g2]", z3());
    auto ti = inverse(t);
    CHECK(ti == parse_element("e[1:g2,4:g1]", z3()));
}

TEST_CASE("group axioms on random triples") {
    Sampler rng(23);
    for (int i = 0; i < 60; ++i) {
        auto a = rng.element(s3()), b = rng.element(s3()), c = rng.element(s3());
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    }
}

TEST_CASE("cycle decomposition") {
    SECTION("identity decomposes to nothing") {
        CHECK(cycle_decompose(WreathElement::identity(z2())).empty());
    }
    SECTION("factors commute and recombine") {
        auto g = parse_element("(1 2)(3 4)[3:g]", z2());
        auto fs = cycle_decompose(g);
        REQUIRE(fs.size() == 2);
        CHECK(multiply(fs[0], fs[1]) == g);
        CHECK(multiply(fs[1], fs[0]) == g);
    }
    SECTION("pure tuple gives singleton factors") {
        auto g = parse_element("e[1:g,5:g]", z2());
        auto fs = cycle_decompose(g);
        REQUIRE(fs.size() == 2);
        CHECK(multiply(fs[0], fs[1]) == g);
    }
    SECTION("random recombination, any order") {
        Sampler rng(37);
        for (int i = 0; i < 40; ++i) {
            auto g = rng.element(s3());
            auto fs = cycle_decompose(g);
            auto acc = WreathElement::identity(s3());
            for (const auto& f : fs) acc = multiply(acc, f);
            CHECK(acc == g);
            acc = WreathElement::identity(s3());
            for (auto it = fs.rbegin(); it != fs.rend(); ++it) acc = multiply(acc, *it);
            CHECK(acc == g);
            for (size_t a = 0; a < fs.size(); ++a)
                for (size_t b = a + 1; b < fs.size(); ++b)
                    CHECK(multiply(fs[a], fs[b]) == multiply(fs[b], fs[a]));
        }
    }
}

TEST_CASE("cycle product") {
    // abelian entries: walk order does not matter
    auto ab = parse_element("(1 2 3)[1:g1,2:g1,3:g2]", z3());
    CHECK(cycle_product(ab, {1, 2, 3}) == 1);  // g1*g1*g2 = g4 = g1

    // non-abelian entries: the walk runs against the permutation
    auto g = parse_element("(1 2 3)[1:r,2:s,3:rs]", s3());
    const GroupTable& G = s3();
    int expect = G.mult(G.mult(*G.element_by_name("r"), *G.element_by_name("rs")),
                        *G.element_by_name("s"));
    CHECK(cycle_product(g, {1, 2, 3}) == expect);

    auto h = parse_element("e[4:r2]", s3());
    CHECK(cycle_product(h, {4}) == *G.element_by_name("r2"));

    SECTION("base point changes stay in one conjugacy class") {
        auto cls = conjugacy_classes(G);
        // rotate the orbit by conjugating with the cycle itself
        auto c = parse_element("(1 2 3)", s3());
        auto g2 = multiply(multiply(inverse(c), g), c);
        CHECK(cls.class_of[cycle_product(g, {1, 2, 3})] ==
              cls.class_of[cycle_product(g2, {1, 2, 3})]);
    }
    SECTION("non-orbit input is rejected") {
        CHECK_THROWS(cycle_product(g, {1, 2}));
    }
}

TEST_CASE("invariant basics") {
    CHECK(invariant(WreathElement::identity(z2())).pairs.empty());
    auto g = parse_element("(1 2 3)[1:g]", z2());
    auto inv = invariant(g);
    REQUIRE(inv.pairs.size() == 1);
    CHECK(inv.pairs[0].first == 3);
    auto cls = conjugacy_classes(z2());
    CHECK(inv.pairs[0].second == cls.class_of[1]);
    // appending trivial fixed points changes nothing
    CHECK(invariant(g) == invariant(multiply(g, WreathElement::identity(z2()))));
}

TEST_CASE("invariant is conjugation-invariant") {
    Sampler rng(101);
    auto cls = conjugacy_classes(s3());
    for (int i = 0; i < 60; ++i) {
        auto g = rng.element(s3());
        auto h = rng.element(s3());
        CHECK(invariant(multiply(multiply(h, g), inverse(h)), cls) == invariant(g, cls));
    }
}

namespace {

/// All elements of Gamma wr S_max_pos with full support window.
std::vector<WreathElement> enumerate_wreath(const GroupTable& G, int max_pos) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(max_pos);
    for (int i = 0; i < max_pos; ++i) p[i] = i + 1;
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::vector<WreathElement> out;
    long tuples = 1;
    for (int i = 0; i < max_pos; ++i) tuples *= G.order();
    for (const auto& pm : perms) {
        std::map<int, int> m;
        for (int i = 0; i < max_pos; ++i)
            if (pm[i] != i + 1) m[i + 1] = pm[i];
        Permutation perm = Permutation::from_map(std::move(m));
        for (long t = 0; t < tuples; ++t) {
            long rest = t;
            GammaTuple tup;
            for (int i = 1; i <= max_pos; ++i) {
                tup.set(i, static_cast<int>(rest % G.order()), G);
                rest /= G.order();
            }
            out.emplace_back(G, perm, tup);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("invariant equality matches brute-force conjugacy in Z3 wr S3") {
    const GroupTable& G = z3();
    auto all = enumerate_wreath(G, 3);
    REQUIRE(all.size() == 6u * 27u);
    auto cls = conjugacy_classes(G);
    std::vector<ConjInvariant> invs;
    invs.reserve(all.size());
    for (const auto& g : all) invs.push_back(invariant(g, cls));
    // brute-force conjugacy partition via union-find over conjugation orbits
    std::vector<int> parent(all.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<std::string, int> index;
    for (size_t i = 0; i < all.size(); ++i) index[format_element(all[i])] = static_cast<int>(i);
    for (size_t i = 0; i < all.size(); ++i) {
        for (const auto& h : all) {
            auto c = multiply(multiply(h, all[i]), inverse(h));
            auto it = index.find(format_element(c));
            if (it != index.end()) {
                int a = find(static_cast<int>(i)), b = find(it->second);
                if (a != b) parent[a] = b;
            }
        }
    }
    Sampler rng(7);
    int checked = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        int i = rng.below(static_cast<int>(all.size()));
        int j = rng.below(static_cast<int>(all.size()));
        bool conj = find(i) == find(j);
        bool inv_eq = invs[i] == invs[j];
        CHECK(conj == inv_eq);
        ++checked;
    }
    CHECK(checked == 4000);
}

TEST_CASE("normal form") {
    SECTION("already-normal element has identity conjugator") {
        auto g = parse_element("(1 2)[2:g]", z2());
        auto [c, n] = normal_form(g);
        CHECK(c.is_identity());
        CHECK(n == g);
    }
    SECTION("two-point example collects the reversed product") {
        auto g = parse_element("(1 2)[1:r,2:s]", s3());
        auto [c, n] = normal_form(g);
        const GroupTable& G = s3();
        int ba = G.mult(*G.element_by_name("s"), *G.element_by_name("r"));
        GammaTuple expect;
        expect.set(2, ba, G);
        CHECK(n.perm == g.perm);
        CHECK(n.tuple == expect);
        // and c really conjugates g to n
        WreathElement tc(G, {}, c);
        CHECK(multiply(multiply(tc, g), inverse(tc)) == n);
    }
    SECTION("random elements: invariant preserved, one entry per orbit") {
        Sampler rng(55);
        auto cls = conjugacy_classes(z3());
        for (int i = 0; i < 60; ++i) {
            auto g = rng.element(z3(), 5, 3);
            auto [c, n] = normal_form(g);
            CHECK(invariant(n, cls) == invariant(g, cls));
            WreathElement tc(z3(), {}, c);
            CHECK(multiply(multiply(tc, g), inverse(tc)) == n);
            for (const auto& orb : n.perm.orbits()) {
                int nontrivial = 0;
                for (int p : orb)
                    if (n.tuple.at(p, z3()) != z3().identity()) ++nontrivial;
                CHECK(nontrivial <= 1);
            }
        }
    }
}

TEST_CASE("same cycle conjugator") {
    SECTION("equal elements need the identity tuple") {
        auto g = parse_element("(1 2 3)[2:g1]", z3());
        auto c = same_cycle_conjugator(g, g);
        REQUIRE(c.has_value());
        WreathElement tc(z3(), {}, *c);
        CHECK(multiply(multiply(tc, g), inverse(tc)) == g);
    }
    SECTION("entry can be moved around the cycle") {
        auto a = parse_element("(1 2)[1:g1]", z3());
        auto b = parse_element("(1 2)[2:g1]", z3());
        auto c = same_cycle_conjugator(a, b);
        REQUIRE(c.has_value());
        WreathElement tc(z3(), {}, *c);
        CHECK(multiply(multiply(tc, a), inverse(tc)) == b);
        // brute-force confirmation over Gamma^2
        bool found = false;
        for (int x = 0; x < 3 && !found; ++x)
            for (int y = 0; y < 3 && !found; ++y) {
                GammaTuple t;
                t.set(1, x, z3());
                t.set(2, y, z3());
                WreathElement w(z3(), {}, t);
                if (multiply(multiply(w, a), inverse(w)) == b) found = true;
            }
        CHECK(found);
    }
    SECTION("invariant mismatch yields none") {
        auto a = parse_element("(1 2)[1:g]", z2());
        auto b = parse_element("(1 2)", z2());
        CHECK_FALSE(same_cycle_conjugator(a, b).has_value());
    }
    SECTION("non-abelian cycles, random sweeps") {
        Sampler rng(77);
        for (int i = 0; i < 40; ++i) {
            // random tuples on a fixed 3-cycle
            GammaTuple t1, t2;
            for (int p = 1; p <= 3; ++p) {
                t1.set(p, rng.below(6), s3());
                t2.set(p, rng.below(6), s3());
            }
            WreathElement a(s3(), Permutation::cycle({1, 2, 3}), t1);
            WreathElement b(s3(), Permutation::cycle({1, 2, 3}), t2);
            auto c = same_cycle_conjugator(a, b);
            bool same = invariant(a) == invariant(b);
            CHECK(c.has_value() == same);
            if (c) {
                WreathElement tc(s3(), {}, *c);
                CHECK(multiply(multiply(tc, a), inverse(tc)) == b);
            }
        }
    }
}

TEST_CASE("omega permutations") {
    SECTION("omega(1,2) matches the case definition") {
        auto w = omega(1, 2);
        CHECK(w.apply(1) == 1);
        CHECK(w.apply(2) == 4);
        CHECK(w.apply(3) == 5);
        CHECK(w.apply(4) == 2);
        CHECK(w.apply(5) == 3);
        CHECK(w.apply(6) == 6);
    }
    SECTION("omega is an involution") {
        for (int n = 0; n <= 4; ++n)
            for (int m = 1; m <= 5; ++m) CHECK((omega(n, m) * omega(n, m)).is_identity());
    }
    SECTION("separator factorization identity, exact for all small cases") {
        for (int n = 0; n <= 4; ++n)
            for (int M = 2; M <= 6; ++M)
                for (int m = 1; m < M; ++m) {
                    auto lhs = omega(n, M);
                    auto rhs = omega2(n + m, m, M - m) * omega(n, m) * omega2(n + m, M - m, M);
                    CHECK(lhs == rhs);
                }
    }
}

TEST_CASE("orbit count") {
    CHECK(orbit_count({}, 5) == 5);
    CHECK(orbit_count(Permutation::cycle({1, 2, 3}), 3) == 1);
    auto s = Permutation::cycle({1, 2}) * Permutation::cycle({3, 4});
    CHECK(orbit_count(s, 6) == 4);
    CHECK_THROWS(orbit_count(Permutation::transposition(5, 7), 6));
}

TEST_CASE("G_n(infinity) membership") {
    CHECK(in_Gn_infty(WreathElement::identity(z2()), 10));
    CHECK_FALSE(in_Gn_infty(parse_element("(1 2)", z2()), 2));
    CHECK(in_Gn_infty(parse_element("(5 6)[7:g]", z2()), 4));
    CHECK_FALSE(in_Gn_infty(parse_element("e[3:g]", z2()), 3));
}

TEST_CASE("element grammar") {
    SECTION("basic forms") {
        CHECK(parse_element("e", z2()).is_identity());
        auto g = parse_element("(1 2 3)[1:g1,3:g2]", z3());
        CHECK(g.perm.apply(1) == 2);
        CHECK(g.tuple.at(1, z3()) == 1);
        CHECK(g.tuple.at(3, z3()) == 2);
        // whitespace inside labels is insignificant
        CHECK(parse_element("(1 2 3)[ 1 : g1 , 3 : g2 ]", z3()) == g);
    }
    SECTION("round trips") {
        auto g = parse_element("(1 2)(3 4)[2:g1]", z3());
        CHECK(parse_element(format_element(g), z3()) == g);
        Sampler rng(99);
        for (int i = 0; i < 80; ++i) {
            auto h = rng.element(s3());
            CHECK(parse_element(format_element(h), s3()) == h);
        }
    }
    SECTION("errors carry positions") {
        CHECK_THROWS_WITH(parse_element("(1 2", z2()),
                          Catch::Matchers::ContainsSubstring("position"));
        CHECK_THROWS(parse_element("(0 1)", z2()));
        CHECK_THROWS_WITH(parse_element("(1 2)[1:zz]", z2()),
                          Catch::Matchers::ContainsSubstring("zz"));
        CHECK_THROWS(parse_element("(1 1)", z2()));
        CHECK_THROWS(parse_element("(1 2) junk", z2()));
    }
}
