#pragma once

#include <chrono>
#include <functional>
#include <numeric>

#include "wreathlab/cosets.hpp"
#include "wreathlab/fock.hpp"
#include "wreathlab/sampling.hpp"
#include "wreathlab/thoma.hpp"
#include "wreathlab/typeiii.hpp"

namespace wreathlab {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string details;
};

inline CheckResult make_check(std::string name, double measured, double tolerance,
                              std::string details = {}) {
    bool pass = measured <= tolerance;
    return {std::move(name), measured, tolerance, pass, std::move(details)};
}

/// The parameter sets exercised by the verification suites: two per base
/// group, mixing one- and two-dimensional attachments and all tr0 kinds.
struct NamedParams {
    std::string name;
    GroupTable group;
    std::optional<ThomaParams> params;

    NamedParams(std::string n, GroupTable g) : name(std::move(n)), group(std::move(g)) {}
};

inline std::vector<std::unique_ptr<NamedParams>> params_catalog() {
    std::vector<std::unique_ptr<NamedParams>> out;
    {
        auto np = std::make_unique<NamedParams>("z2-std", make_cyclic(2));
        np->params.emplace(np->group,
                           std::vector<WeightedRep>{{0.5, *np->group.irrep_by_name("sign")}},
                           std::vector<WeightedRep>{{0.25, *np->group.irrep_by_name("trivial")}},
                           Tr0Spec::regular());
        out.push_back(std::move(np));
    }
    {
        auto np = std::make_unique<NamedParams>("z2-flat", make_cyclic(2));
        np->params.emplace(np->group,
                           std::vector<WeightedRep>{{0.3, *np->group.irrep_by_name("trivial")},
                                                    {0.2, *np->group.irrep_by_name("sign")}},
                           std::vector<WeightedRep>{{0.1, *np->group.irrep_by_name("sign")}},
                           Tr0Spec::trivial());
        out.push_back(std::move(np));
    }
    {
        auto np = std::make_unique<NamedParams>("z3-reg", make_cyclic(3));
        np->params.emplace(np->group,
                           std::vector<WeightedRep>{{0.4, *np->group.irrep_by_name("chi1")},
                                                    {0.2, *np->group.irrep_by_name("chi2")}},
                           std::vector<WeightedRep>{{0.15, *np->group.irrep_by_name("trivial")}},
                           Tr0Spec::regular());
        out.push_back(std::move(np));
    }
    {
        auto np = std::make_unique<NamedParams>("z3-mix", make_cyclic(3));
        np->params.emplace(
            np->group, std::vector<WeightedRep>{{0.5, *np->group.irrep_by_name("trivial")}},
            std::vector<WeightedRep>{{0.2, *np->group.irrep_by_name("chi1")},
                                     {0.1, *np->group.irrep_by_name("chi2")}},
            Tr0Spec::mixture({{*np->group.irrep_by_name("trivial"), 0.5},
                              {*np->group.irrep_by_name("chi1"), 0.25},
                              {*np->group.irrep_by_name("chi2"), 0.25}}));
        out.push_back(std::move(np));
    }
    {
        auto np = std::make_unique<NamedParams>("s3-std2", make_symmetric3());
        np->params.emplace(np->group,
                           std::vector<WeightedRep>{{0.3, *np->group.irrep_by_name("standard")}},
                           std::vector<WeightedRep>{{0.15, *np->group.irrep_by_name("sign")}},
                           Tr0Spec::regular());
        out.push_back(std::move(np));
    }
    {
        auto np = std::make_unique<NamedParams>("s3-beta2", make_symmetric3());
        np->params.emplace(np->group,
                           std::vector<WeightedRep>{{0.25, *np->group.irrep_by_name("trivial")},
                                                    {0.2, *np->group.irrep_by_name("sign")}},
                           std::vector<WeightedRep>{{0.1, *np->group.irrep_by_name("standard")}},
                           Tr0Spec::mixture({{*np->group.irrep_by_name("standard"), 1.0}}));
        out.push_back(std::move(np));
    }
    return out;
}

// ---- criterion suites --------------------------------------------------------

/// Character values from the classification formula against the tensor
/// realization, on seeded random elements.
inline std::vector<CheckResult> check_two_oracle(uint64_t seed, int elements_per_set = 100) {
    std::vector<CheckResult> out;
    for (const auto& np : params_catalog()) {
        Sampler rng(seed);
        double worst = 0.0;
        for (int i = 0; i < elements_per_set; ++i) {
            auto g = rng.element(np->group, 5, 3);
            Complex a = evaluate(*np->params, g);
            Complex b = matrix_element(*np->params, g, 5);
            worst = std::max(worst, std::abs(a - b));
        }
        out.push_back(make_check("two_oracle/" + np->name, worst, 1e-9,
                                 std::to_string(elements_per_set) + " elements, support <= 5"));
    }
    return out;
}

namespace check_detail {

inline std::vector<WreathElement> enumerate_wreath(const GroupTable& G, int max_pos) {
    std::vector<int> p(max_pos);
    std::iota(p.begin(), p.end(), 1);
    std::vector<WreathElement> all;
    do {
        std::map<int, int> m;
        for (int i = 0; i < max_pos; ++i)
            if (p[i] != i + 1) m[i + 1] = p[i];
        Permutation perm = Permutation::from_map(std::move(m));
        long tuples = 1;
        for (int i = 0; i < max_pos; ++i) tuples *= G.order();
        for (long t = 0; t < tuples; ++t) {
            long rest = t;
            GammaTuple tup;
            for (int i = 1; i <= max_pos; ++i) {
                tup.set(i, static_cast<int>(rest % G.order()), G);
                rest /= G.order();
            }
            all.emplace_back(G, perm, tup);
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return all;
}

}  // namespace check_detail

/// Invariant equality against brute-force conjugacy in Z2 wr S4.
inline std::vector<CheckResult> check_conjugacy_oracle(uint64_t seed, int pairs = 2000) {
    GroupTable G = make_cyclic(2);
    auto all = check_detail::enumerate_wreath(G, 4);
    auto cls = conjugacy_classes(G);
    std::vector<ConjInvariant> invs;
    invs.reserve(all.size());
    for (const auto& g : all) invs.push_back(invariant(g, cls));
    // brute-force conjugacy partition
    std::map<std::string, int> index;
    for (size_t i = 0; i < all.size(); ++i) index[format_element(all[i])] = static_cast<int>(i);
    std::vector<int> parent(all.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < all.size(); ++i)
        for (const auto& h : all) {
            auto c = multiply(multiply(h, all[i]), inverse(h));
            int j = index.at(format_element(c));
            int a = find(static_cast<int>(i)), b = find(j);
            if (a != b) parent[a] = b;
        }
    Sampler rng(seed);
    int mismatches = 0;
    for (int t = 0; t < pairs; ++t) {
        int i = rng.below(static_cast<int>(all.size()));
        int j = rng.below(static_cast<int>(all.size()));
        bool conj = find(i) == find(j);
        bool inv_eq = invs[i] == invs[j];
        if (conj != inv_eq) ++mismatches;
    }
    std::vector<CheckResult> out;
    out.push_back(make_check("conjugacy_oracle/z2_wr_s4", mismatches, 0.0,
                             std::to_string(all.size()) + " elements, " + std::to_string(pairs) +
                                 " seeded pairs"));
    return out;
}

/// Single-cycle classical values against the closed form, l = 2..6.
inline std::vector<CheckResult> check_thoma_classical() {
    std::vector<CheckResult> out;
    for (const auto& np : params_catalog()) {
        double worst = 0.0;
        for (long l = 2; l <= 6; ++l) {
            double direct = 0.0;
            for (const auto& wr : np->params->alpha())
                direct += wr.rep.dim * std::pow(wr.weight, static_cast<double>(l));
            double sign = (l % 2 == 1) ? 1.0 : -1.0;
            for (const auto& wr : np->params->beta())
                direct += sign * wr.rep.dim * std::pow(wr.weight, static_cast<double>(l));
            worst = std::max(worst, std::abs(thoma_classical(*np->params, {l}) - direct));
            // and the evaluator agrees on the corresponding permutation
            std::vector<int> cyc(l);
            std::iota(cyc.begin(), cyc.end(), 1);
            WreathElement g(np->group, Permutation::cycle(cyc), {});
            worst = std::max(worst, std::abs(evaluate(*np->params, g) - Complex(direct)));
        }
        out.push_back(make_check("thoma_classical/" + np->name, worst, 1e-12, "l = 2..6"));
    }
    return out;
}

/// Gram positivity and centrality of the evaluator.
inline std::vector<CheckResult> check_gram_psd(uint64_t seed) {
    std::vector<CheckResult> out;
    for (const auto& np : params_catalog()) {
        Sampler rng(seed);
        std::vector<WreathElement> els;
        for (int i = 0; i < 20; ++i) els.push_back(rng.element(np->group, 5, 3));
        double mineig = gram_psd(*np->params, els);
        out.push_back(make_check("gram_psd/" + np->name, -mineig, 1e-8,
                                 "20x20 gram, min eigenvalue " + std::to_string(mineig)));
        double central = 0.0;
        for (int i = 0; i < 50; ++i) {
            auto g = rng.element(np->group, 5, 3);
            auto h = rng.element(np->group, 5, 3);
            central = std::max(central, std::abs(evaluate(*np->params, multiply(g, h)) -
                                                 evaluate(*np->params, multiply(h, g))));
        }
        out.push_back(make_check("centrality/" + np->name, central, 1e-12, "50 seeded pairs"));
    }
    return out;
}

/// Exact alternating-sum identities and sign behavior.
inline std::vector<CheckResult> check_alternating() {
    std::vector<CheckResult> out;
    bool exact = true;
    for (int m = 1; m <= 7; ++m) exact = exact && alternating_identity_exact(m);
    out.push_back(make_check("alt/polynomial_identity_m_le_7", exact ? 0.0 : 1.0, 0.0,
                             "signed and unsigned, exact integer coefficients"));
    double frac = alternating_sum(1.5, 3);
    out.push_back(make_check("alt/fractional_point_negative", frac < 0.0 ? 0.0 : 1.0, 0.0,
                             "alternating_sum(1.5, 3) = " + std::to_string(frac)));
    double worst = 0.0;
    for (int m = 1; m <= 7; ++m)
        for (int k = 0; k <= m; ++k) worst = std::min(worst, alternating_sum(k, m));
    out.push_back(make_check("alt/integer_points_nonnegative", -worst, 1e-9,
                             "k = 0..m, m <= 7"));
    // exact rational spot checks
    bool rational_ok = alternating_sum_exact(Rational(3, 2), 3) ==
                           Rational(3, 2) * Rational(1, 2) * Rational(-1, 2) &&
                       symmetric_sum_exact(Rational(2, 3), 4) ==
                           Rational(2, 3) * Rational(5, 3) * Rational(8, 3) * Rational(11, 3);
    out.push_back(make_check("alt/rational_evaluation", rational_ok ? 0.0 : 1.0, 0.0));
    return out;
}

/// The separator factorization identity, exact over the stated range.
inline std::vector<CheckResult> check_omega() {
    int failures = 0, total = 0;
    for (int n = 0; n <= 4; ++n)
        for (int M = 2; M <= 6; ++M)
            for (int m = 1; m < M; ++m) {
                ++total;
                auto lhs = omega(n, M);
                auto rhs = omega2(n + m, m, M - m) * omega(n, m) * omega2(n + m, M - m, M);
                if (!(lhs == rhs)) ++failures;
            }
    return {make_check("omega/separator_identity", failures, 0.0,
                       std::to_string(total) + " cases, 1 <= m < M <= 6, 0 <= n <= 4")};
}

/// Okounkov moments at n = 16 and n = 32.
inline std::vector<CheckResult> check_moments() {
    auto cat = params_catalog();
    const ThomaParams& params = *cat[0]->params;  // z2-std
    std::vector<CheckResult> out;
    for (int q : {1, 2}) {
        auto r16 = moment_check(params, 1, q, 16);
        auto r32 = moment_check(params, 1, q, 32);
        out.push_back(make_check("moments/q" + std::to_string(q) + "_n16", r16.gap, 3.0 / 16,
                                 "measured " + std::to_string(r16.measured) + " predicted " +
                                     std::to_string(r16.predicted)));
        out.push_back(make_check("moments/q" + std::to_string(q) + "_n32", r32.gap, 3.0 / 32,
                                 "measured " + std::to_string(r32.measured)));
        out.push_back(make_check("moments/q" + std::to_string(q) + "_shrinks",
                                 r32.gap < r16.gap ? 0.0 : 1.0, 0.0,
                                 "gap " + std::to_string(r16.gap) + " -> " +
                                     std::to_string(r32.gap)));
    }
    return out;
}

/// Cycle factorization residual trend over n in {8, 16, 32}.
inline std::vector<CheckResult> check_factorization() {
    auto cat = params_catalog();
    const ThomaParams& params = *cat[0]->params;  // z2-std
    const GroupTable& G = params.group();
    struct Case {
        std::string name;
        WreathElement g;
        std::map<int, int> powers;
    };
    std::vector<Case> cases = {
        {"transposition_r1", parse_element("(1 2)", G), {{1, 1}}},
        {"threecycle_gamma", parse_element("(1 2 3)[1:g]", G), {}},
        {"disjoint_mixed", parse_element("(1 2)(4 5)[4:g]", G), {{4, 1}}},
    };
    std::vector<CheckResult> out;
    for (const auto& c : cases) {
        double r8 = factorization_check(params, c.g, c.powers, 8).residual;
        double r16 = factorization_check(params, c.g, c.powers, 16).residual;
        double r32 = factorization_check(params, c.g, c.powers, 32).residual;
        bool decreasing = r16 < r8 && r32 < r16;
        out.push_back(make_check("factorization/" + c.name, decreasing ? 0.0 : 1.0, 0.0,
                                 "residuals " + std::to_string(r8) + " -> " + std::to_string(r16) +
                                     " -> " + std::to_string(r32)));
    }
    return out;
}

/// Diagram calculus: cross-oracle, coset invariance, and the worked
/// generator and product examples.
inline std::vector<CheckResult> check_cosets(uint64_t seed) {
    std::vector<CheckResult> out;
    GroupTable S3 = make_symmetric3();
    GroupTable Z3 = make_cyclic(3);

    {
        Sampler rng(seed);
        int mism = 0, total = 0;
        for (int n = 1; n <= 3; ++n)
            for (int i = 0; i < 34; ++i) {
                GPair a{rng.element(S3, 5, 2), rng.element(S3, 5, 2)};
                GPair b{rng.element(S3, 5, 2), rng.element(S3, 5, 2)};
                auto da = theta(a, n), db = theta(b, n);
                if (!mult_diagram(da, db).same_diagram(mult_repr(da, db))) ++mism;
                ++total;
            }
        out.push_back(make_check("cosets/pasting_equals_separator", mism, 0.0,
                                 std::to_string(total) + " seeded pairs, n <= 3"));
    }
    {
        Sampler rng(seed + 1);
        int mism = 0, total = 0;
        for (int n = 0; n <= 3; ++n)
            for (int rep = 0; rep < 2; ++rep) {
                GPair g{rng.element(Z3, 5, 3), rng.element(Z3, 5, 3)};
                auto base = theta(g, n);
                for (int k = 0; k < 100; ++k) {
                    auto k1 = rng.element_above(Z3, n);
                    auto k2 = rng.element_above(Z3, n);
                    GPair tr{multiply(multiply(k1, g.first), k2),
                             multiply(multiply(k1, g.second), k2)};
                    if (!base.same_diagram(theta(tr, n))) ++mism;
                    ++total;
                }
            }
        out.push_back(make_check("cosets/theta_invariance", mism, 0.0,
                                 std::to_string(total) + " K_n translations"));
    }
    {
        // the transposition and tuple generator cosets commute, exactly,
        // via both product routes
        int n = 3, i = 2;
        GPair tpair{WreathElement::identity(S3),
                    WreathElement(S3, Permutation::transposition(i, n + 1), {})};
        GammaTuple gt;
        gt.set(1, *S3.element_by_name("r"), S3);
        gt.set(2, *S3.element_by_name("s"), S3);
        gt.set(3, *S3.element_by_name("r2"), S3);
        WreathElement gamma_el(S3, {}, gt);
        auto dt = theta(tpair, n);
        auto dg = theta({gamma_el, gamma_el}, n);
        bool ok = mult_diagram(dg, dt).same_diagram(mult_diagram(dt, dg)) &&
                  mult_diagram(dg, dt).same_diagram(mult_repr(dg, dt)) &&
                  mult_repr(dt, dg).same_diagram(mult_repr(dg, dt));
        out.push_back(make_check("cosets/generator_commutation", ok ? 0.0 : 1.0, 0.0,
                                 "diagram products commute exactly"));
    }
    {
        // worked five-point product: the result carries exactly two weight-one
        // marked components, one closed circle and one long edge
        auto el = [&](const char* s) { return *S3.element_by_name(s); };
        std::vector<int> gp = {-1, el("r"), el("s"), el("rs"), el("r2"), el("r2s")};
        std::vector<int> gpp = {-1, el("r2"), el("rs"), el("s"), el("r"), el("e")};
        std::vector<int> dp = {-1, el("s"), el("r"), el("r2s"), el("rs"), el("r2")};
        std::vector<int> dpp = {-1, el("r2s"), el("e"), el("r"), el("s"), el("rs")};
        Permutation s1 = Permutation::from_map({{1, 3}, {3, 4}, {4, 2}, {2, 5}, {5, 1}});
        Permutation s2 = Permutation::from_map({{1, 4}, {4, 3}, {3, 2}, {2, 5}, {5, 1}});
        Permutation t = Permutation::from_map({{1, 5}, {5, 2}, {2, 4}, {4, 3}, {3, 1}});
        auto tuple_of = [&](const std::vector<int>& v) {
            GammaTuple tu;
            for (int i = 1; i <= 5; ++i) tu.set(i, v[i], S3);
            return tu;
        };
        GPair g{WreathElement(S3, s1, tuple_of(gp)), WreathElement(S3, s2, tuple_of(gpp))};
        GPair h{WreathElement(S3, t, tuple_of(dp)), WreathElement(S3, t, tuple_of(dpp))};
        auto prod = mult_diagram(theta(g, 3), theta(h, 3));
        auto classes = conjugacy_classes(S3);
        auto mul = [&](std::initializer_list<int> xs) {
            int acc = S3.identity();
            for (int x : xs) acc = S3.mult(acc, x);
            return acc;
        };
        // the two expected weight-one markings
        int edge_mark = mul({gpp[3], dpp[4], S3.inv(dp[4]), S3.inv(gp[3]), gpp[1], dpp[3]});
        int circle_mark = mul({S3.inv(gp[2]), gpp[2], dpp[5], S3.inv(dp[5])});
        bool edge_ok = false;
        int weight_one_edges = 0;
        for (const auto& e : prod.edges) {
            if (e.half2 == 2) {
                ++weight_one_edges;
                if (e.from == DiagVertex{3, false} && e.to == DiagVertex{2, true} &&
                    e.gamma == edge_mark)
                    edge_ok = true;
            }
        }
        bool circles_ok = prod.circles.size() == 1 && prod.circles[0].first == 1 &&
                          prod.circles[0].second == classes.class_of[circle_mark];
        bool ok = edge_ok && weight_one_edges == 1 && circles_ok && prod.edges.size() == 6;
        out.push_back(make_check("cosets/worked_product", ok ? 0.0 : 1.0, 0.0,
                                 "two weight-1 marked components: one circle, one edge"));
    }
    return out;
}

/// Type-III laboratory: algebra identification, cyclicity, modular operator,
/// and permutation-centrality of the state.
inline std::vector<CheckResult> check_type3(uint64_t seed) {
    std::vector<CheckResult> out;
    GroupTable Z2 = make_cyclic(2);
    Sampler rng(seed);
    auto sample_p = [&rng]() {
        std::array<double, 4> v;
        double s = 0.0;
        for (auto& x : v) {
            x = 0.05 + rng.unit();
            s += x;
        }
        for (auto& x : v) x /= s;
        return ProbMatrix::from_flat(v);
    };
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) worst = std::max(worst, iso_and_lr(sample_p()).max_residual);
        out.push_back(make_check("type3/lr_identities", worst, 1e-12, "20 seeded measures"));
    }
    {
        int mism = 0;
        for (int i = 0; i < 20; ++i) {
            auto p = sample_p();
            for (int n = 1; n <= 2; ++n)
                if (cyclic_separating_check(p, n).cyclic != (std::abs(p.det()) > 1e-9)) ++mism;
        }
        // engineered singular, strictly positive measure
        auto p0 = ProbMatrix::from_flat({0.3, 0.3, 0.2, 0.2});
        for (int n = 1; n <= 2; ++n)
            if (cyclic_separating_check(p0, n).cyclic) ++mism;
        out.push_back(make_check("type3/cyclic_matches_det", mism, 0.0,
                                 "20 seeded + 1 singular measure, n <= 2"));
    }
    {
        double worst = 0.0;
        auto pref = ProbMatrix::from_flat({0.4, 0.1, 0.2, 0.3});
        for (int n = 1; n <= 3; ++n) {
            auto rep = modular_operator(pref, n);
            worst = std::max({worst, rep.closed_form_residual, rep.fixes_xi});
        }
        for (int i = 0; i < 3; ++i) {
            auto p = sample_p();
            if (std::abs(p.det()) < 1e-6) continue;
            auto rep = modular_operator(p, 2);
            worst = std::max({worst, rep.closed_form_residual, rep.fixes_xi});
        }
        out.push_back(make_check("type3/modular_identity", worst, 1e-10,
                                 "all left-basis elements, n <= 3"));
    }
    {
        auto pref = ProbMatrix::from_flat({0.4, 0.1, 0.2, 0.3});
        double worst = 0.0;
        for (int i = 0; i < 30; ++i) {
            auto g = rng.element(Z2, 3, 2);
            auto s = rng.permutation(3, 3);
            worst = std::max(worst, kms_trace_check(pref, 3, s, g));
        }
        out.push_back(make_check("type3/kms_permutation_centrality", worst, 1e-12,
                                 "30 seeded (s, g) pairs, n = 3"));
        auto w = centrality_witness(pref, 3, Z2);
        bool found = w && w->gap > 1e-3;
        out.push_back(make_check(
            "type3/centrality_counterexample", found ? 0.0 : 1.0, 0.0,
            found ? "|phi(gh) - phi(hg)| = " + std::to_string(w->gap) + " at g = " +
                        format_element(w->g) + ", h = " + format_element(w->h)
                  : "no witness found"));
    }
    return out;
}

}  // namespace wreathlab
