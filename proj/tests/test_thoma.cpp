#include <catch2/catch_amalgamated.hpp>

#include "wreathlab/json_io.hpp"
#include "wreathlab/sampling.hpp"
#include "wreathlab/thoma.hpp"

using namespace wreathlab;

namespace {

const GroupTable& z2() {
    static GroupTable g = make_cyclic(2);
    return g;
}
const GroupTable& s3() {
    static GroupTable g = make_symmetric3();
    return g;
}

/// alpha = (0.5, sign), beta = (0.25, trivial), tr0 = regular.
ThomaParams std_z2_params() {
    return ThomaParams(z2(), {{0.5, *z2().irrep_by_name("sign")}},
                       {{0.25, *z2().irrep_by_name("trivial")}}, Tr0Spec::regular());
}

ThomaParams s3_params() {
    return ThomaParams(s3(), {{0.3, *s3().irrep_by_name("standard")}},
                       {{0.15, *s3().irrep_by_name("sign")}}, Tr0Spec::regular());
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK(std_z2_params().delta() == Catch::Approx(0.25));
    // weights must not increase
    CHECK_THROWS(ThomaParams(z2(),
                             {{0.2, *z2().irrep_by_name("sign")},
                              {0.5, *z2().irrep_by_name("trivial")}},
                             {}, Tr0Spec::regular()));
    // total weight above one
    CHECK_THROWS(ThomaParams(z2(), {{0.8, *z2().irrep_by_name("sign")}},
                             {{0.4, *z2().irrep_by_name("trivial")}}, Tr0Spec::regular()));
    // reducible attachment is rejected
    MatrixRep sum{"red", 2, {}};
    for (int x = 0; x < 2; ++x) {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = 1.0;
        m(1, 1) = z2().irrep_by_name("sign")->images[x](0, 0);
        sum.images.push_back(m);
    }
    CHECK_THROWS(ThomaParams(z2(), {{0.3, sum}}, {}, Tr0Spec::regular()));
}

TEST_CASE("evaluate frozen examples") {
    auto params = std_z2_params();
    SECTION("identity evaluates to one") {
        CHECK(evaluate(params, WreathElement::identity(z2())) == Complex(1.0));
    }
    SECTION("3-cycle with total entry g") {
        auto g = parse_element("(1 2 3)[1:g]", z2());
        CHECK(evaluate(params, g).real() == Catch::Approx(-0.109375).margin(1e-14));
        CHECK(evaluate(params, g).imag() == Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("fixed point carrying g") {
        auto g = parse_element("e[4:g]", z2());
        CHECK(evaluate(params, g).real() == Catch::Approx(-0.25).margin(1e-14));
    }
    SECTION("trivial fixed points never matter") {
        auto g = parse_element("(1 2)[2:g]", z2());
        auto h = multiply(g, WreathElement::identity(z2()));
        CHECK(evaluate(params, g) == evaluate(params, h));
    }
    SECTION("elements over a different base group are rejected") {
        GroupTable other = make_cyclic(2);
        CHECK_THROWS(evaluate(params, WreathElement::identity(other)));
    }
}

TEST_CASE("evaluate is central and a class function of the invariant") {
    Sampler rng(5);
    auto params = s3_params();
    for (int i = 0; i < 40; ++i) {
        auto g = rng.element(s3(), 5, 3);
        auto h = rng.element(s3(), 5, 3);
        auto conj = multiply(multiply(h, g), inverse(h));
        CHECK(std::abs(evaluate(params, conj) - evaluate(params, g)) < 1e-12);
        // normal_form produces a conjugate pair by construction
        auto [c, n] = normal_form(g);
        CHECK(std::abs(evaluate(params, n) - evaluate(params, g)) < 1e-12);
    }
}

TEST_CASE("multiplicativity residual") {
    auto params = std_z2_params();
    CHECK(check_multiplicativity(params, WreathElement::identity(z2())) == 0.0);
    CHECK(check_multiplicativity(params, parse_element("(1 2)(3 4 5)[3:g]", z2())) <= 1e-12);
    Sampler rng(17);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
        worst = std::max(worst, check_multiplicativity(params, rng.element(z2())));
    CHECK(worst <= 1e-12);
}

TEST_CASE("abelian specialization") {
    auto duals = dual_group(z2());
    // identify the sign and trivial dual characters
    const DualCharacter* sign = nullptr;
    const DualCharacter* triv = nullptr;
    for (const auto& d : duals) {
        if (std::abs(d.values[1] - Complex(-1.0)) < 1e-12) sign = &d;
        if (std::abs(d.values[1] - Complex(1.0)) < 1e-12) triv = &d;
    }
    REQUIRE(sign);
    REQUIRE(triv);
    SECTION("worked transposition value") {
        AbelianParams ap(z2(), {{0.5, *sign}}, {}, {{0.5, *sign}, {0.5, *triv}});
        CHECK(evaluate_abelian(ap, WreathElement::identity(z2())) == Complex(1.0));
        auto t = parse_element("(1 2)", z2());
        CHECK(evaluate_abelian(ap, t).real() == Catch::Approx(0.25).margin(1e-14));
    }
    SECTION("agrees with the general evaluator on random elements") {
        AbelianParams ap(z2(), {{0.5, *sign}}, {{0.25, *triv}}, {{1.0, *triv}});
        auto tp = to_thoma(ap);
        Sampler rng(29);
        for (int i = 0; i < 50; ++i) {
            auto g = rng.element(z2());
            CHECK(std::abs(evaluate_abelian(ap, g) - evaluate(tp, g)) < 1e-12);
        }
    }
    SECTION("mu must be a probability vector") {
        CHECK_THROWS(AbelianParams(z2(), {}, {}, {{0.4, *sign}}));
    }
}

TEST_CASE("abelian specialization over klein4") {
    GroupTable k4 = make_klein4();
    auto duals = dual_group(k4);
    REQUIRE(duals.size() == 4);
    AbelianParams ap(k4, {{0.4, duals[1]}, {0.2, duals[2]}}, {{0.15, duals[3]}},
                     {{0.5, duals[0]}, {0.5, duals[1]}});
    auto tp = to_thoma(ap);
    Sampler rng(47);
    for (int i = 0; i < 50; ++i) {
        auto g = rng.element(k4);
        CHECK(std::abs(evaluate_abelian(ap, g) - evaluate(tp, g)) < 1e-12);
    }
    CHECK(evaluate_abelian(ap, WreathElement::identity(k4)) == Complex(1.0));
}

TEST_CASE("classical restriction") {
    auto params = std_z2_params();
    SECTION("all fixed points") {
        CHECK(thoma_classical(params, {1, 1, 1}) == 1.0);
    }
    SECTION("single 2-cycle") {
        CHECK(thoma_classical(params, {2}) == Catch::Approx(0.1875).margin(1e-14));
    }
    SECTION("degenerate point alpha1 = 1") {
        ThomaParams deg(z2(), {{1.0, *z2().irrep_by_name("trivial")}}, {}, Tr0Spec::trivial());
        for (long l = 1; l <= 6; ++l)
            CHECK(thoma_classical(deg, {l}) == Catch::Approx(1.0).margin(1e-14));
    }
    SECTION("matches evaluate on pure permutations") {
        auto params3 = s3_params();
        auto g = parse_element("(1 2)(3 4 5)", s3());
        CHECK(thoma_classical(params3, {2, 3}) ==
              Catch::Approx(evaluate(params3, g).real()).margin(1e-12));
        CHECK(std::abs(evaluate(params3, g).imag()) < 1e-12);
    }
}

TEST_CASE("gram matrices are positive semidefinite") {
    auto params = std_z2_params();
    SECTION("singleton") {
        CHECK(gram_psd(params, {WreathElement::identity(z2())}) == Catch::Approx(1.0));
    }
    SECTION("random 20-element gram") {
        Sampler rng(41);
        std::vector<WreathElement> els;
        for (int i = 0; i < 20; ++i) els.push_back(rng.element(z2(), 5, 3));
        CHECK(gram_psd(params, els) >= -1e-8);
    }
    SECTION("centrality companion") {
        Sampler rng(43);
        for (int i = 0; i < 30; ++i) {
            auto g = rng.element(z2()), h = rng.element(z2());
            CHECK(std::abs(evaluate(params, multiply(g, h)) - evaluate(params, multiply(h, g))) <=
                  1e-12);
        }
    }
    SECTION("hermitian symmetry: phi(g^-1) is the conjugate of phi(g)") {
        // complex-valued characters exercise the conjugation
        GroupTable g3 = make_cyclic(3);
        ThomaParams p3(g3, {{0.4, *g3.irrep_by_name("chi1")}}, {}, Tr0Spec::regular());
        Sampler rng(53);
        for (int i = 0; i < 40; ++i) {
            auto g = rng.element(g3);
            CHECK(std::abs(evaluate(p3, inverse(g)) - std::conj(evaluate(p3, g))) < 1e-12);
        }
    }
}

TEST_CASE("alternating sums") {
    SECTION("m = 3 polynomial is t^3 - 3t^2 + 2t") {
        auto c = alternating_poly(3);
        CHECK(c == std::vector<long long>{0, 2, -3, 1});
        CHECK(falling_factorial_poly(3) == std::vector<long long>{0, 2, -3, 1});
    }
    SECTION("identities hold exactly for m <= 8") {
        for (int m = 1; m <= 8; ++m) CHECK(alternating_identity_exact(m));
    }
    SECTION("integer points pass, fractional points fail") {
        for (int m = 1; m <= 7; ++m)
            for (int k = 0; k <= m; ++k) CHECK(alternating_sum(k, m) >= 0.0);
        CHECK(alternating_sum(1.5, 3) == Catch::Approx(1.5 * 0.5 * (-0.5)).margin(1e-12));
        CHECK(alternating_sum(1.5, 3) < 0.0);
    }
    SECTION("exact rational evaluation matches the factorials") {
        Rational nu(3, 2);
        Rational expect = nu * (nu - 1) * (nu - 2);
        CHECK(alternating_sum_exact(nu, 3) == expect);
        CHECK(symmetric_sum_exact(nu, 3) == nu * (nu + 1) * (nu + 2));
    }
    SECTION("bounds are enforced") {
        CHECK_THROWS(alternating_sum(1.0, 9));
    }
}

TEST_CASE("params json round trip") {
    json j = {
        {"group", "cyclic 2"},
        {"alpha", json::array({{{"weight", 0.5}, {"irrep", "sign"}}})},
        {"beta", json::array({{{"weight", 0.25}, {"irrep", "trivial"}}})},
        {"tr0", "regular"},
    };
    auto g = load_group("cyclic 2");
    auto p = params_from_json(j, g);
    CHECK(p.delta() == Catch::Approx(0.25));
    auto e = parse_element("(1 2 3)[1:g]", g);
    CHECK(evaluate(p, e).real() == Catch::Approx(-0.109375));

    json jm = {
        {"group", "symmetric 3"},
        {"alpha", json::array({{{"weight", 0.3}, {"irrep", "standard"}}})},
        {"tr0", {{"mix", json::array({{{"irrep", "standard"}, {"coef", 1.0}}})}}},
    };
    auto g3 = load_group("symmetric 3");
    auto p3 = params_from_json(jm, g3);
    CHECK(p3.tr0_value(g3.identity()).real() == Catch::Approx(1.0));
    CHECK(p3.tr0_value(*g3.element_by_name("s")).real() == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("degenerate parameter sets") {
    // empty alpha/beta with trivial tr0: phi = 1 on pure tuples
    ThomaParams p(z2(), {}, {}, Tr0Spec::trivial());
    CHECK(p.delta() == Catch::Approx(1.0));
    CHECK(evaluate(p, parse_element("e[1:g,3:g]", z2())) == Complex(1.0));
    // with regular tr0 the same tuple evaluates to zero
    ThomaParams pr(z2(), {}, {}, Tr0Spec::regular());
    CHECK(evaluate(pr, parse_element("e[1:g]", z2())) == Complex(0.0));
}
