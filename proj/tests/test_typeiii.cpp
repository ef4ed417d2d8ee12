#include <catch2/catch_amalgamated.hpp>

#include "wreathlab/sampling.hpp"
#include "wreathlab/typeiii.hpp"

using namespace wreathlab;

namespace {

const GroupTable& z2() {
    static GroupTable g = make_cyclic(2);
    return g;
}

ProbMatrix sample_p(Sampler& rng) {
    std::array<double, 4> v;
    double s = 0.0;
    for (auto& x : v) {
        x = 0.05 + rng.unit();
        s += x;
    }
    for (auto& x : v) x /= s;
    return ProbMatrix::from_flat(v);
}

const ProbMatrix kRef = ProbMatrix::from_flat({0.4, 0.1, 0.2, 0.3});

}  // namespace

TEST_CASE("probability matrix validation") {
    CHECK_THROWS(ProbMatrix::from_flat({0.5, 0.5, 0.5, 0.5}));
    CHECK(kRef.strictly_positive());
    CHECK(kRef.det() == Catch::Approx(0.4 * 0.3 - 0.1 * 0.2));
    // det of the iso image: sqrt(0.12) - sqrt(0.02)
    CHECK(kRef.iso_of_one().determinant() ==
          Catch::Approx(std::sqrt(0.12) - std::sqrt(0.02)).margin(1e-12));
    CHECK(kRef.iso_of_one().determinant() == Catch::Approx(0.2050).margin(5e-4));
}

TEST_CASE("site operators") {
    SECTION("uniform measure gives the half-pattern") {
        auto p = ProbMatrix::from_flat({0.25, 0.25, 0.25, 0.25});
        auto ops = site_operators(p);
        Eigen::Matrix4d expect;
        expect << 0.5, 0, 0.5, 0,
                  0, 0.5, 0, 0.5,
                  0.5, 0, 0.5, 0,
                  0, 0.5, 0, 0.5;
        CHECK((ops.O0 - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("sign matrices") {
        Eigen::Vector4d d0(1, 1, -1, -1), d1(1, -1, 1, -1);
        CHECK((SiteOperators::sign0(1) - Eigen::Matrix4d(d0.asDiagonal())).cwiseAbs().maxCoeff() ==
              0.0);
        CHECK((SiteOperators::sign1(1) - Eigen::Matrix4d(d1.asDiagonal())).cwiseAbs().maxCoeff() ==
              0.0);
        CHECK((SiteOperators::sign0(1) * SiteOperators::sign0(1) -
               Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("symmetry and commutation") {
        Sampler rng(7);
        for (int i = 0; i < 20; ++i) {
            auto p = sample_p(rng);
            auto ops = site_operators(p);
            CHECK((ops.O0 - ops.O0.transpose()).cwiseAbs().maxCoeff() < 1e-14);
            CHECK((ops.O1 - ops.O1.transpose()).cwiseAbs().maxCoeff() < 1e-14);
            CHECK((ops.O0 * ops.O1 - ops.O1 * ops.O0).cwiseAbs().maxCoeff() < 1e-13);
        }
    }
    SECTION("vanishing entries are rejected when quasi-invariance is demanded") {
        auto p = ProbMatrix::from_flat({1.0, 0.0, 0.0, 0.0});
        CHECK_THROWS_WITH(site_operators(p), Catch::Matchers::ContainsSubstring("quasi-invariant"));
    }
}

TEST_CASE("matrix algebra identification") {
    SECTION("uniform left form") {
        auto rep = iso_and_lr(ProbMatrix::from_flat({0.25, 0.25, 0.25, 0.25}));
        Eigen::Matrix2d expect;
        expect << 0.5, 0.5, 0.5, 0.5;
        CHECK((rep.left_form - expect).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(rep.max_residual <= 1e-12);
    }
    SECTION("identities hold exactly for random measures") {
        Sampler rng(11);
        for (int i = 0; i < 20; ++i) CHECK(iso_and_lr(sample_p(rng)).max_residual <= 1e-12);
    }
    SECTION("iso of the constant function") {
        auto rep = iso_and_lr(kRef);
        CHECK(rep.iso_of_one(0, 0) == Catch::Approx(std::sqrt(0.4)));
        CHECK(rep.iso_of_one(1, 1) == Catch::Approx(std::sqrt(0.3)));
    }
}

TEST_CASE("representation structure") {
    TypeIIILab lab(kRef, 3);
    Sampler rng(13);
    SECTION("identity acts as identity") {
        Eigen::VectorXd v = lab.one();
        auto w = lab.apply_pair({WreathElement::identity(z2()), WreathElement::identity(z2())}, v);
        CHECK((w - v).norm() < 1e-14);
    }
    SECTION("gamma action is the stated diagonal") {
        GammaTuple t;
        t.set(2, 1, z2());
        WreathElement g(z2(), {}, t);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(lab.dim());
        for (long x = 0; x < lab.dim(); ++x) {
            v.setZero();
            v(x) = 1.0;
            auto w = lab.apply_left(g, v);
            int x0 = lab.digit(x, 2) >> 1;
            CHECK(w(x) == (x0 ? -1.0 : 1.0));
        }
    }
    SECTION("unitary homomorphism on sampled pairs") {
        for (int i = 0; i < 25; ++i) {
            GPair a{rng.element(z2(), 3, 2), rng.element(z2(), 3, 2)};
            GPair b{rng.element(z2(), 3, 2), rng.element(z2(), 3, 2)};
            Eigen::VectorXd v = Eigen::VectorXd::Random(lab.dim());
            auto w1 = lab.apply_pair(a, lab.apply_pair(b, v));
            auto w2 = lab.apply_pair({multiply(a.first, b.first), multiply(a.second, b.second)}, v);
            CHECK((w1 - w2).norm() < 1e-10);
            CHECK(lab.apply_pair(a, v).norm() == Catch::Approx(v.norm()).margin(1e-10));
        }
    }
    SECTION("left and right factors commute") {
        for (int i = 0; i < 20; ++i) {
            auto g = rng.element(z2(), 3, 2);
            auto h = rng.element(z2(), 3, 2);
            Eigen::VectorXd v = Eigen::VectorXd::Random(lab.dim());
            auto w1 = lab.apply_left(g, lab.apply_right(h, v));
            auto w2 = lab.apply_right(h, lab.apply_left(g, v));
            CHECK((w1 - w2).norm() < 1e-12);
        }
    }
}

TEST_CASE("cesaro averages approach the site operator") {
    TypeIIILab lab(kRef, 8);
    Eigen::VectorXd v = lab.one();
    double g4 = lab.cesaro_site_gap(2, 4, v);
    double g8 = lab.cesaro_site_gap(2, 8, v);
    CHECK(g8 < g4);
    Sampler rng(17);
    Eigen::VectorXd r(lab.dim());
    for (long i = 0; i < lab.dim(); ++i) r(i) = rng.unit() - 0.5;
    r.normalize();
    CHECK(lab.cesaro_site_gap(2, 8, r) < lab.cesaro_site_gap(2, 4, r));
}

TEST_CASE("cyclic and separating verdicts follow the determinant") {
    SECTION("reference measure fills the space at n = 2") {
        auto rep = cyclic_separating_check(kRef, 2);
        CHECK(rep.full_dim == 16);
        CHECK(rep.left_span == 16);
        CHECK(rep.right_span == 16);
        CHECK(rep.cyclic);
    }
    SECTION("uniform measure is degenerate") {
        auto rep = cyclic_separating_check(ProbMatrix::from_flat({0.25, 0.25, 0.25, 0.25}), 1);
        CHECK(rep.full_dim == 4);
        CHECK(rep.left_span < 4);
        CHECK_FALSE(rep.cyclic);
    }
    SECTION("verdict matches det != 0 on random measures") {
        Sampler rng(19);
        for (int i = 0; i < 20; ++i) {
            auto p = sample_p(rng);
            for (int n = 1; n <= 2; ++n) {
                auto rep = cyclic_separating_check(p, n);
                CHECK(rep.cyclic == (std::abs(p.det()) > 1e-9));
            }
        }
        // engineered singular but strictly positive measure
        auto p0 = ProbMatrix::from_flat({0.3, 0.3, 0.2, 0.2});
        CHECK(std::abs(p0.det()) < 1e-12);
        CHECK_FALSE(cyclic_separating_check(p0, 1).cyclic);
    }
}

TEST_CASE("modular operator") {
    SECTION("fixes the cyclic vector and verifies the closed form") {
        for (int n = 1; n <= 3; ++n) {
            auto rep = modular_operator(kRef, n);
            CHECK(rep.fixes_xi < 1e-10);
            CHECK(rep.closed_form_residual < 1e-10);
            CHECK(rep.inverse_residual < 1e-8);
        }
    }
    SECTION("two-route agreement at n = 1 for a diagonal observable") {
        auto rep = modular_operator(kRef, 1);
        Eigen::Matrix2d M = kRef.iso_of_one();
        Eigen::Matrix2d K = M * M.transpose();
        Eigen::Matrix2d a;
        a << 1, 0, 0, -1;
        // Delta(a xi) against K a K^{-1} xi, coordinates in the 4-dim site space
        Eigen::Vector4d axi, expect;
        Eigen::Matrix2d am = a * M, km = K * a * K.inverse() * M;
        axi << am(0, 0), am(0, 1), am(1, 0), am(1, 1);
        expect << km(0, 0), km(0, 1), km(1, 0), km(1, 1);
        CHECK((rep.delta * axi - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("delta is positive and nontrivial for a skew measure") {
        auto rep = modular_operator(kRef, 2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.delta);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK_FALSE(rep.tracial);
        CHECK(rep.identity_gap > 1e-3);
        // strictly positive 2x2 measures always have off-diagonal O-form mass,
        // so the tracial branch cannot fire; the flag still guards the check
        if (rep.tracial) CHECK(rep.identity_gap < 1e-10);
    }
    SECTION("degenerate determinant is rejected") {
        CHECK_THROWS_WITH(modular_operator(ProbMatrix::from_flat({0.25, 0.25, 0.25, 0.25}), 1),
                          Catch::Matchers::ContainsSubstring("separating"));
    }
}

TEST_CASE("permutation-centrality of the state") {
    SECTION("identity permutation gives zero residual") {
        auto g = parse_element("(1 2)[1:g]", z2());
        CHECK(kms_trace_check(kRef, 3, {}, g) == 0.0);
    }
    SECTION("worked example") {
        auto g = parse_element("(2 3)[1:g]", z2());
        CHECK(kms_trace_check(kRef, 3, Permutation::transposition(1, 2), g) <= 1e-12);
    }
    SECTION("random permutation moves") {
        Sampler rng(23);
        for (int i = 0; i < 25; ++i) {
            auto g = rng.element(z2(), 3, 2);
            auto s = rng.permutation(3, 3);
            CHECK(kms_trace_check(kRef, 3, s, g) <= 1e-12);
        }
    }
    SECTION("full centrality fails: gamma moves break the trace property") {
        auto w = centrality_witness(kRef, 3, z2());
        REQUIRE(w.has_value());
        CHECK(w->gap > 1e-3);
    }
}
