#include <catch2/catch_amalgamated.hpp>

#include "wreathlab/group.hpp"
#include "wreathlab/json_io.hpp"

using namespace wreathlab;

TEST_CASE("cyclic 2 table") {
    auto g = make_cyclic(2);
    REQUIRE(g.order() == 2);
    CHECK(g.identity() == 0);
    CHECK(g.mult(0, 1) == 1);
    CHECK(g.mult(1, 1) == 0);
    CHECK(g.inv(1) == 1);
}

TEST_CASE("cyclic 3 inverses") {
    auto g = make_cyclic(3);
    CHECK(g.inv(0) == 0);
    CHECK(g.inv(1) == 2);
    CHECK(g.inv(2) == 1);
}

TEST_CASE("symmetric 3 validates against brute-force composition") {
    auto g = make_symmetric3();
    REQUIRE(g.order() == 6);
    // independent oracle: act on three labeled points
    auto act = [](const std::string& name, int pt) {
        // names encode r^a s^b with r = (0 1 2), s = (0 1)
        int a = 0, b = 0;
        if (name == "r") a = 1;
        else if (name == "r2") a = 2;
        else if (name == "s") b = 1;
        else if (name == "rs") a = 1, b = 1;
        else if (name == "r2s") a = 2, b = 1;
        if (b) pt = pt == 0 ? 1 : pt == 1 ? 0 : 2;
        for (int i = 0; i < a; ++i) pt = (pt + 1) % 3;
        return pt;
    };
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) {
            int z = g.mult(x, y);
            for (int pt = 0; pt < 3; ++pt)
                CHECK(act(g.element_name(z), pt) ==
                      act(g.element_name(x), act(g.element_name(y), pt)));
        }
}

TEST_CASE("build_group rejects broken tables") {
    // non-associative: tweak one entry of the Z3 table
    std::vector<std::vector<int>> t = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    t[2][2] = 0;  // row 2 now repeats 0
    CHECK_THROWS_WITH(GroupTable("bad", t), Catch::Matchers::ContainsSubstring("row 2"));

    // Latin square with no identity row
    std::vector<std::vector<int>> no_id = {{1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    CHECK_THROWS_WITH(GroupTable("noid", no_id), Catch::Matchers::ContainsSubstring("identity"));

    // Latin square with identity but not associative
    std::vector<std::vector<int>> nonassoc = {{0, 1, 2, 3, 4},
                                              {1, 0, 3, 4, 2},
                                              {2, 3, 4, 0, 1},
                                              {3, 4, 1, 2, 0},
                                              {4, 2, 0, 1, 3}};
    CHECK_THROWS_WITH(GroupTable("nonassoc", nonassoc),
                      Catch::Matchers::ContainsSubstring("associative"));
}

TEST_CASE("conjugacy classes") {
    SECTION("Z2 has two singleton classes") {
        auto g = make_cyclic(2);
        auto c = conjugacy_classes(g);
        CHECK(c.count() == 2);
    }
    SECTION("S3 has classes of sizes 1, 3, 2") {
        auto g = make_symmetric3();
        auto c = conjugacy_classes(g);
        REQUIRE(c.count() == 3);
        std::vector<int> sizes(3, 0);
        for (int x = 0; x < 6; ++x) ++sizes[c.class_of[x]];
        std::sort(sizes.begin(), sizes.end());
        CHECK(sizes == std::vector<int>{1, 2, 3});
        // class ids ordered by smallest member; identity first
        CHECK(c.class_of[g.identity()] == 0);
        CHECK(c.representatives[0] == g.identity());
    }
    SECTION("klein4 is abelian: four singleton classes") {
        auto c = conjugacy_classes(make_klein4());
        CHECK(c.count() == 4);
    }
    SECTION("classes are conjugation-invariant") {
        auto g = make_symmetric3();
        auto c = conjugacy_classes(g);
        for (int x = 0; x < 6; ++x)
            for (int h = 0; h < 6; ++h)
                CHECK(c.class_of[x] == c.class_of[g.mult(g.mult(h, x), g.inv(h))]);
    }
}

TEST_CASE("characters") {
    auto g = make_symmetric3();
    const MatrixRep* triv = g.irrep_by_name("trivial");
    const MatrixRep* sgn = g.irrep_by_name("sign");
    const MatrixRep* std2 = g.irrep_by_name("standard");
    REQUIRE(triv);
    REQUIRE(sgn);
    REQUIRE(std2);
    auto chi_t = character_of(*triv);
    auto chi_s = character_of(*sgn);
    auto chi_2 = character_of(*std2);
    for (int x = 0; x < 6; ++x) CHECK(chi_t[x] == Complex(1.0));
    CHECK(chi_s[g.element_by_name("s").value()].real() == Catch::Approx(-1.0));
    CHECK(std::abs(chi_2[g.identity()] - Complex(2.0)) < 1e-12);
    // class function property
    auto c = conjugacy_classes(g);
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y)
            if (c.class_of[x] == c.class_of[y]) CHECK(std::abs(chi_2[x] - chi_2[y]) < 1e-12);
}

TEST_CASE("validate_rep flags reducible sums") {
    auto g = make_cyclic(2);
    const auto& triv = *g.irrep_by_name("trivial");
    const auto& sgn = *g.irrep_by_name("sign");
    CHECK(validate_rep(g, triv).irreducible);
    CHECK(validate_rep(g, sgn).chi_inner == Catch::Approx(1.0));
    MatrixRep sum{"triv+sign", 2, {}};
    for (int x = 0; x < 2; ++x) {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = triv.images[x](0, 0);
        m(1, 1) = sgn.images[x](0, 0);
        sum.images.push_back(m);
    }
    auto v = validate_rep(g, sum);
    CHECK(v.ok());
    CHECK(v.chi_inner == Catch::Approx(2.0));
    CHECK_FALSE(v.irreducible);
}

TEST_CASE("dual groups") {
    SECTION("Z2") {
        auto g = make_cyclic(2);
        auto duals = dual_group(g);
        REQUIRE(duals.size() == 2);
        bool found_sign = false;
        for (const auto& d : duals)
            if (std::abs(d.values[1] - Complex(-1.0)) < 1e-12) found_sign = true;
        CHECK(found_sign);
    }
    SECTION("Z3 characters take cube-root values") {
        auto g = make_cyclic(3);
        auto duals = dual_group(g);
        REQUIRE(duals.size() == 3);
        for (const auto& d : duals) {
            Complex z = d.values[1];
            CHECK(std::abs(std::pow(z, 3) - Complex(1.0)) < 1e-10);
            for (int x = 0; x < 3; ++x)
                for (int y = 0; y < 3; ++y)
                    CHECK(std::abs(d.values[g.mult(x, y)] - d.values[x] * d.values[y]) < 1e-12);
        }
    }
    SECTION("klein4: four real characters, orthonormal") {
        auto g = make_klein4();
        auto duals = dual_group(g);
        REQUIRE(duals.size() == 4);
        for (const auto& d : duals)
            for (auto v : d.values) CHECK(std::abs(v.imag()) < 1e-12);
        for (size_t a = 0; a < 4; ++a)
            for (size_t b = 0; b < 4; ++b) {
                Complex ip = 0.0;
                for (int x = 0; x < 4; ++x) ip += duals[a].values[x] * std::conj(duals[b].values[x]);
                ip /= 4.0;
                CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-10);
            }
    }
    SECTION("non-abelian input is rejected") {
        CHECK_THROWS(dual_group(make_symmetric3()));
    }
}

TEST_CASE("dual characters orthonormal for every built-in abelian group") {
    for (int n : {2, 3, 4, 5, 6, 8, 12}) {
        auto g = make_cyclic(n);
        auto duals = dual_group(g);
        REQUIRE(static_cast<int>(duals.size()) == n);
        for (size_t a = 0; a < duals.size(); ++a)
            for (size_t b = 0; b <= a; ++b) {
                Complex ip = 0.0;
                for (int x = 0; x < n; ++x) ip += duals[a].values[x] * std::conj(duals[b].values[x]);
                ip /= static_cast<double>(n);
                CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-10);
            }
    }
}

TEST_CASE("group json round-trip") {
    auto g = make_symmetric3();
    json j = group_to_json(g);
    auto g2 = group_from_json(j);
    CHECK(g2.order() == g.order());
    CHECK(g2.identity() == g.identity());
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) CHECK(g2.mult(x, y) == g.mult(x, y));
    REQUIRE(g2.irreps().size() == g.irreps().size());
    CHECK(g2.irrep_by_name("standard") != nullptr);
}

TEST_CASE("custom group file loads end to end") {
    auto g = make_klein4();
    std::string path = "klein4_export_test.json";
    {
        std::ofstream out(path);
        out << group_to_json(g).dump(2);
    }
    auto loaded = load_group(path);
    CHECK(loaded.order() == 4);
    CHECK(loaded.is_abelian());
    REQUIRE(loaded.irrep_by_name("chi11") != nullptr);
    // broken files are reported
    {
        std::ofstream out(path);
        out << "{\"name\": \"bad\", \"mult\": [[0, 1], [1, 1]]}";
    }
    CHECK_THROWS(load_group(path));
    std::remove(path.c_str());
}
