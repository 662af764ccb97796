#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fkm;

TEST_CASE("factor presets") {
    auto gen = make_generic_factor();
    REQUIRE(gen.rank == 2);
    REQUIRE(gen.units.order() == 2);
    auto gau = make_gauss_factor();
    REQUIRE(gau.units.order() == 4);
    auto eis = make_eisenstein_factor();
    REQUIRE(eis.units.order() == 6);
    for (const auto& f : {gen, gau, eis}) REQUIRE(f.units.contains(-IntMatrix::identity(2)));
}

TEST_CASE("make_torus") {
    SECTION("three hexagonal factors give rank 6") {
        auto T = make_torus({make_eisenstein_factor(), make_eisenstein_factor(), make_eisenstein_factor()});
        REQUIRE(T.total_rank() == 6);
        REQUIRE(T.factors[0].iso_tag == T.factors[2].iso_tag);
    }
    SECTION("the mixed threefold torus") {
        auto T = make_torus({make_eisenstein_factor(), make_eisenstein_factor(), make_gauss_factor()});
        REQUIRE(T.total_rank() == 6);
        REQUIRE(T.factors[0].iso_tag == T.factors[1].iso_tag);
        REQUIRE(T.factors[0].iso_tag != T.factors[2].iso_tag);
    }
    SECTION("generic factors are pairwise distinct by default") {
        auto T = make_torus({make_generic_factor(), make_generic_factor()});
        REQUIRE(T.factors[0].iso_tag != T.factors[1].iso_tag);
    }
    SECTION("unit of infinite order is rejected") {
        REQUIRE_THROWS_AS(make_custom_factor(2, {IntMatrix{{1, 1}, {0, 1}}}), SemanticError);
    }
    SECTION("odd rank is rejected") {
        REQUIRE_THROWS_AS(make_custom_factor(3, {-IntMatrix::identity(3)}), SemanticError);
    }
    SECTION("custom factor must contain -1") {
        // the trivial group {I} alone
        REQUIRE_THROWS_AS(make_custom_factor(2, {IntMatrix::identity(2)}), SemanticError);
    }
}

TEST_CASE("torsion point enumeration") {
    auto E = make_torus({make_generic_factor()});
    REQUIRE(torsion_points(E, Int(2)).size() == 4);
    REQUIRE(torsion_points(E, Int(3)).size() == 9);
    auto T3 = make_torus({make_generic_factor(), make_generic_factor(), make_generic_factor()});
    REQUIRE(torsion_points(T3, Int(2)).size() == 64);
}

TEST_CASE("fixed torsion under a unit") {
    SECTION("xi on 3-torsion: exactly the three expected points") {
        auto pts = fixed_torsion_under_unit(fkm_test::xi_matrix(), Int(3));
        REQUIRE(pts.size() == 3);
        std::vector<IntVector> nums;
        for (const auto& p : pts) nums.push_back(p.numerators);
        REQUIRE(nums == std::vector<IntVector>{{0, 0}, {1, 2}, {2, 1}});
    }
    SECTION("-1 fixes all 2-torsion") {
        REQUIRE(fixed_torsion_under_unit(-IntMatrix::identity(2), Int(2)).size() == 4);
    }
    SECTION("i fixes two 2-torsion points") {
        auto pts = fixed_torsion_under_unit(gauss_rotation(), Int(2));
        REQUIRE(pts.size() == 2);
        REQUIRE(pts[0].numerators == IntVector{0, 0});
        REQUIRE(pts[1].numerators == IntVector{1, 1});
    }
    SECTION("xi fixes only zero on 2-torsion") {
        REQUIRE(fixed_torsion_under_unit(fkm_test::xi_matrix(), Int(2)).size() == 1);
    }
    SECTION("fixed sets are subgroups with order dividing the torsion count") {
        for (const auto& u : {fkm_test::xi_matrix(), -fkm_test::xi_matrix(), gauss_rotation()}) {
            for (int m : {2, 3, 4, 6}) {
                auto pts = fixed_torsion_under_unit(u, m);
                std::set<TorsionPoint> s(pts.begin(), pts.end());
                REQUIRE(s.count(TorsionPoint::zero(m, 2)) == 1);
                for (const auto& a : pts)
                    for (const auto& b : pts) REQUIRE(s.count(a.added(b)) == 1);
                REQUIRE(Int(m * m) % Int(pts.size()) == 0);
            }
        }
    }
}

TEST_CASE("units act on torsion points compatibly with the group law") {
    auto eis = make_eisenstein_factor();
    const Int m = 6;
    for (std::size_t i = 0; i < eis.units.order(); ++i)
        for (std::size_t j = 0; j < eis.units.order(); ++j) {
            const IntMatrix prod = eis.units.element(eis.units.mul(static_cast<int>(i), static_cast<int>(j)));
            for (const auto& p : fixed_torsion_under_unit(IntMatrix::identity(2), m)) {  // all of E[m]
                auto lhs = p.transformed(eis.units.element(j)).transformed(eis.units.element(i));
                auto rhs = p.transformed(prod);
                REQUIRE(lhs == rhs);
            }
        }
}
