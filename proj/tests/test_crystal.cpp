#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fkm;
using fkm_test::brute_force_has_fixed_point;

namespace {

// exponent of -1 over the factor's distinguished unit
int minus_one_exp(const TorusFactor& f) { return static_cast<int>(f.units.order()) / 2; }

// Hantzsche-Wendt style holonomy: g1 = (1,-1,-1), g2 = (-1,1,-1).
DiagonalAction hw_action(TorusSpec T) {
    std::vector<std::vector<std::vector<int>>> assign{
        {{0}, {minus_one_exp(T.factors[1])}, {minus_one_exp(T.factors[2])}},
        {{minus_one_exp(T.factors[0])}, {0}, {minus_one_exp(T.factors[2])}},
    };
    return DiagonalAction(std::move(T), AbstractAbelianGroup({2, 2}), assign);
}

DiagonalAction fourfold_action() {
    auto T = make_torus({make_eisenstein_factor(), make_eisenstein_factor(), make_eisenstein_factor(),
                         make_eisenstein_factor()});
    return DiagonalAction(std::move(T), AbstractAbelianGroup({3, 3}),
                          {{{0}, {4}, {4}, {4}}, {{4}, {0}, {4}, {2}}});
}

TranslationCocycle hw_cocycle(const DiagonalAction& act, const IntVector& a, const IntVector& b,
                              const IntVector& c) {
    IntVector z1{a[0], a[1], 0, 0, 0, 0};
    IntVector z2{0, 0, b[0], b[1], c[0], c[1]};
    return complete_cocycle(act, Int(2), {z1, z2});
}

}  // namespace

TEST_CASE("diagonal action validation") {
    SECTION("exponent out of range") {
        auto T = make_torus({make_gauss_factor()});
        REQUIRE_THROWS_AS(DiagonalAction(T, AbstractAbelianGroup({2}), {{{7}}}), SemanticError);
    }
    SECTION("unit order incompatible with the generator order") {
        auto T = make_torus({make_eisenstein_factor()});
        // order-2 generator acting by a unit of order 6
        REQUIRE_THROWS_AS(DiagonalAction(T, AbstractAbelianGroup({2}), {{{1}}}), SemanticError);
    }
    SECTION("unfaithful assignment") {
        auto T = make_torus({make_generic_factor()});
        REQUIRE_THROWS_AS(DiagonalAction(T, AbstractAbelianGroup({2, 2}), {{{1}}, {{1}}}), SemanticError);
    }
    SECTION("fourfold holonomy matrices") {
        auto act = fourfold_action();
        REQUIRE(act.group().order() == 9);
        const IntMatrix xi = fkm_test::xi_matrix();
        std::size_t g1 = act.group().index_of({1, 0});
        REQUIRE(act.block(g1, 0).is_identity());
        REQUIRE(act.block(g1, 1) == xi);
        std::size_t g2 = act.group().index_of({0, 1});
        REQUIRE(act.block(g2, 3) == xi * xi);
        REQUIRE(act.rho(g1) == IntMatrix::block_diagonal({IntMatrix::identity(2), xi, xi, xi}));
    }
}

TEST_CASE("characters of diagonal actions") {
    auto act = fourfold_action();
    auto chi = act.character(1);
    REQUIRE(chi);
    std::size_t g1 = act.group().index_of({1, 0});
    REQUIRE((*chi)[g1] == 4);  // xi = (-xi)^4
}

TEST_CASE("element fixed point criterion") {
    SECTION("zero translation always has the origin fixed") {
        REQUIRE(element_has_fixed_point(fkm_test::xi_matrix(), TorsionPoint::zero(3, 2)));
        REQUIRE(element_has_fixed_point(-IntMatrix::identity(2), TorsionPoint::zero(2, 2)));
    }
    SECTION("invertible rho - 1 absorbs any translation") {
        REQUIRE(element_has_fixed_point(-IntMatrix::identity(2), TorsionPoint(2, {1, 0})));
        REQUIRE(element_has_fixed_point(-IntMatrix::identity(2), TorsionPoint(4, {1, 3})));
    }
    SECTION("half period on a trivially acted factor blocks fixed points") {
        IntMatrix rho = IntMatrix::block_diagonal(
            {IntMatrix::identity(2), -IntMatrix::identity(2), -IntMatrix::identity(2)});
        REQUIRE_FALSE(element_has_fixed_point(rho, TorsionPoint(2, {1, 0, 0, 0, 0, 0})));
        REQUIRE(element_has_fixed_point(rho, TorsionPoint(2, {0, 0, 1, 1, 0, 1})));
    }
}

TEST_CASE("cocycle completion and validation") {
    auto act = hw_action(make_torus({make_generic_factor(), make_generic_factor(), make_generic_factor()}));
    SECTION("a valid table completes and satisfies the identity") {
        auto z = hw_cocycle(act, {1, 0}, {1, 0}, {1, 0});
        REQUIRE_FALSE(cocycle_defect(act, z));
        REQUIRE(z.table[0] == IntVector(6, Int(0)));
    }
    SECTION("an inconsistent table names the offending pair") {
        // quarter period on the first factor where g1 acts trivially: 2*z != 0
        IntVector z1{1, 0, 0, 0, 0, 0};
        IntVector z2{0, 0, 1, 0, 0, 0};
        try {
            complete_cocycle(act, Int(4), {z1, z2});
            FAIL("expected SemanticError");
        } catch (const SemanticError& e) {
            REQUIRE(std::string(e.what()).find("(g,h)") != std::string::npos);
        }
    }
}

TEST_CASE("freeness") {
    auto T = make_torus({make_generic_factor(), make_generic_factor(), make_generic_factor()});
    auto act = hw_action(T);
    SECTION("nonzero half periods on the diagonal give a free action") {
        REQUIRE(is_free_action(act, hw_cocycle(act, {1, 0}, {0, 1}, {1, 1})));
    }
    SECTION("the zero cocycle is never free for nontrivial holonomy") {
        auto z = hw_cocycle(act, {0, 0}, {0, 0}, {0, 0});
        REQUIRE_FALSE(is_free_action(act, z));
        REQUIRE(first_fixed_element(act, z).value() >= 1);
    }
    SECTION("vanishing third value breaks freeness through the product element") {
        REQUIRE_FALSE(is_free_action(act, hw_cocycle(act, {1, 0}, {1, 0}, {0, 0})));
    }
    SECTION("normalized table freeness over all 64 two-torsion choices") {
        int free_count = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) {
                    IntVector va{a / 2, a % 2}, vb{b / 2, b % 2}, vc{c / 2, c % 2};
                    bool free = is_free_action(act, hw_cocycle(act, va, vb, vc));
                    bool expect = a != 0 && b != 0 && c != 0;
                    REQUIRE(free == expect);
                    if (free) ++free_count;
                }
        REQUIRE(free_count == 27);
    }
    SECTION("general table freeness matches the translation criterion over 4^3 * 4^3 assignments") {
        // full (unnormalized) generator values: z(g1) = (a1,a2,a3), z(g2) = (b1,b2,b3)
        auto bits = [](int v) { return IntVector{v / 2, v % 2}; };
        for (int a1 = 0; a1 < 4; ++a1)
            for (int a2 = 0; a2 < 4; ++a2)
                for (int a3 = 0; a3 < 4; ++a3)
                    for (int b1 = 0; b1 < 4; ++b1)
                        for (int b2 = 0; b2 < 4; ++b2)
                            for (int b3 = 0; b3 < 4; ++b3) {
                                IntVector z1 = bits(a1), z2 = bits(b1);
                                auto pa2 = bits(a2), pa3 = bits(a3), pb2 = bits(b2), pb3 = bits(b3);
                                z1.insert(z1.end(), pa2.begin(), pa2.end());
                                z1.insert(z1.end(), pa3.begin(), pa3.end());
                                z2.insert(z2.end(), pb2.begin(), pb2.end());
                                z2.insert(z2.end(), pb3.begin(), pb3.end());
                                auto z = complete_cocycle(act, Int(2), {z1, z2});
                                bool free = is_free_action(act, z);
                                bool expect = a1 != 0 && b2 != 0 && a3 != b3;
                                REQUIRE(free == expect);
                            }
    }
}

TEST_CASE("freeness agrees with the brute-force search on corpus examples") {
    auto T = make_torus({make_eisenstein_factor(), make_eisenstein_factor(), make_gauss_factor()});
    auto act = hw_action(T);
    std::vector<TranslationCocycle> zs{
        hw_cocycle(act, {1, 0}, {1, 0}, {1, 1}),
        hw_cocycle(act, {1, 0}, {0, 1}, {0, 0}),
        hw_cocycle(act, {0, 0}, {1, 1}, {1, 0}),
    };
    for (const auto& z : zs)
        for (std::size_t e = 1; e < act.group().order(); ++e)
            REQUIRE(element_has_fixed_point(act.rho(e), TorsionPoint(z.modulus, z.table[e])) ==
                    brute_force_has_fixed_point(act, e, z));

    auto act4 = fourfold_action();
    auto z4 = complete_cocycle(act4, Int(3),
                               {IntVector{1, 2, 0, 0, 0, 0, 0, 0}, IntVector{0, 0, 1, 2, 1, 2, 1, 2}});
    for (std::size_t e = 1; e < act4.group().order(); ++e)
        REQUIRE(element_has_fixed_point(act4.rho(e), TorsionPoint(z4.modulus, z4.table[e])) ==
                brute_force_has_fixed_point(act4, e, z4));
}

TEST_CASE("fixed point group") {
    SECTION("fourfold: (Z/3)^4 and Betti number zero") {
        auto fp = fixed_point_group(fourfold_action());
        REQUIRE(fp.betti1 == 0);
        REQUIRE(fp.structure.invariant_factors == std::vector<Int>{3, 3, 3, 3});
        REQUIRE(fp.torsion_order == 81);
    }
    SECTION("Hantzsche-Wendt: (Z/2)^6") {
        auto fp = fixed_point_group(
            hw_action(make_torus({make_generic_factor(), make_generic_factor(), make_generic_factor()})));
        REQUIRE(fp.betti1 == 0);
        REQUIRE(fp.structure.invariant_factors == std::vector<Int>{2, 2, 2, 2, 2, 2});
        REQUIRE(fp.torsion_order == 64);
    }
    SECTION("trivial holonomy leaves the whole torus") {
        auto T = make_torus({make_generic_factor()});
        DiagonalAction act(T, AbstractAbelianGroup({1}), {{{0}}});
        auto fp = fixed_point_group(act);
        REQUIRE(fp.betti1 == 2);
        REQUIRE(fp.structure.invariant_factors.empty());
    }
    SECTION("the Smith count matches direct torsion enumeration") {
        for (auto actp : {fourfold_action(),
                          hw_action(make_torus({make_eisenstein_factor(), make_eisenstein_factor(),
                                                make_gauss_factor()}))}) {
            const Int N = actp.exponent();
            auto fp = fixed_point_group(actp);
            std::size_t count = 0;
            for (const auto& p : torsion_points(actp.torus(), N)) {
                bool fixed = true;
                for (std::size_t k = 0; k < actp.group().rank() && fixed; ++k) {
                    std::size_t g = actp.group().generator_index(k);
                    fixed = vec_mod(actp.rho(g) * p.numerators, N) == p.numerators;
                }
                if (fixed) ++count;
            }
            REQUIRE(Int(count) == fp.torsion_order);
        }
    }
}
