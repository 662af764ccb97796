#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fkm;
using fkm_test::random_matrix;
using fkm_test::random_unimodular;

namespace {

void check_snf_identities(const IntMatrix& m, const SmithNormalForm& s) {
    REQUIRE(s.U * m * s.V == s.D);
    REQUIRE(abs_int(determinant(s.U)) == 1);
    REQUIRE(abs_int(determinant(s.V)) == 1);
    auto d = s.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        REQUIRE(d[i] >= 0);
        if (d[i] != 0) REQUIRE(d[i + 1] % d[i] == 0);
        if (d[i] == 0) REQUIRE(d[i + 1] == 0);
    }
}

}  // namespace

TEST_CASE("smith normal form on pinned inputs") {
    SECTION("identity is already in normal form") {
        auto s = smith_normal_form(IntMatrix::identity(2));
        REQUIRE(s.D == IntMatrix::identity(2));
        check_snf_identities(IntMatrix::identity(2), s);
    }
    SECTION("entry gcd 2, determinant 8 gives diag(2,4)") {
        IntMatrix m{{2, 4}, {6, 8}};
        auto s = smith_normal_form(m);
        REQUIRE(s.D == IntMatrix{{2, 0}, {0, 4}});
        check_snf_identities(m, s);
    }
    SECTION("xi - 1 on the hexagonal lattice gives diag(1,3)") {
        IntMatrix m = fkm_test::xi_matrix() - IntMatrix::identity(2);
        REQUIRE(m == IntMatrix{{-1, -1}, {1, -2}});
        auto s = smith_normal_form(m);
        REQUIRE(s.D == IntMatrix{{1, 0}, {0, 3}});
        check_snf_identities(m, s);
    }
    SECTION("empty shapes") {
        for (auto [r, c] : {std::pair<std::size_t, std::size_t>{0, 3}, {3, 0}, {0, 0}}) {
            IntMatrix m(r, c);
            auto s = smith_normal_form(m);
            check_snf_identities(m, s);
            REQUIRE(s.rank() == 0);
        }
    }
    SECTION("deterministic output") {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 20; ++t) {
            IntMatrix m = random_matrix(rng, 3, 4, -9, 9);
            auto a = smith_normal_form(m), b = smith_normal_form(m);
            REQUIRE(a.U == b.U);
            REQUIRE(a.D == b.D);
            REQUIRE(a.V == b.V);
        }
    }
}

TEST_CASE("smith normal form identities on random matrices") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 300; ++t) {
        IntMatrix m = random_matrix(rng, 4, 6, -9, 9);
        check_snf_identities(m, smith_normal_form(m));
    }
    for (int t = 0; t < 100; ++t) {
        IntMatrix m = random_matrix(rng, 5, 3, -20, 20);
        check_snf_identities(m, smith_normal_form(m));
    }
}

TEST_CASE("kernel lattice spans the integer kernel") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        IntMatrix m = random_matrix(rng, 3, 5, -4, 4);
        IntMatrix k = kernel_lattice(m);
        REQUIRE((m * k).is_zero());
        // rank check against the Smith form
        auto s = smith_normal_form(m);
        REQUIRE(k.cols() == m.cols() - s.rank());
    }
}

TEST_CASE("solve_linear over the integers") {
    SECTION("identity system") {
        IntVector b{5, 7};
        auto sol = solve_linear(IntMatrix::identity(2), b, Int(0));
        REQUIRE(sol.solvable);
        REQUIRE(sol.particular == IntVector{5, 7});
        REQUIRE(sol.kernel.empty());
    }
    SECTION("substitution reproduces the right-hand side") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 1000; ++t) {
            std::uniform_int_distribution<std::size_t> dim(1, 4);
            std::size_t r = dim(rng), c = dim(rng);
            IntMatrix a = random_matrix(rng, r, c, -4, 4);
            IntMatrix xsrc = random_matrix(rng, c, 1, -5, 5);
            IntVector x(c);
            for (std::size_t i = 0; i < c; ++i) x[i] = xsrc(i, 0);
            IntVector b = a * x;
            auto sol = solve_linear(a, b, Int(0));
            REQUIRE(sol.solvable);
            REQUIRE(a * sol.particular == b);
            for (const auto& k : sol.kernel) REQUIRE(vec_is_zero(a * k));
        }
    }
    SECTION("rational rhs with no integral solution") {
        RatVector b{Rat(1) / Rat(2), Rat(0)};
        auto sol = solve_linear(IntMatrix::identity(2), b, Int(0));
        REQUIRE_FALSE(sol.solvable);
    }
}

TEST_CASE("solve_linear modulo m") {
    IntMatrix a = fkm_test::xi_matrix() - IntMatrix::identity(2);
    SECTION("three 3-torsion points fixed by xi") {
        auto sol = solve_linear(a, IntVector{0, 0}, Int(3));
        REQUIRE(sol.solvable);
        auto all = sol.enumerate_all();
        REQUIRE(all.size() == 3);
        REQUIRE(all == std::vector<IntVector>{{0, 0}, {1, 2}, {2, 1}});
    }
    SECTION("(1,0) is not in the image mod 3") {
        auto sol = solve_linear(a, IntVector{1, 0}, Int(3));
        REQUIRE_FALSE(sol.solvable);
    }
    SECTION("substitution mod m on random systems") {
        std::mt19937_64 rng(23);
        for (int t = 0; t < 1000; ++t) {
            std::uniform_int_distribution<std::size_t> dim(1, 4);
            std::uniform_int_distribution<int> mods(2, 9);
            std::size_t r = dim(rng), c = dim(rng);
            Int m = mods(rng);
            IntMatrix a2 = random_matrix(rng, r, c, -4, 4);
            IntMatrix xsrc = random_matrix(rng, c, 1, 0, 8);
            IntVector x(c);
            for (std::size_t i = 0; i < c; ++i) x[i] = xsrc(i, 0);
            IntVector b = vec_mod(a2 * x, m);
            auto sol = solve_linear(a2, b, m);
            REQUIRE(sol.solvable);
            REQUIRE(vec_mod(a2 * sol.particular, m) == b);
            for (const auto& k : sol.kernel) REQUIRE(vec_is_zero(vec_mod(a2 * k, m)));
        }
    }
}

TEST_CASE("cokernel structure") {
    SECTION("zero matrix is all free") {
        auto s = cokernel_structure(IntMatrix(2, 2));
        REQUIRE(s.invariant_factors.empty());
        REQUIRE(s.free_rank == 2);
        REQUIRE_FALSE(s.order());
    }
    SECTION("already diagonal") {
        auto s = cokernel_structure(IntMatrix{{2, 0}, {0, 4}});
        REQUIRE(s.invariant_factors == std::vector<Int>{2, 4});
        REQUIRE(s.free_rank == 0);
        REQUIRE(*s.order() == 8);
    }
    SECTION("xi - 1 has cokernel Z/3") {
        auto s = cokernel_structure(fkm_test::xi_matrix() - IntMatrix::identity(2));
        REQUIRE(s.invariant_factors == std::vector<Int>{3});
        REQUIRE(s.free_rank == 0);
    }
    SECTION("invariant under unimodular row/column changes") {
        std::mt19937_64 rng(31);
        for (int t = 0; t < 200; ++t) {
            IntMatrix m = random_matrix(rng, 3, 4, -6, 6);
            IntMatrix l = random_unimodular(rng, 3);
            IntMatrix r = random_unimodular(rng, 4);
            REQUIRE(cokernel_structure(l * m * r) == cokernel_structure(m));
        }
    }
}

TEST_CASE("abelian structure merging") {
    auto merged = merge_cyclic_orders({Int(2), Int(4), Int(3)});
    REQUIRE(merged.invariant_factors == std::vector<Int>{2, 12});
    auto merged2 = merge_cyclic_orders({Int(6), Int(4)});
    REQUIRE(merged2.invariant_factors == std::vector<Int>{2, 12});
    REQUIRE(merge_cyclic_orders({}).is_trivial());
}
