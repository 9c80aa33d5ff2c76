#include "blform/matrix.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace blform;

namespace {

RationalMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, int lo = -5, int hi = 5) {
    std::uniform_int_distribution<int> dist(lo, hi);
    RationalMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

RationalMatrix random_invertible(std::mt19937_64& rng, int n, int lo = -5, int hi = 5) {
    for (;;) {
        RationalMatrix m = random_matrix(rng, n, n, lo, hi);
        if (determinant(m) != 0) return m;
    }
}

} // namespace

TEST_CASE("rref basics") {
    auto [r1, p1] = rref(RationalMatrix::identity(3));
    CHECK(r1 == RationalMatrix::identity(3));
    CHECK(p1 == std::vector<int>{0, 1, 2});

    auto [r2, p2] = rref(RationalMatrix{{1, 2}, {2, 4}});
    CHECK(r2 == RationalMatrix{{1, 2}, {0, 0}});
    CHECK(p2 == std::vector<int>{0});

    RationalMatrix m{{0, 1, 0}, {0, 0, 1}};
    auto [r3, p3] = rref(m);
    CHECK(r3 == m);
    CHECK(p3 == std::vector<int>{1, 2});
}

TEST_CASE("rref is idempotent on random matrices") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 25; ++trial) {
        RationalMatrix m = random_matrix(rng, 3, 4);
        auto [r, p] = rref(m);
        auto [rr, pp] = rref(r);
        CHECK(rr == r);
        CHECK(pp == p);
    }
}

TEST_CASE("rank") {
    CHECK(rank(RationalMatrix::zero(2, 3)) == 0);
    CHECK(rank(RationalMatrix{{1, 5, 0}}) == 1);
    CHECK(rank(RationalMatrix{{0, 1, 0}, {0, 0, 1}}) == 2);
}

TEST_CASE("rank equals rank of transpose") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        RationalMatrix m = random_matrix(rng, 3, 5, -3, 3);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("solve") {
    auto x1 = solve(RationalMatrix::identity(3), RationalMatrix{{1}, {2}, {3}});
    REQUIRE(x1.has_value());
    CHECK(*x1 == RationalMatrix{{1}, {2}, {3}});

    // Free variable zeroed.
    auto x2 = solve(RationalMatrix{{1, 1}, {0, 0}}, RationalMatrix{{1}, {0}});
    REQUIRE(x2.has_value());
    CHECK(*x2 == RationalMatrix{{1}, {0}});

    auto x3 = solve(RationalMatrix{{1, 0}, {0, 0}}, RationalMatrix{{0}, {1}});
    CHECK(!x3.has_value());
}

TEST_CASE("inverse") {
    CHECK(inverse(RationalMatrix::identity(3)) == RationalMatrix::identity(3));

    // B of the explicit alpha = 2 witness.
    RationalMatrix b{{-1, -2, 1}, {1, 1, 0}, {0, 1, 0}};
    CHECK(b * inverse(b) == RationalMatrix::identity(3));

    std::mt19937_64 rng(7);
    RationalMatrix m = random_invertible(rng, 3);
    CHECK(m * inverse(m) == RationalMatrix::identity(3));
    CHECK(inverse(m) * m == RationalMatrix::identity(3));
}

TEST_CASE("inverse throws exactly on rank deficiency") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        RationalMatrix m = random_matrix(rng, 3, 3, -2, 2);
        if (rank(m) < 3) {
            CHECK_THROWS_AS(inverse(m), SingularMatrix);
        } else {
            CHECK(inverse(m) * m == RationalMatrix::identity(3));
        }
    }
}

TEST_CASE("determinant matches cofactor expansion on 2x2") {
    RationalMatrix m{{3, 5}, {2, 7}};
    CHECK(determinant(m) == Rational(11));
    CHECK(determinant(RationalMatrix{{2, 4}, {1, 2}}) == Rational(0));
}

TEST_CASE("nullspace vectors are annihilated") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        RationalMatrix m = random_matrix(rng, 2, 4, -3, 3);
        RationalMatrix n = nullspace(m);
        CHECK(n.cols() + rank(m) == 4);
        if (n.cols() > 0) CHECK((m * n).is_zero());
    }
}

TEST_CASE("rational parsing round trips") {
    CHECK(parse_rational("-7/3") == Rational(-7, 3));
    CHECK(parse_rational("5") == Rational(5));
    CHECK(to_string(Rational(-7, 3)) == "-7/3");
    CHECK(to_string(Rational(4, 2)) == "2");
    CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
}
