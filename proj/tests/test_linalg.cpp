#include <doctest.h>

#include <climits>

#include "support.hpp"
#include "vbg/generate.hpp"

using namespace vt;

TEST_CASE("rational scalars stay exact past 64 bits") {
    Scalar big(LONG_MAX);
    Scalar sq = big * big;
    CHECK(sq / big == big);
    CHECK((sq - sq).is_zero());
    CHECK(Scalar::rational(2, 4) == Scalar::rational(1, 2));
    CHECK(Scalar::rational(1, 3) + Scalar::rational(1, 6) == Scalar::rational(1, 2));
    CHECK(Scalar::parse("-10/4", Q).to_string() == "-5/2");
}

TEST_CASE("prime field arithmetic") {
    Scalar a = Scalar::residue(2, 3);
    CHECK(a * a == Scalar::residue(1, 3));
    CHECK(a.inverse() == a);
    CHECK(Scalar(-1).in(F2) == Scalar(1).in(F2));
    CHECK(Scalar::rational(1, 2).in(F3) == Scalar::residue(2, 3));
    CHECK_THROWS_AS(Scalar::rational(1, 2).in(F2), Error);
    CHECK_THROWS_AS(Field::prime(4), Error);
    CHECK(Field::parse("fp:7").p == 7);
}

TEST_CASE("rank, kernel and solve") {
    Matrix a = mat({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(rank(a) == 2);
    Matrix k = kernel(a);
    CHECK(k.cols() == 1);
    CHECK((a * k).is_zero());

    Matrix b = mat({{2, 1}, {1, 1}});
    auto inv = inverse(b);
    REQUIRE(inv);
    CHECK((b * *inv).is_identity());
    CHECK_FALSE(inverse(a).has_value());

    Matrix rhs = a * mat({{1}, {1}, {1}});
    auto x = solve(a, rhs);
    REQUIRE(x);
    CHECK(a * *x == rhs);
    CHECK_FALSE(solve(a, mat({{1}, {0}, {0}})).has_value());
}

TEST_CASE("one-sided inverses and complements") {
    Rng rng(1);
    for (Field f : corpus_fields()) {
        Matrix s = random_matrix(rng, 2, 4, f);
        if (rank(s) < 2) continue;
        CHECK((s * right_inverse(s)).is_identity());
        CHECK((left_inverse(s.transpose()) * s.transpose()).is_identity());
        Matrix k = kernel(s);
        Matrix c = complement(k);
        CHECK(rank(Matrix::hstack(k, c)) == 4);
    }
}

TEST_CASE("canonical bases do not depend on the spanning set") {
    Rng rng(2);
    Matrix a = random_matrix(rng, 4, 2, F3);
    Matrix p = random_invertible(rng, 2, F3);
    CHECK(canonical_basis(a) == canonical_basis(a * p));
}

TEST_CASE("rank over F2 differs from Q") {
    Matrix a = mat({{1, 1}, {1, -1}});
    CHECK(rank(a) == 2);
    CHECK(rank(mat({{1, 1}, {1, -1}}, F2)) == 1);
}
