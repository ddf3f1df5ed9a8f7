#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pir2/errors.hpp"
#include "pir2/matrix.hpp"

using namespace pir2;

namespace {

// Brute-force inverse: scan for b with a*b = 1. The independent oracle for
// the Fermat-based inverse.
std::uint64_t inverse_by_search(std::uint64_t a, std::uint64_t q) {
    for (std::uint64_t b = 1; b < q; ++b)
        if ((a * b) % q == 1) return b;
    return 0;
}

// 3x3 determinant by the cofactor formula, independent of elimination.
std::uint64_t det3(const Matrix& m, const Field& f) {
    auto mul3 = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        return f.mul(a, f.mul(b, c));
    };
    std::uint64_t pos = f.add(f.add(mul3(m.at(0, 0), m.at(1, 1), m.at(2, 2)),
                                    mul3(m.at(0, 1), m.at(1, 2), m.at(2, 0))),
                              mul3(m.at(0, 2), m.at(1, 0), m.at(2, 1)));
    std::uint64_t neg = f.add(f.add(mul3(m.at(0, 2), m.at(1, 1), m.at(2, 0)),
                                    mul3(m.at(0, 0), m.at(1, 2), m.at(2, 1))),
                              mul3(m.at(0, 1), m.at(1, 0), m.at(2, 2)));
    return f.sub(pos, neg);
}

}  // namespace

TEST_CASE("field construction validates the modulus") {
    CHECK_THROWS_AS(Field(4), ParamError);
    CHECK_THROWS_AS(Field(1), ParamError);
    CHECK_THROWS_AS(Field(2), ParamError);  // q >= 3 by contract
    CHECK_NOTHROW(Field(3));
    CHECK_NOTHROW(Field(1000003));
    CHECK_THROWS_AS(Field(1ULL << 61), ParamError);
}

TEST_CASE("basic operations in F_7") {
    const Field f(7);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.inv(3) == 5);
    CHECK(f.add(6, 5) == 4);
    CHECK(f.sub(2, 5) == 4);
    CHECK(f.neg(3) == 4);
    CHECK(f.neg(0) == 0);
    CHECK(f.pow(3, 6) == 1);
    CHECK_THROWS_AS(f.inv(0), SingularMatrixError);
}

TEST_CASE("field axioms hold exhaustively for q=5 and q=7") {
    for (std::uint64_t q : {5ULL, 7ULL}) {
        const Field f(q);
        for (std::uint64_t a = 0; a < q; ++a) {
            for (std::uint64_t b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == (a + b) % q);
                CHECK(f.mul(a, b) == (a * b) % q);
                CHECK(f.add(a, f.neg(a)) == 0);
                for (std::uint64_t c = 0; c < q; ++c) {
                    CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
            if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
        }
    }
}

TEST_CASE("inverses in F_101 match brute-force search over 1000 draws") {
    const Field f(101);
    SplitMix64 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::uint64_t a = 1 + rng.below(100);
        const std::uint64_t inv = f.inv(a);
        CHECK(inv == inverse_by_search(a, 101));
        CHECK(f.mul(a, inv) == 1);
    }
}

TEST_CASE("large modulus path") {
    const Field f((1ULL << 61) - 1);  // Mersenne prime
    const std::uint64_t a = 0x123456789abcdefULL % f.modulus();
    CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK(f.mul(f.modulus() - 1, f.modulus() - 1) == 1);
}

TEST_CASE("rank of identity and rank-deficient matrices") {
    const Field f(11);
    CHECK(rank(Matrix::identity(4), f) == 4);
    Matrix dup(3, 4);
    for (std::size_t c = 0; c < 4; ++c) {
        dup.at(0, c) = c + 1;
        dup.at(1, c) = c + 1;  // repeated row
        dup.at(2, c) = (3 * c + 2) % 11;
    }
    CHECK(rank(dup, f) < 3);
    CHECK(rank(Matrix(), f) == 0);
    CHECK(rank(Matrix(0, 5), f) == 0);
}

TEST_CASE("Vandermonde 3x5 over F_11 has rank 3") {
    const Field f(11);
    // Rows are powers 0..2 of the points 1..5.
    Matrix v(3, 5);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 5; ++c) v.at(r, c) = f.pow(c + 1, r);
    // Independent check: the leading 3x3 minor has nonzero determinant by the
    // cofactor formula (its exact value is (2-1)(3-1)(3-2) = 2 mod 11).
    Matrix minor(3, 3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) minor.at(r, c) = v.at(r, c);
    CHECK(det3(minor, f) == 2);
    CHECK(rank(v, f) == 3);
}

TEST_CASE("solve_square examples") {
    const Field f(7);
    SUBCASE("identity returns the right-hand side") {
        Matrix b(3, 2);
        b.at(0, 0) = 1;
        b.at(1, 0) = 4;
        b.at(2, 1) = 6;
        CHECK(solve_square(Matrix::identity(3), b, f) == b);
    }
    SUBCASE("2x2 hand-checkable system") {
        Matrix a(2, 2), b(2, 1);
        a.at(0, 0) = 1;
        a.at(0, 1) = 1;
        a.at(1, 0) = 1;
        a.at(1, 1) = 2;
        b.at(0, 0) = 3;
        b.at(1, 0) = 5;
        const Matrix x = solve_square(a, b, f);
        CHECK(x.at(0, 0) == 1);
        CHECK(x.at(1, 0) == 2);
        CHECK(mat_mul(a, x, f) == b);
    }
    SUBCASE("singular system throws") {
        Matrix a(2, 2), b(2, 1);
        a.at(0, 0) = 2;
        a.at(0, 1) = 4;
        a.at(1, 0) = 1;
        a.at(1, 1) = 2;
        CHECK_THROWS_AS(solve_square(a, b, f), SingularMatrixError);
    }
}

TEST_CASE("solve_square round-trips on random invertible systems") {
    const Field f(101);
    SplitMix64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(8);
        const Matrix a = random_full_rank(n, f, rng);
        Matrix b(n, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < 2; ++j) b.at(i, j) = f.random(rng);
        const Matrix x = solve_square(a, b, f);
        CHECK(mat_mul(a, x, f) == b);
        const Matrix ainv = inverse(a, f);
        CHECK(mat_mul(a, ainv, f) == Matrix::identity(n));
    }
}

TEST_CASE("random_full_rank yields full rank") {
    SplitMix64 rng(42);
    SUBCASE("dimension one is a nonzero scalar") {
        const Field f(5);
        const Matrix m = random_full_rank(1, f, rng);
        CHECK(m.at(0, 0) != 0);
    }
    SUBCASE("16x16 over F_257 with seed 42") {
        const Field f(257);
        SplitMix64 seeded(42);
        const Matrix m = random_full_rank(16, f, seeded);
        CHECK(rank(m, f) == 16);
    }
    SUBCASE("distinct seeds give distinct matrices") {
        const Field f(257);
        for (std::uint64_t s = 0; s < 100; ++s) {
            SplitMix64 r1(2 * s), r2(2 * s + 1);
            CHECK_FALSE(random_full_rank(6, f, r1) == random_full_rank(6, f, r2));
        }
    }
    SUBCASE("dimension zero is rejected") {
        const Field f(5);
        CHECK_THROWS_AS(random_full_rank(0, f, rng), ParamError);
    }
}

TEST_CASE("mat_vec matches mat_mul against a column") {
    const Field f(29);
    SplitMix64 rng(17);
    Matrix a(5, 9);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 9; ++j) a.at(i, j) = f.random(rng);
    std::vector<std::uint64_t> x(9);
    for (auto& v : x) v = f.random(rng);
    Matrix xc(9, 1);
    for (std::size_t j = 0; j < 9; ++j) xc.at(j, 0) = x[j];
    const auto y = mat_vec(a, x, f);
    const Matrix yc = mat_mul(a, xc, f);
    for (std::size_t i = 0; i < 5; ++i) CHECK(y[i] == yc.at(i, 0));
}
