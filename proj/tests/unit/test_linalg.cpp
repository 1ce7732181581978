#include <cmath>
#include <doctest.h>

#include "adaflow/linalg.hpp"
#include "adaflow/rng.hpp"

using namespace adaflow;

namespace {

// random Hurwitz matrix: negative-definite symmetric part plus a skew part,
// so x.Ax < 0 for all x and every eigenvalue real part is negative
Matrix random_hurwitz(SplitMix64& rng, std::size_t n) {
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) l(i, j) = rng.uniform(-1.0, 1.0);
    Matrix a = -1.0 * (l * transpose(l));
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= 0.1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = rng.uniform(-1.0, 1.0);
            a(i, j) += s;
            a(j, i) -= s;
        }
    return a;
}

Matrix random_spd(SplitMix64& rng, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    Matrix q = m * transpose(m);
    for (std::size_t i = 0; i < n; ++i) q(i, i) += 0.1;
    return q;
}

}  // namespace

TEST_CASE("solve_lyapunov identity case") {
    const Matrix a = -1.0 * Matrix::identity(2);
    const Matrix q = 2.0 * Matrix::identity(2);
    const Matrix p = solve_lyapunov(a, q);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(p(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("solve_lyapunov residual oracle") {
    const Matrix a(2, 2, {0.0, 1.0, -2.0, -3.0});
    const Matrix q = 2.0 * Matrix::identity(2);
    const Matrix p = solve_lyapunov(a, q);
    // substitute back
    const Matrix residual = transpose(a) * p + p * a + q;
    CHECK(frobenius_norm(residual) <= 1e-9 * frobenius_norm(q));
    CHECK(is_positive_definite(p));
}

TEST_CASE("solve_lyapunov rejects non-Hurwitz A") {
    const Matrix a(2, 2, {1.0, 0.0, 0.0, -1.0});
    CHECK_THROWS_AS(solve_lyapunov(a, Matrix::identity(2)), NotHurwitz);
}

TEST_CASE("is_positive_definite examples") {
    CHECK(is_positive_definite(Matrix::identity(3)));
    CHECK_FALSE(is_positive_definite(Matrix(2, 2, {1.0, 0.0, 0.0, 0.0})));
    CHECK(is_positive_definite(Matrix(2, 2, {2.0, 1.0, 1.0, 2.0})));  // eigenvalues 1, 3
    CHECK_THROWS_AS(is_positive_definite(Matrix(2, 2, {1.0, 0.5, 0.0, 1.0})), NotSymmetric);
}

TEST_CASE("min_eigenvalue_symmetric examples") {
    CHECK(min_eigenvalue_symmetric(Matrix(2, 2, {3.0, 0.0, 0.0, 5.0})) == doctest::Approx(3.0));
    CHECK(min_eigenvalue_symmetric(Matrix(2, 2)) == doctest::Approx(0.0));
    // characteristic polynomial x^2 - 4x + 3 has roots 1 and 3
    CHECK(min_eigenvalue_symmetric(Matrix(2, 2, {2.0, 1.0, 1.0, 2.0})) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(min_eigenvalue_symmetric(Matrix(2, 2, {0.0, 1.0, 0.0, 0.0})), NotSymmetric);
}

TEST_CASE("matrix_exponential_action examples") {
    const Vector v{1.0, 2.0};
    const Vector r0 = matrix_exponential_action(Matrix(2, 2), 3.0, v);
    CHECK(r0[0] == doctest::Approx(1.0));
    CHECK(r0[1] == doctest::Approx(2.0));

    const Vector r1 = matrix_exponential_action(-1.0 * Matrix::identity(2), 1.0, {1.0, 1.0});
    CHECK(r1[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(r1[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    // planar rotation: exp(At) with A = [[0,1],[-1,0]] rotates by -t
    const Vector r2 =
        matrix_exponential_action(Matrix(2, 2, {0.0, 1.0, -1.0, 0.0}), std::acos(-1.0) / 2.0,
                                  {1.0, 0.0});
    CHECK(r2[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r2[1] == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(matrix_exponential_action(Matrix::identity(2), -1.0, {1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("lyapunov solve property: random stable systems") {
    SplitMix64 rng(2024);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = rep % 2 == 0 ? 2 : 3;
        const Matrix a = random_hurwitz(rng, n);
        REQUIRE(is_hurwitz(a));
        const Matrix q = random_spd(rng, n);
        const Matrix p = solve_lyapunov(a, q);

        Matrix skew = p + (-1.0 * transpose(p));
        CHECK(frobenius_norm(skew) <= 1e-10);
        CHECK(is_positive_definite(p));
        const Matrix residual = transpose(a) * p + p * a + q;
        CHECK(frobenius_norm(residual) <= 1e-9 * frobenius_norm(q));
    }
}

TEST_CASE("matrix exponential semigroup property") {
    SplitMix64 rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + rep % 3;
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.5, 1.5);
        Vector v(n);
        for (double& x : v) x = rng.uniform(-2.0, 2.0);
        const double s = rng.uniform(0.0, 2.0), t = rng.uniform(0.0, 2.0);

        const Vector once = matrix_exponential_action(a, s + t, v);
        const Vector twice = matrix_exponential_action(a, s, matrix_exponential_action(a, t, v));
        for (std::size_t i = 0; i < n; ++i) CHECK(once[i] == doctest::Approx(twice[i]).epsilon(1e-8));
    }
}

TEST_CASE("is_hurwitz boundary cases") {
    CHECK_FALSE(is_hurwitz(Matrix(2, 2)));  // zero matrix, eigenvalues at 0
    CHECK(is_hurwitz(Matrix(1, 1, {-0.5})));
    CHECK_FALSE(is_hurwitz(Matrix(1, 1, {0.0})));
    CHECK(is_hurwitz(Matrix(2, 2, {0.0, 1.0, -2.0, -3.0})));  // eigenvalues -1, -2
}

TEST_CASE("solve_linear pivots and detects singularity") {
    const Matrix a(2, 2, {0.0, 1.0, 1.0, 0.0});
    const Vector x = solve_linear(a, {3.0, 4.0});
    CHECK(x[0] == doctest::Approx(4.0));
    CHECK(x[1] == doctest::Approx(3.0));
    CHECK_THROWS_AS(solve_linear(Matrix(2, 2, {1.0, 1.0, 1.0, 1.0}), {1.0, 2.0}), SingularSystem);
}
