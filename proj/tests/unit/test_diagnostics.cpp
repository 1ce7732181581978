#include <cmath>
#include <doctest.h>

#include "adaflow/diagnostics.hpp"
#include "adaflow/rng.hpp"

using namespace adaflow;

TEST_CASE("higher-order regression Lyapunov value") {
    const Vector star{1.0, 2.0};
    CHECK(lyapunov_regression(star, star, star, 0.5) == doctest::Approx(0.0));
    // vartheta - star = (1,0), theta - vartheta = (0,1)
    CHECK(lyapunov_regression({2.0, 3.0}, {2.0, 2.0}, star, 1.0) == doctest::Approx(2.0));
    CHECK(lyapunov_regression({2.0, 3.0}, {2.0, 2.0}, star, 0.1) == doctest::Approx(20.0));
    CHECK_THROWS_AS(lyapunov_regression({1.0}, {1.0, 2.0}, {1.0, 2.0}, 1.0), DimensionMismatch);
}

TEST_CASE("higher-order regression rate bound") {
    const Vector same{1.0, 1.0};
    CHECK(lyapunov_regression_rate_bound(same, same, {3.0, 3.0}, 0.0, 0.1, 1.0) ==
          doctest::Approx(0.0));
    CHECK(lyapunov_regression_rate_bound(same, same, {3.0, 3.0}, 1.0, 0.1, 1.0) ==
          doctest::Approx(-2.0));
}

TEST_CASE("model-tracking Lyapunov value") {
    const Vector star{1.0, -2.0, 5.0};
    const Matrix p = Matrix::identity(3);
    CHECK(lyapunov_mrac(star, star, star, Vector(3, 0.0), p, 0.1) == doctest::Approx(0.0));
    CHECK(lyapunov_mrac(star, star, star, {1.0, 0.0, 0.0}, p, 0.1) == doctest::Approx(1.0));

    // decomposition: parameter part plus error energy
    const Vector theta{2.0, -1.0, 4.0}, vartheta{1.5, -1.5, 4.5}, e{0.3, -0.2, 0.1};
    CHECK(lyapunov_mrac(theta, vartheta, star, e, p, 0.1) ==
          doctest::Approx(lyapunov_regression(theta, vartheta, star, 0.1) + dot(e, e)));
    CHECK_THROWS_AS(lyapunov_mrac(star, star, star, e, Matrix(3, 3), 0.1), NotPositiveDefinite);
}

TEST_CASE("model-tracking rate bound") {
    const Vector same{1.0, 1.0, 1.0};
    CHECK(lyapunov_mrac_rate_bound(same, same, {1.0, 0.0, 0.0}, Vector(3, 0.0), {1.0, 1.0, 1.0},
                                   0.1, 1.0) == doctest::Approx(0.0));
    CHECK(lyapunov_mrac_rate_bound(same, same, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 1.0},
                                   0.1, 1.0) == doctest::Approx(-2.0));
}

TEST_CASE("continuous regret over hand-built trajectories") {
    Trajectory traj;
    traj.mrac = false;

    SUBCASE("zero error") {
        for (int k = 0; k <= 10; ++k) {
            TrajectorySample s;
            s.t = 0.2 * k;
            s.e_y = 0.0;
            traj.samples.push_back(s);
        }
        CHECK(continuous_regret(traj) == doctest::Approx(0.0));
    }
    SUBCASE("unit error over [0, 2]") {
        for (int k = 0; k <= 10; ++k) {
            TrajectorySample s;
            s.t = 0.2 * k;
            s.e_y = 1.0;
            traj.samples.push_back(s);
        }
        CHECK(continuous_regret(traj) == doctest::Approx(2.0));
    }
}

TEST_CASE("candidate certificate rate collapses for constant features") {
    const Vector zero3(3, 0.0);
    const Vector phi{1.0, 1.0, 1.0};

    const CandidateLyapunov quiet =
        wibisono_candidate_lyapunov(zero3, zero3, phi, zero3, 0.0, 0.1, 1.0, 0.2);
    CHECK(quiet.v_dot == doctest::Approx(0.0));

    const double e_y = -3.0;
    const CandidateLyapunov c =
        wibisono_candidate_lyapunov({1.0, 0.0, 0.0}, zero3, phi, zero3, e_y, 0.1, 1.0, 0.2);
    CHECK(c.v_dot == doctest::Approx(-0.1 * e_y * e_y));  // -gamma e_y^2 < 0
    CHECK(c.v > 0.0);
}

TEST_CASE("lp norms") {
    const std::vector<double> t{0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> zeros(5, 0.0), ones(5, 1.0);
    CHECK(lp_norm(t, zeros, LpKind::L2) == doctest::Approx(0.0));
    CHECK(lp_norm(t, zeros, LpKind::LInf) == doctest::Approx(0.0));
    CHECK(lp_norm(t, ones, LpKind::L2) == doctest::Approx(2.0));
    CHECK(lp_norm(t, ones, LpKind::LInf) == doctest::Approx(1.0));
}

TEST_CASE("asymptotic decay check") {
    const std::vector<double> t{0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
    std::vector<double> zeros(t.size(), 0.0), ones(t.size(), 1.0);
    CHECK(asymptotic_decay_check(t, zeros, 0.2, 1e-2));
    CHECK_FALSE(asymptotic_decay_check(t, ones, 0.2, 0.5));

    std::vector<double> decaying;
    for (double tt : t) decaying.push_back(std::exp(-tt));
    CHECK(asymptotic_decay_check(t, decaying, 0.2, 1e-2));
    CHECK_FALSE(asymptotic_decay_check(t, decaying, 0.9, 1e-2));
}

TEST_CASE("model-tracking Lyapunov dominates the error energy") {
    SplitMix64 rng(41);
    // random SPD P via M M^T + 0.1 I
    for (int rep = 0; rep < 20; ++rep) {
        Matrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
        Matrix p = m * transpose(m);
        for (std::size_t i = 0; i < 3; ++i) p(i, i) += 0.1;

        Vector theta(3), vartheta(3), star(3), e(3);
        for (std::size_t i = 0; i < 3; ++i) {
            theta[i] = rng.uniform(-3.0, 3.0);
            vartheta[i] = rng.uniform(-3.0, 3.0);
            star[i] = rng.uniform(-3.0, 3.0);
            e[i] = rng.uniform(-2.0, 2.0);
        }
        const double v = lyapunov_mrac(theta, vartheta, star, e, p, 0.1);
        const double lambda_min = min_eigenvalue_symmetric(p);
        CHECK(v >= lambda_min * dot(e, e) - 1e-12);
        CHECK(v >= 0.0);
    }
}

TEST_CASE("zero crossing count") {
    const std::vector<double> wave{1.0, 0.5, -0.5, -1.0, 0.5, 1.0, -0.2};
    CHECK(zero_crossing_count(wave) == 3);
    const std::vector<double> noisy{1.0, 1e-12, -1e-12, 1.0, -1.0};
    CHECK(zero_crossing_count(noisy) == 1);  // deadband swallows the denormal flutter
}
