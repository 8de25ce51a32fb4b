#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mfp/kolmogorov.hpp"

using namespace mfp;

TEST_CASE("constant intensity drains one level exponentially") {
    ModelParams p;
    p.K = 1;
    p.T = 4.0;
    p.n_steps = 40;
    Grid2D lam(1, 41);
    for (std::size_t i = 0; i <= 40; ++i) lam(0, i) = 0.5;
    InitialDistribution M;
    M.M = {0.0, 1.0};
    const DistributionPath m = solve_kolmogorov(p, lam, M);
    for (std::size_t i = 0; i <= 40; ++i) {
        const double t = 0.1 * static_cast<double>(i);
        CHECK(m.values(1, i) == doctest::Approx(std::exp(-0.5 * t)).epsilon(1e-9));
    }
}

TEST_CASE("zero intensity freezes the initial distribution") {
    ModelParams p;
    p.K = 3;
    p.T = 10.0;
    p.n_steps = 25;
    Grid2D lam(3, 26);
    InitialDistribution M;
    M.M = {0.1, 0.2, 0.3, 0.4};
    const DistributionPath m = solve_kolmogorov(p, lam, M);
    for (std::size_t i = 0; i <= 25; ++i)
        for (std::size_t k = 0; k <= 3; ++k) CHECK(m.values(k, i) == M.M[k]);
}

TEST_CASE("mass conservation and absorption") {
    ModelParams p;
    p.K = 4;
    p.T = 30.0;
    p.n_steps = 150;
    Grid2D lam(4, 151);
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t i = 0; i <= 150; ++i)
            lam(k, i) = 0.1 + 0.08 * static_cast<double>(k) +
                        0.05 * std::sin(0.4 * static_cast<double>(i));
    InitialDistribution M;
    M.M = {0.0, 0.4, 0.3, 0.2, 0.1};
    const DistributionPath m = solve_kolmogorov(p, lam, M);

    for (std::size_t i = 0; i <= 150; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k <= 4; ++k) {
            CHECK(m.values(k, i) >= -1e-12);
            sum += m.values(k, i);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        if (i > 0) CHECK(m.values(0, i) >= m.values(0, i - 1) - 1e-12);
    }
    // most mass eventually funnels into the absorbing sold-out state
    CHECK(m.values(0, 150) > 0.85);
}

TEST_CASE("top level only loses mass") {
    ModelParams p;
    p.K = 3;
    p.T = 12.0;
    p.n_steps = 60;
    Grid2D lam(3, 61);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i <= 61 - 1; ++i) lam(k, i) = 0.3;
    InitialDistribution M;
    M.M = {0.0, 0.0, 0.0, 1.0};
    const DistributionPath m = solve_kolmogorov(p, lam, M);
    for (std::size_t i = 1; i <= 60; ++i) CHECK(m.values(3, i) <= m.values(3, i - 1) + 1e-14);
    // closed form for the pure-death chain with constant rate
    const double t = 12.0;
    CHECK(m.values(3, 60) == doctest::Approx(std::exp(-0.3 * t)).epsilon(1e-9));
    CHECK(m.values(2, 60) ==
          doctest::Approx(0.3 * t * std::exp(-0.3 * t)).epsilon(1e-9));
}

TEST_CASE("input validation") {
    ModelParams p;
    p.K = 2;
    p.T = 1.0;
    p.n_steps = 4;
    InitialDistribution M;
    M.M = {0.2, 0.3, 0.5};
    CHECK_THROWS_AS(solve_kolmogorov(p, Grid2D(2, 4), M), std::invalid_argument);

    Grid2D negative(2, 5);
    negative(1, 2) = -0.25;
    CHECK_THROWS_AS(solve_kolmogorov(p, negative, M), std::invalid_argument);

    Grid2D poisoned(2, 5);
    poisoned(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(solve_kolmogorov(p, poisoned, M), SolverError);

    InitialDistribution bad;
    bad.M = {0.5, 0.5};
    Grid2D lam(2, 5);
    CHECK_THROWS_AS(solve_kolmogorov(p, lam, bad), std::invalid_argument);
}
