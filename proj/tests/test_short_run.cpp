#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "hcdgeo/demand.hpp"
#include "hcdgeo/errors.hpp"
#include "hcdgeo/short_run.hpp"

using namespace hcdgeo;

namespace {
EconomyParams params(double alpha, double sigma, double tau) {
    EconomyParams p;
    p.alpha = alpha;
    p.sigma = sigma;
    p.tau = tau;
    return p;
}
const ShareSchedule kLogistic = ShareSchedule::logistic(0.2, 0.95, 1.0, 2.0);
}  // namespace

TEST_CASE("price index closed form") {
    EconomyParams p = params(2.0, 3.0, 1.5);
    double phi = std::pow(1.5, 1.0 - 3.0);
    CHECK(p.phi() == doctest::Approx(phi).epsilon(1e-15));
    CHECK(price_index(1.0, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(price_index(0.0, p) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(price_index(0.5, p) ==
          doctest::Approx(std::pow(0.5 + 0.5 * phi, 1.0 / (1.0 - 3.0))).epsilon(1e-14));
    // More local firms, cheaper local bundle.
    CHECK(price_index(0.8, p) < price_index(0.3, p));
}

TEST_CASE("frozen interior solution") {
    // Reference solved independently at 50-digit precision.
    auto s = solve_short_run(0.7, params(2.0, 3.0, 1.5), kLogistic);
    CHECK(s.pi[0] == doctest::Approx(0.7709414412332871).epsilon(1e-8));
    CHECK(s.pi[1] == doctest::Approx(0.831202384228745).epsilon(1e-8));
    CHECK(s.Omega[0] == doctest::Approx(0.7389516147565471).epsilon(1e-8));
    CHECK(s.Omega[1] == doctest::Approx(0.7411124541311306).epsilon(1e-8));
    CHECK(s.m[0] == doctest::Approx(0.4648926309540531).epsilon(1e-8));
    CHECK(s.m[1] == doctest::Approx(0.4658940596240536).epsilon(1e-8));
    CHECK(s.P_M[0] == doctest::Approx(1.0954451150103322).epsilon(1e-12));
    CHECK(s.P_M[1] == doctest::Approx(1.2792042981336626).epsilon(1e-12));
    CHECK(s.residual <= 1e-11);
    CHECK(s.iterations > 0);
    CHECK(s.lambda == 0.7);
}

TEST_CASE("relabeling the regions mirrors the solution") {
    for (double lam : {0.0, 0.2, 0.5, 0.85, 1.0}) {
        auto a = solve_short_run(lam, params(2.0, 3.0, 1.5), kLogistic);
        auto b = solve_short_run(1.0 - lam, params(2.0, 3.0, 1.5), kLogistic);
        CHECK(a.pi[0] == doctest::Approx(b.pi[1]).epsilon(1e-10));
        CHECK(a.pi[1] == doctest::Approx(b.pi[0]).epsilon(1e-10));
        CHECK(a.Omega[0] == doctest::Approx(b.Omega[1]).epsilon(1e-10));
        CHECK(a.P_M[0] == doctest::Approx(b.P_M[1]).epsilon(1e-10));
        CHECK(a.m[0] == doctest::Approx(b.m[1]).epsilon(1e-10));
    }
}

TEST_CASE("goods-market adding up") {
    // Summing the two sales equations: sigma[lam pi1 + (1-lam) pi2]
    // = lam m1 pi1 + (1-lam) m2 pi2 + alpha.
    for (double lam : {0.1, 0.4, 0.5, 0.7, 0.95}) {
        for (double tau : {1.0, 1.3, 2.5}) {
            auto s = solve_short_run(lam, params(2.0, 3.0, tau), kLogistic);
            double lhs = 3.0 * (lam * s.pi[0] + (1.0 - lam) * s.pi[1]);
            double rhs =
                lam * s.m[0] * s.pi[0] + (1.0 - lam) * s.m[1] * s.pi[1] + 2.0;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("earnings are bounded below by the workers' import demand") {
    // sigma pi_r >= (alpha/2)(1 + phi) since E_r >= alpha/2 and Delta <= 1.
    for (double lam : {0.0, 0.3, 0.6, 1.0}) {
        EconomyParams p = params(3.0, 1.7, 2.0);
        auto s = solve_short_run(lam, p, ShareSchedule::logistic(0.1, 0.95, 1.0, 1.0));
        double bound = (p.alpha / 2.0) * (1.0 + p.phi()) / p.sigma;
        CHECK(s.pi[0] >= bound);
        CHECK(s.pi[1] >= bound);
        CHECK(s.Omega[0] > 0.0);
        CHECK(s.Omega[1] > 0.0);
    }
}

TEST_CASE("full agglomeration satisfies the host-region relation") {
    // At lambda = 1: sigma pi1 = m1 pi1 + alpha and P_M1 = 1, so
    // pi1 = alpha/(sigma - m(pi1)) and Omega1 = pi1.
    auto s = solve_short_run(1.0, params(2.0, 3.0, 1.5), kLogistic);
    CHECK(s.P_M[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.pi[0] == doctest::Approx(2.0 / (3.0 - s.m[0])).epsilon(1e-10));
    CHECK(s.Omega[0] == doctest::Approx(s.pi[0]).epsilon(1e-12));
    // The empty region sees the full trade cost on every variety.
    CHECK(s.P_M[1] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.Omega[1] < s.Omega[0]);
}

TEST_CASE("free trade equalizes the regions at any allocation") {
    auto s = solve_short_run(0.3, params(2.0, 3.0, 1.0), kLogistic);
    CHECK(s.pi[0] == doctest::Approx(s.pi[1]).epsilon(1e-12));
    CHECK(s.P_M[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.P_M[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.Omega[0] == doctest::Approx(s.Omega[1]).epsilon(1e-12));
    // pi = alpha/(sigma - m(pi)) is the common level.
    CHECK(s.pi[0] == doctest::Approx(2.0 / (3.0 - s.m[0])).epsilon(1e-10));
}

TEST_CASE("warm starts reproduce the cold-start solution faster") {
    EconomyParams p = params(2.0, 3.0, 1.5);
    auto cold = solve_short_run(0.62, p, kLogistic);
    auto warm = solve_short_run(0.62, p, kLogistic, std::array<double, 2>{cold.pi[0], cold.pi[1]});
    CHECK(warm.pi[0] == doctest::Approx(cold.pi[0]).epsilon(1e-10));
    CHECK(warm.pi[1] == doctest::Approx(cold.pi[1]).epsilon(1e-10));
    CHECK(warm.iterations < cold.iterations);
}

TEST_CASE("solutions stay tight across parameter extremes") {
    auto lg = ShareSchedule::logistic(0.1, 0.95, 1.0, 1.0);
    for (double lam : {0.01, 0.5, 0.99}) {
        for (double alpha : {0.2, 1.0, 10.0}) {
            auto s = solve_short_run(lam, params(alpha, 1.7, 5.0), lg);
            CHECK(s.residual <= 1e-11);
        }
    }
    auto s = solve_short_run(0.5, params(1.0, 8.0, 1.02), lg);
    CHECK(s.residual <= 1e-11);
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(solve_short_run(-0.1, params(2, 3, 1.5), kLogistic), DomainError);
    CHECK_THROWS_AS(solve_short_run(1.1, params(2, 3, 1.5), kLogistic), DomainError);
    CHECK_THROWS_AS(solve_short_run(0.5, params(2, 3, 0.9), kLogistic), DomainError);
    CHECK_THROWS_AS(solve_short_run(0.5, params(-1, 3, 1.5), kLogistic), DomainError);
    CHECK_THROWS_AS(solve_short_run(0.5, params(2, 0.9, 1.5), kLogistic), DomainError);
}
