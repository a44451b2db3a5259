#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "plb/problem.hpp"

#include <cmath>
#include <numbers>

using namespace plb;

namespace {

ProblemSpec make_spec(double p, double delta, double q, double eps = 0.0) {
    ProblemSpec s;
    s.p = p;
    s.delta = delta;
    s.q = q;
    s.eps = eps;
    return s;
}

} // namespace

TEST_CASE("spec validation") {
    ProblemSpec s;
    CHECK_NOTHROW(s.validate());
    s.p = 1.0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = ProblemSpec{};
    s.q = s.p - 1.0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = ProblemSpec{};
    s.delta = 0.0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = ProblemSpec{};
    s.n_trunc = 0.5;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = ProblemSpec{};
    s.n_trunc = 10.0;
    CHECK_NOTHROW(s.validate());
    CHECK(s.truncated());
}

TEST_CASE("singular_term") {
    CHECK(singular_term(1.0, make_spec(2, 1, 3)) == doctest::Approx(1.0));
    CHECK(singular_term(0.0, make_spec(2, 2, 3, 0.5)) == doctest::Approx(4.0));
    CHECK(singular_term(3.0, make_spec(2, 0.5, 3)) ==
          doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK_THROWS_AS(singular_term(0.0, make_spec(2, 1, 3)), DomainError);
    CHECK_THROWS_AS(singular_term(-0.5, make_spec(2, 1, 3, 0.25)), DomainError);
}

TEST_CASE("truncated_power") {
    ProblemSpec s = make_spec(2, 1, 3);
    s.n_trunc = 2.0;
    CHECK(truncated_power(3.0, s) == doctest::Approx(12.0)); // min(3,2)^2 * 3
    s.n_trunc = 5.0;
    CHECK(truncated_power(1.0, s) == doctest::Approx(1.0));
    CHECK(truncated_power(0.0, s) == 0.0);

    // u^q below the truncation and continuity at u = n.
    s.n_trunc = 2.0;
    for (double u : {0.1, 0.5, 1.0, 1.999, 2.0})
        CHECK(truncated_power(u, s) == doctest::Approx(std::pow(u, s.q)));
    const double left = truncated_power(2.0 - 1e-9, s);
    const double right = truncated_power(2.0 + 1e-9, s);
    CHECK(left == doctest::Approx(right).epsilon(1e-6));

    ProblemSpec inf_spec = make_spec(2, 1, 3);
    CHECK(truncated_power(7.0, inf_spec) == doctest::Approx(343.0));
}

TEST_CASE("zeta and the fold upper bound") {
    CHECK(zeta(make_spec(2, 1, 3)) == doctest::Approx(1.0));
    CHECK(zeta(make_spec(2, 1, 2)) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)));
    CHECK(zeta(make_spec(3, 2, 4)) == doctest::Approx(std::pow(2.0, 1.0 / 6.0)));

    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(lambda_star_upper_bound(make_spec(2, 1, 3), pi2) ==
          doctest::Approx(2.0 * pi2));
    const double z = std::pow(2.0, 1.0 / 3.0);
    CHECK(lambda_star_upper_bound(make_spec(2, 1, 2), pi2) ==
          doctest::Approx(pi2 * (z + 1.0) * z));
    CHECK(lambda_star_upper_bound(make_spec(2, 1, 2), 0.0) == 0.0);
}

TEST_CASE("g_eps values and blow-up") {
    CHECK(g_eps(1.0, make_spec(2, 1, 3)) == doctest::Approx(2.0));
    CHECK(g_eps(2.0, make_spec(2, 2, 3)) == doctest::Approx(4.125));
    CHECK_THROWS_AS(g_eps(0.0, make_spec(2, 1, 3)), DomainError);
    const ProblemSpec s = make_spec(2, 0.5, 3);
    double prev = g_eps(1e-2, s);
    for (double t : {1e-3, 1e-4, 1e-5}) {
        const double v = g_eps(t, s);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("g_eps_minimizer against calculus and the brute-force oracle") {
    {
        const auto m = g_eps_minimizer(make_spec(2, 1, 3));
        CHECK(m.t_min == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.g_min == doctest::Approx(2.0).epsilon(1e-9));
    }
    {
        // delta = 2: g(t) = t^{-3} + t^2, minimum at (3/2)^{1/5}.
        const auto m = g_eps_minimizer(make_spec(2, 2, 3));
        const auto oracle = oracle::brute_force_g_min(make_spec(2, 2, 3));
        CHECK(m.t_min == doctest::Approx(std::pow(1.5, 0.2)).epsilon(1e-9));
        CHECK(m.t_min == doctest::Approx(oracle.t).epsilon(1e-7));
        CHECK(m.g_min == doctest::Approx(oracle.value).epsilon(1e-10));
    }
    for (double p : {1.5, 2.0, 3.0}) {
        for (double delta : {0.5, 1.0, 2.0}) {
            for (double q : {3.0, p + 1.2}) {
                for (double eps : {0.0, 0.05, 0.3}) {
                    const ProblemSpec s = make_spec(p, delta, q, eps);
                    const auto m = g_eps_minimizer(s);
                    const auto oracle = oracle::brute_force_g_min(s);
                    INFO("p=", p, " delta=", delta, " q=", q, " eps=", eps);
                    CHECK(m.g_min == doctest::Approx(oracle.value).epsilon(1e-9));
                    // Stationarity and local minimality.
                    CHECK(std::fabs(g_eps_slope(m.t_min, s)) <=
                          1e-6 * (1.0 + std::fabs(m.g_min)));
                    CHECK(g_eps(m.t_min * 1.001, s) >= m.g_min);
                    CHECK(g_eps(m.t_min * 0.999, s) >= m.g_min);
                    // Bracket (zeta - eps, zeta); degenerate at eps = 0.
                    const double z = zeta(s);
                    if (eps == 0.0) {
                        CHECK(m.t_min == doctest::Approx(z).epsilon(1e-9));
                    } else if (eps < z) {
                        CHECK(m.t_min > z - eps - 1e-9);
                        CHECK(m.t_min < z + 1e-9);
                    }
                    // Floor bound from the bracket.
                    CHECK(m.g_min >= std::pow(z + 1.0, -delta) * std::pow(z, 1.0 - p) *
                                         (1.0 - 1e-12));
                }
            }
        }
    }
}

TEST_CASE("g_eps decreasing left of zeta - eps") {
    for (double eps : {0.0, 0.1}) {
        const ProblemSpec s = make_spec(2, 1, 3, eps);
        const double z = zeta(s);
        const double hi = z - eps;
        double prev = g_eps(hi * 0.05, s);
        for (int k = 1; k <= 18; ++k) {
            const double t = hi * (0.05 + 0.9 * k / 19.0);
            const double v = g_eps(t, s);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("nonexistence_certificate") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const ProblemSpec s = make_spec(2, 1, 3);
    CHECK(nonexistence_certificate(6.0, s, pi2));       // 12 > pi^2
    CHECK_FALSE(nonexistence_certificate(4.0, s, pi2)); // 8 < pi^2
    CHECK_FALSE(nonexistence_certificate(1e-9, s, pi2));

    // certificate(lambda) <=> lambda > lambda1/g_min, and the certificate
    // threshold never exceeds the closed-form bound.
    for (double p : {1.5, 2.0, 3.0}) {
        for (double delta : {0.5, 1.5}) {
            const ProblemSpec spec = make_spec(p, delta, 3.0);
            const double gmin = g_eps_minimizer(spec).g_min;
            const double threshold = pi2 / gmin;
            CHECK(nonexistence_certificate(threshold * 1.001, spec, pi2));
            CHECK_FALSE(nonexistence_certificate(threshold * 0.999, spec, pi2));
            CHECK(threshold <= lambda_star_upper_bound(spec, pi2) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("uniqueness_ball_radius") {
    CHECK(uniqueness_ball_radius(make_spec(2, 1, 3)) == doctest::Approx(0.5));
    CHECK(uniqueness_ball_radius(make_spec(2, 1, 2)) ==
          doctest::Approx(0.62996).epsilon(1e-4));
    const ProblemSpec s = make_spec(3, 2, 4);
    CHECK(uniqueness_ball_radius(s) == doctest::Approx(0.5 * zeta(s)));
}

TEST_CASE("subsuper_constants") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    {
        const auto k = subsuper_constants(make_spec(2, 1, 3), 0.4, pi2);
        CHECK(k.eps0 == doctest::Approx(std::pow(2.0, -1.75)).epsilon(1e-12));
        CHECK(k.eps0 == doctest::Approx(0.29730).epsilon(1e-4));
        CHECK(k.M == doctest::Approx(2.0));
        // N0 by direct formula evaluation.
        const double expected =
            std::sqrt(pi2) * std::pow(0.4 / k.eps0, 2.0 / 2.0) + 1.0;
        CHECK(k.N0 == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(subsuper_constants(make_spec(3, 1, 4), 0.4, pi2).M ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(subsuper_constants(make_spec(2, 1, 3), 0.0, pi2), DomainError);
}
