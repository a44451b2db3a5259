#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "plb/eigenpair.hpp"
#include "plb/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace plb;

TEST_CASE("first eigenpair at p = 2") {
    auto mesh = Mesh1D::create(400, 1.0, Grading::graded, 2.0);
    const auto eig = first_eigenpair(mesh, 2.0);
    const double pi2 = std::numbers::pi * std::numbers::pi;

    CHECK(std::fabs(eig.lambda1 - pi2) <= 1e-3 * pi2);
    CHECK(eig.residual <= 1e-8);
    CHECK(eig.phi1.sup_norm() == doctest::Approx(1.0));
    CHECK(eig.phi1.interior_positive());

    // Against the shooting oracle (independent integration route).
    const double shoot = shooting_lambda1(2.0, 1.0);
    CHECK(std::fabs(eig.lambda1 - shoot) <= 1e-3 * shoot);
    CHECK(shoot == doctest::Approx(oracle::lambda1_closed_form(2.0, 1.0)).epsilon(1e-6));

    // phi1 ~ sin(pi x) and symmetric.
    const int n = eig.phi1.n();
    for (int i = 0; i < n; i += 13)
        CHECK(eig.phi1.v[static_cast<size_t>(i)] ==
              doctest::Approx(std::sin(std::numbers::pi * mesh->node(i + 1)))
                  .epsilon(2e-3));
    for (int i = 0; i < n / 2; ++i)
        CHECK(std::fabs(eig.phi1.v[static_cast<size_t>(i)] -
                        eig.phi1.v[static_cast<size_t>(n - 1 - i)]) <= 1e-6);
}

TEST_CASE("first eigenpair at p = 3") {
    auto mesh = Mesh1D::create(400, 1.0, Grading::graded, 2.0);
    const auto eig = first_eigenpair(mesh, 3.0);
    const double cf = oracle::lambda1_closed_form(3.0, 1.0);
    const double shoot = shooting_lambda1(3.0, 1.0);
    CHECK(std::fabs(eig.lambda1 - cf) <= 5e-3 * cf);
    CHECK(std::fabs(eig.lambda1 - shoot) <= 5e-3 * shoot);
    CHECK(shoot == doctest::Approx(cf).epsilon(1e-4));
    CHECK(eig.residual <= 1e-8);
}

TEST_CASE("domain scaling of lambda1") {
    for (double L : {0.5, 2.0}) {
        auto mesh = Mesh1D::create(300, L, Grading::uniform, 1.0);
        const auto eig = first_eigenpair(mesh, 2.0);
        const double expected =
            oracle::lambda1_closed_form(2.0, 1.0) / std::pow(L, 2.0);
        CHECK(std::fabs(eig.lambda1 - expected) <= 2e-3 * expected);
    }
}

TEST_CASE("rayleigh quotient") {
    auto mesh = Mesh1D::create(9, 1.0, Grading::uniform, 1.0);
    const double h = 0.1;

    // Hat function at p = 2, exact hand value 2/h^2 ... wait:
    // slopes are +-c/h on two interfaces, num = 2 c^2/h, den = c^2 h.
    GridFunction hat(mesh);
    hat.v[4] = 0.7;
    CHECK(rayleigh_quotient(hat, 2.0) == doctest::Approx(2.0 / (h * h)).epsilon(1e-12));

    // Zero-homogeneity.
    auto mesh2 = Mesh1D::create(150, 1.0, Grading::uniform, 1.0);
    const auto eig = first_eigenpair(mesh2, 2.0);
    GridFunction scaled = eig.phi1;
    for (auto& v : scaled.v)
        v *= 17.5;
    CHECK(rayleigh_quotient(scaled, 2.0) ==
          doctest::Approx(rayleigh_quotient(eig.phi1, 2.0)).epsilon(1e-12));

    // RQ(phi1) = lambda1 and variational minimality over random positives.
    CHECK(rayleigh_quotient(eig.phi1, 2.0) ==
          doctest::Approx(eig.lambda1).epsilon(1e-9));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        GridFunction v(mesh2);
        for (int i = 0; i < v.n(); ++i) {
            const double x = mesh2->node(i + 1);
            v.v[static_cast<size_t>(i)] = unit(rng) * x * (1.0 - x) + 0.01 * unit(rng);
        }
        CHECK(rayleigh_quotient(v, 2.0) >= eig.lambda1 - 1e-9);
    }

    GridFunction zero(mesh);
    CHECK_THROWS_AS(rayleigh_quotient(zero, 2.0), DomainError);
}

TEST_CASE("rayleigh quotient of iterates is nonincreasing") {
    auto mesh = Mesh1D::create(200, 1.0, Grading::uniform, 1.0);
    std::vector<double> trace;
    const auto eig = first_eigenpair(mesh, 2.5, SolveOptions{}, &trace);
    REQUIRE(trace.size() >= 3);
    for (size_t i = 2; i < trace.size(); ++i)
        CHECK(trace[i] <= trace[i - 1] + 1e-12 * trace[i - 1]);
    CHECK(eig.residual <= 1e-8);
}
