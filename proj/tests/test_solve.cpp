#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "plb/eigenpair.hpp"
#include "plb/problem.hpp"
#include "plb/solve.hpp"

#include <cmath>
#include <random>

using namespace plb;

namespace {

ProblemSpec ref_spec() {
    ProblemSpec s;
    s.p = 2.0;
    s.q = 3.0;
    s.delta = 0.5;
    s.eps = 0.0;
    return s;
}

std::shared_ptr<const Mesh1D> ref_mesh(int n = 200) {
    return Mesh1D::create(n, 1.0, Grading::graded, 2.0);
}

} // namespace

TEST_CASE("torsion solution against the closed form") {
    auto mesh = ref_mesh(400);
    const auto e2 = torsion_solution(mesh, 2.0);
    CHECK(e2.sup_norm() == doctest::Approx(0.125).epsilon(8e-4));
    CHECK(std::fabs(e2.sup_norm() - 0.125) <= 1e-4);

    const auto e3 = torsion_solution(mesh, 3.0);
    const double cf3 = (2.0 / 3.0) * std::pow(0.5, 1.5);
    CHECK(std::fabs(e3.sup_norm() - cf3) <= 1e-3);

    // Symmetry on the symmetric mesh.
    const int n = e3.n();
    for (int i = 0; i < n / 2; ++i)
        CHECK(e3.v[static_cast<size_t>(i)] ==
              doctest::Approx(e3.v[static_cast<size_t>(n - 1 - i)]).epsilon(1e-12));

    // Nodal agreement with the closed form.
    for (int i = 0; i < n; i += 17)
        CHECK(e2.v[static_cast<size_t>(i)] ==
              doctest::Approx(oracle::torsion_closed_form(mesh->node(i + 1), 2.0, 1.0))
                  .epsilon(1e-8));
}

TEST_CASE("newton_solve on the regularized problem") {
    auto mesh = ref_mesh();
    const ProblemSpec spec = ref_spec();
    const double lambda = 1.0;

    auto mono = monotone_iteration_minimal(lambda, spec, mesh);
    REQUIRE(mono.ok());
    auto res = newton_solve(mono.u, lambda, spec, SolveOptions{});
    REQUIRE(res.ok());
    CHECK(res.residual_norm <= 1e-10);
    CHECK(sup_distance(res.u, mono.u) <= 1e-6);
    CHECK(res.u.interior_positive());

    CHECK_THROWS_AS(newton_solve(mono.u, 0.0, spec, SolveOptions{}), DomainError);
}

TEST_CASE("no convergence above the nonexistence threshold") {
    auto mesh = ref_mesh();
    const ProblemSpec spec = ref_spec();
    const auto eig = first_eigenpair(mesh, spec.p);
    const double lambda = 1.5 * eig.lambda1 / g_eps_minimizer(spec).g_min;
    REQUIRE(nonexistence_certificate(lambda, spec, eig.lambda1));

    const auto e2 = torsion_solution(mesh, spec.p);
    for (double scale : {0.1, 1.0, 10.0}) {
        GridFunction u0 = e2;
        for (auto& v : u0.v)
            v *= scale;
        auto res = newton_solve(u0, lambda, spec, SolveOptions{});
        CHECK_FALSE(res.ok());
    }
}

TEST_CASE("singular base problem scaling and comparison") {
    auto mesh = ref_mesh();
    ProblemSpec spec = ref_spec();

    const auto w1 = solve_singular_base(1.0, 0.0, spec, mesh);
    const double exponent = 1.0 / (spec.p - 1.0 + spec.delta);
    for (double lambda : {0.1, 0.01}) {
        const auto wl = solve_singular_base(lambda, 0.0, spec, mesh);
        const double predicted = std::pow(lambda, exponent) * w1.sup_norm();
        CHECK(wl.sup_norm() == doctest::Approx(predicted).epsilon(5e-3));

        // omega_{lambda,eps} <= lambda^{1/(p-1+delta)} omega_{1,0} pointwise.
        const auto we = solve_singular_base(lambda, 0.05, spec, mesh);
        for (size_t i = 0; i < we.v.size(); ++i)
            CHECK(we.v[i] <=
                  std::pow(lambda, exponent) * w1.v[i] + 1e-9);
    }

    // Monotone in eps.
    const auto wa = solve_singular_base(1.0, 0.01, spec, mesh);
    const auto wb = solve_singular_base(1.0, 0.1, spec, mesh);
    for (size_t i = 0; i < wa.v.size(); ++i)
        CHECK(wa.v[i] >= wb.v[i] - 1e-9);

    // Warm-start independence.
    SolveOptions opts;
    GridFunction s1(mesh), s2(mesh);
    for (int i = 0; i < s1.n(); ++i) {
        const double x = mesh->node(i + 1);
        s1.v[static_cast<size_t>(i)] = 0.1 * x * (1.0 - x);
        s2.v[static_cast<size_t>(i)] = 2.0 * x * (1.0 - x) + 0.05;
    }
    auto r1 = newton_general(s1, spec.p, SingularPlusFrozen(1.0, spec, {}), opts);
    auto r2 = newton_general(s2, spec.p, SingularPlusFrozen(1.0, spec, {}), opts);
    REQUIRE(r1.ok());
    REQUIRE(r2.ok());
    CHECK(sup_distance(r1.u, r2.u) <= 10.0 * opts.tol_residual);
}

TEST_CASE("monotone iteration: minimal branch behavior") {
    auto mesh = ref_mesh();
    const ProblemSpec spec = ref_spec();

    // lambda -> 0: the minimal solution hugs omega_{lambda,0}.
    const auto w1 = solve_singular_base(1.0, 0.0, spec, mesh);
    const double lambda = 1e-6;
    auto mono = monotone_iteration_minimal(lambda, spec, mesh);
    REQUIRE(mono.ok());
    const double predicted =
        std::pow(lambda, 1.0 / (spec.p - 1.0 + spec.delta)) * w1.sup_norm();
    CHECK(mono.u.sup_norm() == doctest::Approx(predicted).epsilon(1e-2));
    CHECK(mono.worst_monotonicity >= -1e-10);

    // The limit solves the full residual.
    const auto res = assemble_residual(mono.u, lambda, spec);
    double norm = 0.0;
    for (double v : res)
        norm = std::max(norm, std::fabs(v));
    SolveOptions opts;
    CHECK(norm <= 10.0 * opts.tol_fixedpoint);

    // Diverges (reports no_convergence) above the existence range.
    auto eig_mesh = ref_mesh(100);
    const auto eig = first_eigenpair(eig_mesh, spec.p);
    auto bad = monotone_iteration_minimal(
        2.0 * eig.lambda1 / g_eps_minimizer(spec).g_min, spec, eig_mesh);
    CHECK_FALSE(bad.ok());
}

TEST_CASE("newton is a contraction near solutions") {
    auto mesh = ref_mesh();
    const ProblemSpec spec = ref_spec();
    auto mono = monotone_iteration_minimal(0.5, spec, mesh);
    REQUIRE(mono.ok());
    auto base = newton_solve(mono.u, 0.5, spec, SolveOptions{});
    REQUIRE(base.ok());

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    GridFunction perturbed = base.u;
    for (auto& v : perturbed.v)
        v *= 1.0 + 1e-3 * noise(rng);
    auto re = newton_solve(perturbed, 0.5, spec, SolveOptions{});
    REQUIRE(re.ok());
    CHECK(sup_distance(re.u, base.u) <= 10.0 * SolveOptions{}.tol_residual);
}

TEST_CASE("sub/supersolution sandwich of the crossing lemma") {
    auto mesh = ref_mesh();
    ProblemSpec spec;
    spec.p = 2.0;
    spec.q = 3.0;
    spec.delta = 1.0;

    const auto eig = first_eigenpair(mesh, spec.p);
    const auto w10 = solve_singular_base(1.0, 0.0, spec, mesh);
    const auto consts = subsuper_constants(spec, w10.sup_norm(), eig.lambda1);

    spec.eps = 0.5 * consts.eps0;
    spec.n_trunc = std::ceil(consts.N0) + 1.0;
    const double lambda =
        eig.lambda1 / std::pow(spec.n_trunc, spec.q - spec.p + 1.0);

    const auto omega = solve_singular_base(lambda, spec.eps, spec, mesh);
    auto mono = monotone_iteration_minimal(lambda, spec, mesh);
    REQUIRE(mono.ok());
    for (size_t i = 0; i < omega.v.size(); ++i) {
        CHECK(mono.u.v[i] >= omega.v[i] - 1e-8);
        CHECK(mono.u.v[i] <= consts.M * omega.v[i] + 1e-8);
    }
}

TEST_CASE("sandwich_check envelope") {
    auto mesh = ref_mesh();
    ProblemSpec spec = ref_spec();
    spec.eps = 0.01;
    const double lambda = 1.0;

    auto mono = monotone_iteration_minimal(lambda, spec, mesh);
    REQUIRE(mono.ok());
    const auto eig = first_eigenpair(mesh, spec.p);
    const auto ep = torsion_solution(mesh, spec.p);

    const double norm = std::max(lambda, mono.u.sup_norm());
    const double R = 1.5 * norm, varrho = 0.5 * norm, r = varrho / 4.0;
    const auto ok =
        sandwich_check(mono.u, lambda, spec, eig.phi1, ep, R, varrho, r, eig.lambda1);
    CHECK(static_cast<bool>(ok));
    CHECK(ok.lower_margin >= 0.0);
    CHECK(ok.upper_margin >= 0.0);
    CHECK(ok.first_violation_node == -1);

    GridFunction inflated = mono.u;
    for (auto& v : inflated.v)
        v *= 10.0;
    const auto bad = sandwich_check(inflated, lambda, spec, eig.phi1, ep, R, varrho,
                                    r, eig.lambda1);
    CHECK_FALSE(static_cast<bool>(bad));
    CHECK(bad.first_violation_node >= 0);

    CHECK_THROWS_AS(sandwich_check(mono.u, lambda, spec, eig.phi1, ep, 0.5, 1.0, 0.1,
                                   eig.lambda1),
                    DomainError);
}

TEST_CASE("reaction_interval_max") {
    ProblemSpec spec = ref_spec(); // delta = 0.5, q = 3
    // On [r, R+1] the max sits at an endpoint; both candidates checked.
    const double v = reaction_interval_max(0.01, 2.0, spec);
    const double at_r = std::pow(0.01, -0.5) + std::pow(0.01, 3.0);
    const double at_R = std::pow(3.0, -0.5) + 27.0;
    CHECK(v == doctest::Approx(std::max(at_r, at_R)));
    CHECK_THROWS_AS(reaction_interval_max(0.0, 1.0, spec), DomainError);
}
