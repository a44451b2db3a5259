#pragma once

#include "plb/assembly.hpp"
#include "plb/mesh.hpp"
#include "plb/problem.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace plb {

struct SolveOptions {
    double tol_residual = 1e-10; // sup norm
    int max_newton = 50;
    double tol_fixedpoint = 1e-8; // sup norm of successive iterates
    int max_outer = 500;
    AssemblyOptions assembly{};
};

enum class SolveStatus { converged, no_convergence, positivity_loss, linear_failure };

struct NewtonTraceRecord {
    int iteration;
    double residual_norm;
    double damping;
};

using NewtonTrace = std::vector<NewtonTraceRecord>;

struct NewtonResult {
    SolveStatus status = SolveStatus::no_convergence;
    GridFunction u;
    int iterations = 0;
    double residual_norm = 0.0;

    bool ok() const noexcept { return status == SolveStatus::converged; }
};

/// Right-hand side of -div(|u'|^{p-2}u') = rhs(u), with its diagonal
/// derivative. positivity_shift() returns the eps whose positivity
/// u + eps > 0 the Newton damping must preserve (nullopt: unconstrained).
class ReactionModel {
public:
    virtual ~ReactionModel() = default;
    virtual void eval(AssemblyWorkspace& ws, std::span<const double> u,
                      std::span<double> out) const = 0;
    virtual void deriv(AssemblyWorkspace& ws, std::span<const double> u,
                       std::span<double> out) const = 0;
    virtual std::optional<double> positivity_shift() const { return std::nullopt; }
};

/// lambda [ (u+eps)^{-delta} + f_n(u) ]  — the full problem reaction.
class SpecReaction final : public ReactionModel {
public:
    SpecReaction(double lambda, ProblemSpec spec);
    void eval(AssemblyWorkspace&, std::span<const double>, std::span<double>) const override;
    void deriv(AssemblyWorkspace&, std::span<const double>, std::span<double>) const override;
    std::optional<double> positivity_shift() const override { return spec_.eps; }

private:
    double lambda_;
    ProblemSpec spec_;
};

/// Constant source (torsion problem has value 1).
class ConstSource final : public ReactionModel {
public:
    explicit ConstSource(double value) : value_(value) {}
    void eval(AssemblyWorkspace&, std::span<const double>, std::span<double>) const override;
    void deriv(AssemblyWorkspace&, std::span<const double>, std::span<double>) const override;

private:
    double value_;
};

/// Fixed nodal source vector (inverse power iteration inner problems).
class FixedSource final : public ReactionModel {
public:
    explicit FixedSource(std::vector<double> f) : f_(std::move(f)) {}
    void eval(AssemblyWorkspace&, std::span<const double>, std::span<double>) const override;
    void deriv(AssemblyWorkspace&, std::span<const double>, std::span<double>) const override;

private:
    std::vector<double> f_;
};

/// lambda (u+eps)^{-delta} + frozen_i — the monotone iteration's inner
/// problem: singular part implicit, superlinear part frozen.
class SingularPlusFrozen final : public ReactionModel {
public:
    SingularPlusFrozen(double lambda, ProblemSpec spec, std::vector<double> frozen);
    void eval(AssemblyWorkspace&, std::span<const double>, std::span<double>) const override;
    void deriv(AssemblyWorkspace&, std::span<const double>, std::span<double>) const override;
    std::optional<double> positivity_shift() const override { return spec_.eps; }

private:
    double lambda_;
    ProblemSpec spec_;
    std::vector<double> frozen_;
};

/// Damped Newton on -div(|u'|^{p-2}u') - rhs(u) = 0 with backtracking
/// (factor 1/2) and the positivity guard min(u)+eps > max(1e-14,
/// (min(u_prev)+eps)/2) when the model carries a shift.
NewtonResult newton_general(const GridFunction& u0, double p,
                            const ReactionModel& model, const SolveOptions& opts,
                            NewtonTrace* trace = nullptr);

/// Newton solve of the discrete (P_eps^n) system at fixed lambda > 0.
NewtonResult newton_solve(const GridFunction& u0, double lambda,
                          const ProblemSpec& spec, const SolveOptions& opts,
                          NewtonTrace* trace = nullptr);

/// Discrete torsion function e_p: -div(|u'|^{p-2}u') = 1.
GridFunction torsion_solution(std::shared_ptr<const Mesh1D> mesh, double p,
                              const SolveOptions& opts = {});

/// omega_{lambda,eps}: the only positive solution of
/// -div(|u'|^{p-2}u') = lambda (u+eps)^{-delta}. Falls back to an eps-ladder
/// of warm starts when the direct solve stalls.
GridFunction solve_singular_base(double lambda, double eps, const ProblemSpec& spec,
                                 std::shared_ptr<const Mesh1D> mesh,
                                 const SolveOptions& opts = {});

struct MonotoneResult {
    SolveStatus status = SolveStatus::no_convergence;
    GridFunction u;
    int outer_iterations = 0;
    double final_update = 0.0;
    double worst_monotonicity = 0.0; // most negative pointwise decrease seen

    bool ok() const noexcept { return status == SolveStatus::converged; }
};

/// Minimal solution at lambda by the frozen-source monotone iteration from
/// u_0 = 0; the first iterate is omega_{lambda,eps}. Diverging iterates
/// (sup u > 1e3 zeta) report no_convergence.
MonotoneResult monotone_iteration_minimal(double lambda, const ProblemSpec& spec,
                                          std::shared_ptr<const Mesh1D> mesh,
                                          const SolveOptions& opts = {});

struct SandwichResult {
    bool pass = false;
    int first_violation_node = -1; // interior index, -1 when pass
    double K1 = 0.0, K2 = 0.0, C_star = 0.0, K_tilde = 0.0, a = 0.0;
    double lower_margin = 0.0, upper_margin = 0.0; // min slack at any node
    explicit operator bool() const noexcept { return pass; }
};

/// Pointwise envelope check
///   lambda^{1/(p-1)} K1 phi1 <= u <= r + lambda^{1/(p-1)} K2^{1/(p-1)} e_p
/// with K1, K2, C_*, K_tilde, a built from (R, varrho, r) as in the a priori
/// estimate; phi1 must be sup-normalized.
SandwichResult sandwich_check(const GridFunction& u, double lambda,
                              const ProblemSpec& spec, const GridFunction& phi1,
                              const GridFunction& e_p, double R, double varrho,
                              double r, double lambda1);

/// max{ t^{-delta} + t^q : r <= t <= R+1 } by endpoint + critical point
/// evaluation on the closed interval.
double reaction_interval_max(double r, double R, const ProblemSpec& spec);

} // namespace plb
