#include "plb/solve.hpp"

#include "plb/kernels.hpp"
#include "plb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plb {

SpecReaction::SpecReaction(double lambda, ProblemSpec spec)
    : lambda_(lambda), spec_(spec) {
    spec_.validate();
    if (!(lambda > 0.0))
        throw DomainError("reaction: lambda must be positive");
}

void SpecReaction::eval(AssemblyWorkspace& ws, std::span<const double> u,
                        std::span<double> out) const {
    detail::reaction_into(ws, u, lambda_, spec_, out);
}

void SpecReaction::deriv(AssemblyWorkspace& ws, std::span<const double> u,
                         std::span<double> out) const {
    detail::reaction_deriv_into(ws, u, lambda_, spec_, out);
}

void ConstSource::eval(AssemblyWorkspace&, std::span<const double>,
                       std::span<double> out) const {
    std::fill(out.begin(), out.end(), value_);
}

void ConstSource::deriv(AssemblyWorkspace&, std::span<const double>,
                        std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
}

void FixedSource::eval(AssemblyWorkspace&, std::span<const double>,
                       std::span<double> out) const {
    std::copy(f_.begin(), f_.end(), out.begin());
}

void FixedSource::deriv(AssemblyWorkspace&, std::span<const double>,
                        std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
}

SingularPlusFrozen::SingularPlusFrozen(double lambda, ProblemSpec spec,
                                       std::vector<double> frozen)
    : lambda_(lambda), spec_(spec), frozen_(std::move(frozen)) {
    spec_.validate();
    if (!(lambda > 0.0))
        throw DomainError("reaction: lambda must be positive");
}

void SingularPlusFrozen::eval(AssemblyWorkspace&, std::span<const double> u,
                              std::span<double> out) const {
    detail::check_reaction_domain(u, spec_);
    kern::shifted_pow_acc(u, spec_.eps, -spec_.delta, lambda_, false, out);
    if (!frozen_.empty())
        kern::axpy(1.0, frozen_, out);
}

void SingularPlusFrozen::deriv(AssemblyWorkspace&, std::span<const double> u,
                               std::span<double> out) const {
    detail::check_reaction_domain(u, spec_);
    kern::shifted_pow_acc(u, spec_.eps, -spec_.delta - 1.0,
                          -lambda_ * spec_.delta, false, out);
}

namespace {

constexpr double kPositivityFloor = 1e-14;

double positivity_step_limit(std::span<const double> u,
                             std::span<const double> du, double shift) {
    const double mprev = kern::min_val(u) + shift;
    const double theta = std::max(kPositivityFloor, 0.5 * mprev);
    double alpha = 1.0;
    for (size_t i = 0; i < u.size(); ++i) {
        if (du[i] < 0.0) {
            const double room = u[i] + shift - theta;
            if (room <= 0.0)
                return 0.0;
            alpha = std::min(alpha, 0.95 * room / (-du[i]));
        }
    }
    return alpha;
}

} // namespace

NewtonResult newton_general(const GridFunction& u0, double p,
                            const ReactionModel& model, const SolveOptions& opts,
                            NewtonTrace* trace) {
    NewtonResult result;
    result.u = u0;
    const Mesh1D& mesh = *result.u.mesh;
    const int n = result.u.n();

    AssemblyWorkspace ws;
    ws.resize(n);
    std::vector<double> res(static_cast<size_t>(n)), reac(static_cast<size_t>(n)),
        du(static_cast<size_t>(n)), trial(static_cast<size_t>(n)),
        res_trial(static_cast<size_t>(n)), work;
    Tridiag jac(n);

    auto eval_residual = [&](std::span<const double> u, std::span<double> out) {
        detail::apply_into(ws, mesh, u, p, opts.assembly, out);
        model.eval(ws, u, reac);
        kern::axpy(-1.0, reac, out);
    };

    eval_residual(result.u.v, res);
    double norm = kern::max_abs(res);
    const auto shift = model.positivity_shift();

    for (int it = 0; it < opts.max_newton; ++it) {
        if (trace)
            trace->push_back({it, norm, 1.0});
        if (norm <= opts.tol_residual) {
            result.status = SolveStatus::converged;
            result.iterations = it;
            result.residual_norm = norm;
            return result;
        }

        detail::operator_jacobian_into(ws, mesh, result.u.v, p, opts.assembly, jac);
        model.deriv(ws, result.u.v, reac);
        for (int i = 0; i < n; ++i)
            jac.diag[static_cast<size_t>(i)] -= reac[static_cast<size_t>(i)];

        std::transform(res.begin(), res.end(), du.begin(), std::negate<>());
        if (!thomas_solve(jac, du, work)) {
            result.status = SolveStatus::linear_failure;
            result.iterations = it;
            result.residual_norm = norm;
            return result;
        }

        double alpha = 1.0;
        if (shift) {
            alpha = positivity_step_limit(result.u.v, du, *shift);
            if (alpha <= 1e-12) {
                result.status = SolveStatus::positivity_loss;
                result.iterations = it;
                result.residual_norm = norm;
                return result;
            }
        }

        bool accepted = false;
        double trial_norm = norm;
        while (alpha > 1e-9) {
            for (int i = 0; i < n; ++i)
                trial[static_cast<size_t>(i)] =
                    result.u.v[static_cast<size_t>(i)] + alpha * du[static_cast<size_t>(i)];
            bool domain_ok = true;
            try {
                eval_residual(trial, res_trial);
            } catch (const DomainError&) {
                domain_ok = false;
            }
            if (domain_ok) {
                trial_norm = kern::max_abs(res_trial);
                if (std::isfinite(trial_norm) &&
                    trial_norm <= (1.0 - 1e-4 * alpha) * norm) {
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            result.status = SolveStatus::no_convergence;
            result.iterations = it + 1;
            result.residual_norm = norm;
            return result;
        }
        result.u.v.swap(trial);
        res.swap(res_trial);
        norm = trial_norm;
        if (trace)
            trace->back().damping = alpha;
    }
    result.status = SolveStatus::no_convergence;
    result.iterations = opts.max_newton;
    result.residual_norm = norm;
    return result;
}

NewtonResult newton_solve(const GridFunction& u0, double lambda,
                          const ProblemSpec& spec, const SolveOptions& opts,
                          NewtonTrace* trace) {
    if (!(lambda > 0.0))
        throw DomainError("newton_solve: lambda must be positive");
    return newton_general(u0, spec.p, SpecReaction(lambda, spec), opts, trace);
}

namespace {

GridFunction parabola_start(std::shared_ptr<const Mesh1D> mesh, double amplitude) {
    GridFunction u(mesh);
    const double L = mesh->length();
    for (int i = 0; i < u.n(); ++i) {
        const double x = mesh->node(i + 1);
        u.v[static_cast<size_t>(i)] = amplitude * 4.0 * x * (L - x) / (L * L);
    }
    return u;
}

} // namespace

GridFunction torsion_solution(std::shared_ptr<const Mesh1D> mesh, double p,
                              const SolveOptions& opts) {
    const double L = mesh->length();
    const double amp = (p - 1.0) / p * std::pow(0.5 * L, p / (p - 1.0));
    auto res = newton_general(parabola_start(mesh, amp), p, ConstSource(1.0), opts);
    if (!res.ok())
        throw ConvergenceError("torsion_solution: Newton failed (status " +
                               std::to_string(static_cast<int>(res.status)) + ")");
    return std::move(res.u);
}

GridFunction solve_singular_base(double lambda, double eps, const ProblemSpec& spec,
                                 std::shared_ptr<const Mesh1D> mesh,
                                 const SolveOptions& opts) {
    if (!(lambda > 0.0))
        throw DomainError("solve_singular_base: lambda must be positive");
    if (!(eps >= 0.0))
        throw DomainError("solve_singular_base: eps must be nonnegative");
    ProblemSpec base = spec;
    base.eps = eps;

    const double L = mesh->length();
    const double pm1 = spec.p - 1.0;
    const double curv = std::pow(8.0 / (L * L), pm1);
    auto start_amp = [&](double e) {
        const double amp = std::pow(lambda / curv, 1.0 / (pm1 + spec.delta));
        return std::max(amp, 0.5 * e);
    };

    auto solve_at = [&](double e, const GridFunction& u0) {
        ProblemSpec s = base;
        s.eps = e;
        return newton_general(u0, s.p, SingularPlusFrozen(lambda, s, {}), opts);
    };

    // Direct attempt, then a descending eps ladder of warm starts.
    auto direct = solve_at(eps, parabola_start(mesh, start_amp(eps)));
    if (direct.ok())
        return std::move(direct.u);

    double eps_k = std::max(eps, 0.1);
    GridFunction u = parabola_start(mesh, start_amp(eps_k));
    for (int level = 0; level < 64; ++level) {
        auto res = solve_at(eps_k, u);
        if (!res.ok())
            throw ConvergenceError("solve_singular_base: ladder solve failed at eps = " +
                                   std::to_string(eps_k));
        u = std::move(res.u);
        if (eps_k <= eps)
            return u;
        const double boundary_scale = std::max(kern::min_val(u.v), 0.0);
        double next = eps_k / 8.0;
        if (next <= std::max(eps, 1e-3 * boundary_scale) || next < 1e-14)
            next = eps;
        eps_k = std::max(next, eps);
    }
    throw ConvergenceError("solve_singular_base: eps ladder did not terminate");
}

MonotoneResult monotone_iteration_minimal(double lambda, const ProblemSpec& spec,
                                          std::shared_ptr<const Mesh1D> mesh,
                                          const SolveOptions& opts) {
    if (!(lambda > 0.0))
        throw DomainError("monotone_iteration_minimal: lambda must be positive");
    spec.validate();

    MonotoneResult out;
    const double cap = 1e3 * zeta(spec);

    GridFunction u_prev = solve_singular_base(lambda, spec.eps, spec, mesh, opts);
    out.outer_iterations = 1;
    std::vector<double> frozen(u_prev.v.size(), 0.0);

    for (int k = 2; k <= opts.max_outer; ++k) {
        std::fill(frozen.begin(), frozen.end(), 0.0);
        kern::trunc_pow_acc(u_prev.v, spec.n_trunc, spec.q - spec.p + 1.0,
                            spec.p - 1.0, lambda, frozen);
        auto res = newton_general(u_prev, spec.p,
                                  SingularPlusFrozen(lambda, spec, frozen), opts);
        if (!res.ok()) {
            out.status = res.status;
            out.u = std::move(u_prev);
            out.outer_iterations = k;
            return out;
        }
        double worst = 0.0, update = 0.0;
        for (size_t i = 0; i < frozen.size(); ++i) {
            const double diff = res.u.v[i] - u_prev.v[i];
            worst = std::min(worst, diff);
            update = std::max(update, std::fabs(diff));
        }
        out.worst_monotonicity = std::min(out.worst_monotonicity, worst);
        u_prev = std::move(res.u);
        out.outer_iterations = k;
        out.final_update = update;
        if (u_prev.sup_norm() > cap) {
            out.status = SolveStatus::no_convergence;
            out.u = std::move(u_prev);
            return out;
        }
        if (update <= opts.tol_fixedpoint) {
            out.status = SolveStatus::converged;
            out.u = std::move(u_prev);
            return out;
        }
    }
    out.status = SolveStatus::no_convergence;
    out.u = std::move(u_prev);
    return out;
}

double reaction_interval_max(double r, double R, const ProblemSpec& spec) {
    if (!(r > 0.0) || !(R + 1.0 > r))
        throw DomainError("reaction_interval_max: need 0 < r <= R + 1");
    auto f = [&](double t) {
        return std::pow(t, -spec.delta) + std::pow(t, spec.q);
    };
    double out = std::max(f(r), f(R + 1.0));
    const double t_crit = std::pow(spec.delta / spec.q, 1.0 / (spec.q + spec.delta));
    if (t_crit > r && t_crit < R + 1.0)
        out = std::max(out, f(t_crit));
    return out;
}

SandwichResult sandwich_check(const GridFunction& u, double lambda,
                              const ProblemSpec& spec, const GridFunction& phi1,
                              const GridFunction& e_p, double R, double varrho,
                              double r, double lambda1) {
    if (!(varrho > 0.0) || !(R > varrho))
        throw DomainError("sandwich_check: need 0 < varrho < R");
    if (!(r > 0.0) || !(r <= R))
        throw DomainError("sandwich_check: need r in (0, R]");

    SandwichResult out;
    out.K2 = reaction_interval_max(r, R, spec);

    const double sup_ep = e_p.sup_norm();
    const double K2_quarter = reaction_interval_max(varrho / 4.0, R, spec);
    out.C_star = std::min(std::pow(varrho / (4.0 * sup_ep), spec.p - 1.0) / K2_quarter,
                          varrho / 4.0);
    out.K_tilde = 2.0 * std::max(R, lambda1 / out.C_star);

    // a: the decreasing part of psi(t) = ((t+1)^{-delta} + t^q)/t^{p-1} stays
    // above K_tilde exactly on (0, a); capped at the minimizer when psi never
    // dips below K_tilde.
    ProblemSpec unit = spec;
    unit.eps = 1.0;
    const double t_min1 = g_eps_minimizer(unit).t_min;
    if (g_eps(t_min1, unit) >= out.K_tilde) {
        out.a = t_min1;
    } else {
        double hi = t_min1, lo = t_min1;
        for (int it = 0; it < 4000 && g_eps(lo, unit) < out.K_tilde; ++it)
            lo *= 0.5;
        if (!(g_eps(lo, unit) >= out.K_tilde))
            throw ConvergenceError("sandwich_check: failed to bracket a");
        for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (g_eps(mid, unit) >= out.K_tilde)
                lo = mid;
            else
                hi = mid;
        }
        out.a = lo;
    }
    out.K1 = out.a / (2.0 * std::pow(out.K_tilde, 1.0 / (spec.p - 1.0)) *
                      phi1.sup_norm());

    const double lam_pow = std::pow(lambda, 1.0 / (spec.p - 1.0));
    const double k2_pow = std::pow(out.K2, 1.0 / (spec.p - 1.0));
    double lower_margin = std::numeric_limits<double>::infinity();
    double upper_margin = std::numeric_limits<double>::infinity();
    out.pass = true;
    for (int i = 0; i < u.n(); ++i) {
        const size_t k = static_cast<size_t>(i);
        const double lo = lam_pow * out.K1 * phi1.v[k];
        const double hi = r + lam_pow * k2_pow * e_p.v[k];
        const double ml = u.v[k] - lo;
        const double mh = hi - u.v[k];
        lower_margin = std::min(lower_margin, ml);
        upper_margin = std::min(upper_margin, mh);
        if ((ml < 0.0 || mh < 0.0) && out.pass) {
            out.pass = false;
            out.first_violation_node = i;
        }
    }
    out.lower_margin = lower_margin;
    out.upper_margin = upper_margin;
    return out;
}

} // namespace plb
