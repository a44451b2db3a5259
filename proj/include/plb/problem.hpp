#pragma once

#include "plb/errors.hpp"

#include <limits>

namespace plb {

/// One instance of the singular quasilinear problem family:
/// -div(|u'|^{p-2} u') = lambda [ (u+eps)^{-delta} + min(u,n)^{q-p+1} u^{p-1} ]
/// on (0, L) with zero boundary values. n_trunc = +infinity recovers the
/// untruncated reaction u^q; eps = 0 the genuinely singular problem.
struct ProblemSpec {
    double p = 2.0;
    double q = 3.0;
    double delta = 0.5;
    double eps = 0.0;
    double n_trunc = std::numeric_limits<double>::infinity();
    double domain_length = 1.0;

    bool truncated() const noexcept;
    void validate() const; // throws InvalidSpec
};

/// (u + eps)^{-delta}; DomainError if u + eps <= 0.
double singular_term(double u, const ProblemSpec& spec);

/// f_n(u) = min(u, n)^{q-p+1} u^{p-1}; u^q when n_trunc is infinite.
double truncated_power(double u, const ProblemSpec& spec);

/// d/du f_n(u): q u^{q-1} below the truncation, n^{q-p+1}(p-1)u^{p-2} above.
double truncated_power_deriv(double u, const ProblemSpec& spec);

/// zeta = ((p-1+delta)/(q-p+1))^{1/(q+delta)}
double zeta(const ProblemSpec& spec);

/// lambda_1 (zeta+1)^delta zeta^{p-1}
double lambda_star_upper_bound(const ProblemSpec& spec, double lambda1);

/// g_eps(t) = ((t+eps)^{-delta} + t^q) / t^{p-1}; DomainError if t <= 0.
double g_eps(double t, const ProblemSpec& spec);

/// h(t) = g_eps'(t) (the root function whose zero locates the minimum).
double g_eps_slope(double t, const ProblemSpec& spec);

struct GepsMinimum {
    double t_min;
    double g_min;
};

/// Global minimum of g_eps on (0, inf) by safeguarded bisection on
/// [zeta*1e-3, zeta*1e3] to relative tolerance 1e-12 plus one Newton polish.
GepsMinimum g_eps_minimizer(const ProblemSpec& spec);

/// True iff lambda * g_min > lambda_1: the spectral argument rules out any
/// solution at this lambda.
bool nonexistence_certificate(double lambda, const ProblemSpec& spec,
                              double lambda1);

/// zeta/2. Valid as a uniqueness radius only when eps < zeta/2.
double uniqueness_ball_radius(const ProblemSpec& spec);

struct SubSuperConstants {
    double eps0; // 2^{-q/((q+delta)(p-1)) - 1}
    double N0;   // lambda_1^{1/(q-p+1)} (|omega_{1,0}| / eps0)^{(p-1+delta)/(q-p+1)} + 1
    double M;    // 2^{1/(p-1)}
};

SubSuperConstants subsuper_constants(const ProblemSpec& spec, double omega10_sup,
                                     double lambda1);

} // namespace plb
