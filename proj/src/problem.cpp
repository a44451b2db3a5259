#include "plb/problem.hpp"

#include <cmath>
#include <string>

namespace plb {

bool ProblemSpec::truncated() const noexcept { return std::isfinite(n_trunc); }

void ProblemSpec::validate() const {
    if (!(p > 1.0) || !std::isfinite(p))
        throw InvalidSpec("spec: require 1 < p < inf, got p = " + std::to_string(p));
    if (!(q > p - 1.0) || !std::isfinite(q))
        throw InvalidSpec("spec: require q > p - 1, got q = " + std::to_string(q));
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw InvalidSpec("spec: require delta > 0, got delta = " + std::to_string(delta));
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw InvalidSpec("spec: require eps >= 0, got eps = " + std::to_string(eps));
    if (std::isfinite(n_trunc) && !(n_trunc >= 1.0))
        throw InvalidSpec("spec: require n_trunc >= 1 when finite, got n = " +
                          std::to_string(n_trunc));
    if (!(domain_length > 0.0) || !std::isfinite(domain_length))
        throw InvalidSpec("spec: require domain_length > 0");
}

double singular_term(double u, const ProblemSpec& spec) {
    const double base = u + spec.eps;
    if (!(base > 0.0))
        throw DomainError("singular_term: u + eps <= 0 (u = " + std::to_string(u) +
                          ", eps = " + std::to_string(spec.eps) + ")");
    return std::pow(base, -spec.delta);
}

double truncated_power(double u, const ProblemSpec& spec) {
    if (u == 0.0)
        return 0.0;
    if (!spec.truncated() || u <= spec.n_trunc)
        return std::pow(u, spec.q);
    return std::pow(spec.n_trunc, spec.q - spec.p + 1.0) * std::pow(u, spec.p - 1.0);
}

double truncated_power_deriv(double u, const ProblemSpec& spec) {
    if (!spec.truncated() || u <= spec.n_trunc)
        return spec.q * std::pow(u, spec.q - 1.0);
    return std::pow(spec.n_trunc, spec.q - spec.p + 1.0) * (spec.p - 1.0) *
           std::pow(u, spec.p - 2.0);
}

double zeta(const ProblemSpec& spec) {
    return std::pow((spec.p - 1.0 + spec.delta) / (spec.q - spec.p + 1.0),
                    1.0 / (spec.q + spec.delta));
}

double lambda_star_upper_bound(const ProblemSpec& spec, double lambda1) {
    const double z = zeta(spec);
    return lambda1 * std::pow(z + 1.0, spec.delta) * std::pow(z, spec.p - 1.0);
}

double g_eps(double t, const ProblemSpec& spec) {
    if (!(t > 0.0))
        throw DomainError("g_eps: t <= 0");
    return (std::pow(t + spec.eps, -spec.delta) + std::pow(t, spec.q)) /
           std::pow(t, spec.p - 1.0);
}

double g_eps_slope(double t, const ProblemSpec& spec) {
    if (!(t > 0.0))
        throw DomainError("g_eps_slope: t <= 0");
    const double d = spec.delta, p = spec.p, q = spec.q, e = spec.eps;
    return -d * std::pow(t + e, -d - 1.0) * std::pow(t, 1.0 - p) +
           (1.0 - p) * std::pow(t + e, -d) * std::pow(t, -p) +
           (q - p + 1.0) * std::pow(t, q - p);
}

namespace {

double g_eps_slope_deriv(double t, const ProblemSpec& spec) {
    const double d = spec.delta, p = spec.p, q = spec.q, e = spec.eps;
    const double a = std::pow(t + e, -d - 2.0), b = std::pow(t + e, -d - 1.0),
                 c = std::pow(t + e, -d);
    return d * (d + 1.0) * a * std::pow(t, 1.0 - p) -
           2.0 * d * (1.0 - p) * b * std::pow(t, -p) -
           p * (1.0 - p) * c * std::pow(t, -p - 1.0) +
           (q - p + 1.0) * (q - p) * std::pow(t, q - p - 1.0);
}

} // namespace

GepsMinimum g_eps_minimizer(const ProblemSpec& spec) {
    spec.validate();
    const double z = zeta(spec);
    double lo = z * 1e-3, hi = z * 1e3;
    double flo = g_eps_slope(lo, spec), fhi = g_eps_slope(hi, spec);
    if (!(flo < 0.0) || !(fhi > 0.0))
        throw ConvergenceError("g_eps_minimizer: slope does not change sign on the bracket");
    double mid = lo;
    const int cap = 200;
    int it = 0;
    for (; it < cap; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = g_eps_slope(mid, spec);
        if (fm < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * mid)
            break;
    }
    if (it == cap)
        throw ConvergenceError("g_eps_minimizer: bisection cap reached");
    double t = 0.5 * (lo + hi);
    const double dh = g_eps_slope_deriv(t, spec);
    if (dh > 0.0) {
        const double t_polish = t - g_eps_slope(t, spec) / dh;
        if (t_polish > lo * 0.5 && t_polish < hi * 2.0 && t_polish > 0.0)
            t = t_polish;
    }
    GepsMinimum out{t, g_eps(t, spec)};

    // Postconditions from the minimum bracket and the floor bound.
    const double slack = 1e-9 * z;
    if (spec.eps < z) {
        if (!(out.t_min > z - spec.eps - slack && out.t_min < z + slack))
            throw ConvergenceError("g_eps_minimizer: t_min outside (zeta - eps, zeta)");
    }
    const double floor =
        std::pow(z + 1.0, -spec.delta) * std::pow(z, 1.0 - spec.p);
    if (!(out.g_min >= floor * (1.0 - 1e-12)))
        throw ConvergenceError("g_eps_minimizer: g_min below its lower bound");
    return out;
}

bool nonexistence_certificate(double lambda, const ProblemSpec& spec,
                              double lambda1) {
    return lambda * g_eps_minimizer(spec).g_min > lambda1;
}

double uniqueness_ball_radius(const ProblemSpec& spec) { return 0.5 * zeta(spec); }

SubSuperConstants subsuper_constants(const ProblemSpec& spec, double omega10_sup,
                                     double lambda1) {
    if (!(omega10_sup > 0.0))
        throw DomainError("subsuper_constants: omega10_sup must be positive");
    const double p = spec.p, q = spec.q, d = spec.delta;
    SubSuperConstants out;
    out.eps0 = std::pow(2.0, -q / ((q + d) * (p - 1.0)) - 1.0);
    out.N0 = std::pow(lambda1, 1.0 / (q - p + 1.0)) *
                 std::pow(omega10_sup / out.eps0, (p - 1.0 + d) / (q - p + 1.0)) +
             1.0;
    out.M = std::pow(2.0, 1.0 / (p - 1.0));
    return out;
}

} // namespace plb
