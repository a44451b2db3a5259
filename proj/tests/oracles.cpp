#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace plb::oracle {

ScalarMin brute_force_g_min(const ProblemSpec& spec) {
    auto g = [&](double t) {
        return (std::pow(t + spec.eps, -spec.delta) + std::pow(t, spec.q)) /
               std::pow(t, spec.p - 1.0);
    };
    const double z = zeta(spec);
    const double lo = std::log(z * 1e-3), hi = std::log(z * 1e3);
    const int grid = 20000;
    double best_t = z, best = g(z);
    for (int i = 0; i <= grid; ++i) {
        const double t = std::exp(lo + (hi - lo) * i / grid);
        const double v = g(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    // Golden-section polish around the grid winner.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_t * std::exp(-(hi - lo) / grid);
    double b = best_t * std::exp((hi - lo) / grid);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 200; ++it) {
        if (g(c) < g(d))
            b = d;
        else
            a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
        if (b - a < 1e-14 * best_t)
            break;
    }
    const double t = 0.5 * (a + b);
    return {t, g(t)};
}

double torsion_closed_form(double x, double p, double length) {
    const double a = 0.5 * length;
    const double e = p / (p - 1.0);
    const double xb = std::min(x, length - x); // distance to the boundary
    if (xb <= 0.0)
        return 0.0;
    // a^e - (a - xb)^e without cancellation near the boundary.
    return (p - 1.0) / p * std::pow(a, e) * (-std::expm1(e * std::log1p(-xb / a)));
}

double lambda1_closed_form(double p, double length) {
    const double pi_p = 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
    return (p - 1.0) * std::pow(pi_p, p) / std::pow(length, p);
}

} // namespace plb::oracle
