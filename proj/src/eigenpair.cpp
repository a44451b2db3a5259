#include "plb/eigenpair.hpp"

#include "plb/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace plb {

double rayleigh_quotient(const GridFunction& u, double p) {
    const Mesh1D& mesh = *u.mesh;
    const int n = u.n();
    std::vector<double> u_ext(static_cast<size_t>(n) + 2, 0.0);
    std::copy(u.v.begin(), u.v.end(), u_ext.begin() + 1);
    std::vector<double> s(static_cast<size_t>(n) + 1, 0.0);
    kern::slopes(u_ext, mesh.inv_h_if(), s);

    const double den = kern::sum_abs_pow_w(u.v, mesh.h_c(), p);
    if (den == 0.0)
        throw DomainError("rayleigh_quotient: zero function");
    const double num = kern::sum_abs_pow_w(s, mesh.h_if(), p);
    return num / den;
}

namespace {

double eigen_residual(AssemblyWorkspace& ws, const GridFunction& phi, double p,
                      double lambda, const SolveOptions& opts) {
    const int n = phi.n();
    std::vector<double> apply(static_cast<size_t>(n));
    detail::apply_into(ws, *phi.mesh, phi.v, p, opts.assembly, apply);
    std::vector<double> rhs(static_cast<size_t>(n), 0.0);
    kern::shifted_pow_acc(phi.v, 0.0, p - 1.0, lambda, false, rhs);
    kern::axpy(-1.0, rhs, apply);
    return kern::max_abs(apply);
}

} // namespace

EigenResult first_eigenpair(std::shared_ptr<const Mesh1D> mesh, double p,
                            const SolveOptions& opts,
                            std::vector<double>* rq_trace) {
    if (!(p > 1.0))
        throw InvalidSpec("first_eigenpair: require p > 1");

    const int n = mesh->n();
    const double L = mesh->length();
    GridFunction v(mesh);
    for (int i = 0; i < n; ++i) {
        const double x = mesh->node(i + 1);
        v.v[static_cast<size_t>(i)] = 4.0 * x * (L - x) / (L * L);
    }

    AssemblyWorkspace ws;
    ws.resize(n);
    std::vector<double> rhs(static_cast<size_t>(n), 0.0);

    double lambda = rayleigh_quotient(v, p);
    if (rq_trace)
        rq_trace->push_back(lambda);
    GridFunction w = v;
    const int cap = 500;
    for (int it = 1; it <= cap; ++it) {
        std::fill(rhs.begin(), rhs.end(), 0.0);
        kern::shifted_pow_acc(v.v, 0.0, p - 1.0, 1.0, false, rhs);
        // Warm start at the expected magnitude lambda^{-1/(p-1)} v.
        GridFunction guess = v;
        const double scale = std::pow(std::max(lambda, 1e-12), -1.0 / (p - 1.0));
        for (auto& val : guess.v)
            val *= scale;
        auto res = newton_general(guess, p, FixedSource(rhs), opts);
        if (!res.ok())
            throw ConvergenceError("first_eigenpair: inner solve failed at iteration " +
                                   std::to_string(it));
        w = std::move(res.u);
        const double sup = w.sup_norm();
        if (!(sup > 0.0))
            throw ConvergenceError("first_eigenpair: iterate collapsed to zero");
        for (auto& val : w.v)
            val /= sup;
        const double lambda_next = rayleigh_quotient(w, p);
        if (rq_trace)
            rq_trace->push_back(lambda_next);
        const double rel_change = std::fabs(lambda_next - lambda) /
                                  std::max(lambda_next, 1e-300);
        v = w;
        lambda = lambda_next;
        if (rel_change < 1e-10) {
            const double resid = eigen_residual(ws, v, p, lambda, opts);
            if (resid <= 1e-8) {
                EigenResult out;
                out.lambda1 = lambda;
                out.phi1 = std::move(v);
                out.residual = resid;
                out.iterations = it;
                return out;
            }
        }
    }
    throw ConvergenceError("first_eigenpair: iteration cap reached");
}

} // namespace plb
