#include "plb/assembly.hpp"

#include "plb/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace plb {

void AssemblyWorkspace::resize(int n) {
    u_ext.assign(static_cast<size_t>(n) + 2, 0.0);
    s.assign(static_cast<size_t>(n) + 1, 0.0);
    f.assign(static_cast<size_t>(n) + 1, 0.0);
    r.assign(static_cast<size_t>(n), 0.0);
}

namespace detail {

void check_reaction_domain(std::span<const double> u, const ProblemSpec& spec) {
    if (!(kern::min_val(u) + spec.eps > 0.0))
        throw DomainError("assembly: some u_i + eps <= 0");
}

double flux_eta(std::span<const double> slopes, double p,
                const AssemblyOptions& opts) {
    if (!opts.regularize_flux || p == 2.0)
        return 0.0;
    const double scale = kern::max_abs(slopes);
    return opts.eta_rel * (scale > 0.0 ? scale : 1.0);
}

namespace {

void prepare_slopes(AssemblyWorkspace& ws, const Mesh1D& mesh,
                    std::span<const double> u) {
    const int n = static_cast<int>(u.size());
    if (static_cast<int>(ws.r.size()) != n)
        ws.resize(n);
    std::copy(u.begin(), u.end(), ws.u_ext.begin() + 1);
    ws.u_ext.front() = 0.0;
    ws.u_ext.back() = 0.0;
    kern::slopes(ws.u_ext, mesh.inv_h_if(), ws.s);
}

} // namespace

void apply_into(AssemblyWorkspace& ws, const Mesh1D& mesh,
                std::span<const double> u, double p, const AssemblyOptions& opts,
                std::span<double> out) {
    prepare_slopes(ws, mesh, u);
    const double eta = flux_eta(ws.s, p, opts);
    kern::flux(ws.s, p, eta, ws.f);
    kern::flux_divergence(ws.f, mesh.inv_h_c(), out);
}

void reaction_into(AssemblyWorkspace& ws, std::span<const double> u, double lambda,
                   const ProblemSpec& spec, std::span<double> out) {
    (void)ws;
    check_reaction_domain(u, spec);
    kern::shifted_pow_acc(u, spec.eps, -spec.delta, lambda, false, out);
    kern::trunc_pow_acc(u, spec.n_trunc, spec.q - spec.p + 1.0, spec.p - 1.0,
                        lambda, out);
}

void reaction_deriv_into(AssemblyWorkspace& ws, std::span<const double> u,
                         double lambda, const ProblemSpec& spec,
                         std::span<double> out) {
    (void)ws;
    check_reaction_domain(u, spec);
    kern::shifted_pow_acc(u, spec.eps, -spec.delta - 1.0, -lambda * spec.delta,
                          false, out);
    kern::trunc_pow_deriv_acc(u, spec.n_trunc, spec.q, spec.p, lambda, out);
}

void residual_into(AssemblyWorkspace& ws, const Mesh1D& mesh,
                   std::span<const double> u, double lambda,
                   const ProblemSpec& spec, const AssemblyOptions& opts,
                   std::span<double> out) {
    apply_into(ws, mesh, u, spec.p, opts, out);
    reaction_into(ws, u, lambda, spec, ws.r);
    kern::axpy(-1.0, ws.r, out);
}

void operator_jacobian_into(AssemblyWorkspace& ws, const Mesh1D& mesh,
                            std::span<const double> u, double p,
                            const AssemblyOptions& opts, Tridiag& jac) {
    const int n = static_cast<int>(u.size());
    if (jac.n() != n)
        jac = Tridiag(n);
    prepare_slopes(ws, mesh, u);
    const double eta = flux_eta(ws.s, p, opts);
    kern::flux_deriv(ws.s, p, eta, ws.f);

    const auto inv_h_if = mesh.inv_h_if();
    const auto inv_h_c = mesh.inv_h_c();
    // dF_j scaled by the interface width once.
    for (int j = 0; j <= n; ++j)
        ws.f[static_cast<size_t>(j)] *= inv_h_if[static_cast<size_t>(j)];

    for (int i = 0; i < n; ++i) {
        const double wl = ws.f[static_cast<size_t>(i)];
        const double wr = ws.f[static_cast<size_t>(i) + 1];
        const double ihc = inv_h_c[static_cast<size_t>(i)];
        jac.diag[static_cast<size_t>(i)] = (wl + wr) * ihc;
        if (i > 0)
            jac.sub[static_cast<size_t>(i - 1)] = -wl * ihc;
        if (i < n - 1)
            jac.sup[static_cast<size_t>(i)] = -wr * ihc;
    }
}

void jacobian_into(AssemblyWorkspace& ws, const Mesh1D& mesh,
                   std::span<const double> u, double lambda,
                   const ProblemSpec& spec, const AssemblyOptions& opts,
                   Tridiag& jac) {
    const int n = static_cast<int>(u.size());
    operator_jacobian_into(ws, mesh, u, spec.p, opts, jac);
    reaction_deriv_into(ws, u, lambda, spec, ws.r);
    for (int i = 0; i < n; ++i)
        jac.diag[static_cast<size_t>(i)] -= ws.r[static_cast<size_t>(i)];
}

} // namespace detail

std::vector<double> p_laplacian_apply(const GridFunction& u, double p,
                                      const AssemblyOptions& opts) {
    AssemblyWorkspace ws;
    std::vector<double> out(u.v.size(), 0.0);
    detail::apply_into(ws, *u.mesh, u.v, p, opts, out);
    return out;
}

std::vector<double> assemble_residual(const GridFunction& u, double lambda,
                                      const ProblemSpec& spec,
                                      const AssemblyOptions& opts) {
    AssemblyWorkspace ws;
    std::vector<double> out(u.v.size(), 0.0);
    detail::residual_into(ws, *u.mesh, u.v, lambda, spec, opts, out);
    return out;
}

Tridiag assemble_jacobian(const GridFunction& u, double lambda,
                          const ProblemSpec& spec, const AssemblyOptions& opts) {
    AssemblyWorkspace ws;
    Tridiag jac(u.n());
    detail::jacobian_into(ws, *u.mesh, u.v, lambda, spec, opts, jac);
    return jac;
}

} // namespace plb
