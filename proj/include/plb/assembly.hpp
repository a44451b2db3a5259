#pragma once

#include "plb/mesh.hpp"
#include "plb/problem.hpp"

#include <span>
#include <vector>

namespace plb {

struct AssemblyOptions {
    bool regularize_flux = true; // eta-regularized flux (off for convergence studies)
    double eta_rel = 1e-8;       // eta = eta_rel * max slope magnitude
};

/// Tridiagonal coefficient table: sub/sup of length N-1, diag of length N.
struct Tridiag {
    std::vector<double> sub, diag, sup;
    explicit Tridiag(int n = 0)
        : sub(n > 0 ? static_cast<size_t>(n - 1) : 0, 0.0),
          diag(static_cast<size_t>(n), 0.0),
          sup(n > 0 ? static_cast<size_t>(n - 1) : 0, 0.0) {}
    int n() const noexcept { return static_cast<int>(diag.size()); }
};

/// Scratch buffers reused across assemblies of one solve.
struct AssemblyWorkspace {
    std::vector<double> u_ext;   // N+2 with boundary zeros
    std::vector<double> s;       // N+1 interface slopes
    std::vector<double> f;       // N+1 interface fluxes (or their derivative)
    std::vector<double> r;       // N reaction values / derivatives
    void resize(int n);
};

/// Discrete -div(|u'|^{p-2} u') with eta-regularized flux, per interior node.
std::vector<double> p_laplacian_apply(const GridFunction& u, double p,
                                      const AssemblyOptions& opts = {});

/// p_laplacian_apply(u) - lambda [ (u+eps)^{-delta} + f_n(u) ] per node.
/// DomainError if any u_i + eps <= 0.
std::vector<double> assemble_residual(const GridFunction& u, double lambda,
                                      const ProblemSpec& spec,
                                      const AssemblyOptions& opts = {});

/// Exact derivative of assemble_residual with respect to the nodal values.
Tridiag assemble_jacobian(const GridFunction& u, double lambda,
                          const ProblemSpec& spec,
                          const AssemblyOptions& opts = {});

// Workspace-based cores used by the solvers (no allocation after warmup).
namespace detail {

double flux_eta(std::span<const double> slopes, double p,
                const AssemblyOptions& opts);

void apply_into(AssemblyWorkspace& ws, const Mesh1D& mesh,
                std::span<const double> u, double p, const AssemblyOptions& opts,
                std::span<double> out);

void reaction_into(AssemblyWorkspace& ws, std::span<const double> u, double lambda,
                   const ProblemSpec& spec, std::span<double> out);

void reaction_deriv_into(AssemblyWorkspace& ws, std::span<const double> u,
                         double lambda, const ProblemSpec& spec,
                         std::span<double> out);

void residual_into(AssemblyWorkspace& ws, const Mesh1D& mesh,
                   std::span<const double> u, double lambda,
                   const ProblemSpec& spec, const AssemblyOptions& opts,
                   std::span<double> out);

/// Jacobian of p_laplacian_apply alone (no reaction part).
void operator_jacobian_into(AssemblyWorkspace& ws, const Mesh1D& mesh,
                            std::span<const double> u, double p,
                            const AssemblyOptions& opts, Tridiag& jac);

void jacobian_into(AssemblyWorkspace& ws, const Mesh1D& mesh,
                   std::span<const double> u, double lambda,
                   const ProblemSpec& spec, const AssemblyOptions& opts,
                   Tridiag& jac);

void check_reaction_domain(std::span<const double> u, const ProblemSpec& spec);

} // namespace detail

} // namespace plb
