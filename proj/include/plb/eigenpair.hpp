#pragma once

#include "plb/mesh.hpp"
#include "plb/solve.hpp"

#include <memory>

namespace plb {

struct EigenResult {
    double lambda1 = 0.0;
    GridFunction phi1;     // positive interior, sup norm 1
    double residual = 0.0; // sup norm of -div(|phi'|^{p-2}phi') - lambda1 phi^{p-1}
    int iterations = 0;
};

/// (sum |du/dx|^p h over interfaces) / (sum |u|^p h over nodes).
double rayleigh_quotient(const GridFunction& u, double p);

/// First eigenpair of the 1D p-Laplacian with zero boundary values by inverse
/// power iteration: solve -div(|w'|^{p-2}w') = v_k^{p-1} with sup(v_k) = 1,
/// normalize, and take the Rayleigh quotient limit. Stops when successive
/// eigenvalue estimates differ by < 1e-10 relative and the eigen residual is
/// below 1e-8; throws ConvergenceError past the iteration cap.
/// rq_trace, when given, receives the Rayleigh quotient of every iterate.
EigenResult first_eigenpair(std::shared_ptr<const Mesh1D> mesh, double p,
                            const SolveOptions& opts = {},
                            std::vector<double>* rq_trace = nullptr);

} // namespace plb
