#pragma once

#include "plb/assembly.hpp"

#include <span>
#include <vector>

namespace plb {

/// Thomas elimination; rhs is overwritten with the solution.
/// Returns false on a pivot smaller than pivot_rel times the matrix scale.
bool thomas_solve(const Tridiag& a, std::span<double> rhs,
                  std::vector<double>& work, double pivot_rel = 1e-14);

/// Solves the bordered system
///   [ J      col ] [du     ]   [rhs_u]
///   [ row^T  d   ] [dlambda] = [rhs_c]
/// by block elimination (two tridiagonal solves), falling back to a dense
/// partially pivoted LU when the tridiagonal part is near singular.
bool bordered_solve(const Tridiag& jac, std::span<const double> col,
                    std::span<const double> row, double d,
                    std::span<const double> rhs_u, double rhs_c,
                    std::span<double> du, double& dlambda);

} // namespace plb
