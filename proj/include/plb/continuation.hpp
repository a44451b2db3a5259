#pragma once

#include "plb/mesh.hpp"
#include "plb/problem.hpp"
#include "plb/solve.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace plb {

struct BranchPoint {
    double lambda = 0.0;
    GridFunction u;
    double sup_norm = 0.0;
    double l2_norm = 0.0;
    double arclength = 0.0;
    int tangent_lambda_sign = 0; // -1, 0, +1
    double argmax_x = 0.0;
    bool converged = true;
};

enum class Termination { lambda_floor, norm_cap, step_failure, max_steps };

struct FoldInfo {
    double lambda_est = 0.0;
    std::size_t index = 0;
};

struct Branch {
    std::vector<BranchPoint> points;
    ProblemSpec spec;
    std::optional<FoldInfo> fold;
    Termination termination = Termination::max_steps;
    bool single_fold_shape = true; // at most one tangent sign change observed
};

struct ContinuationConfig {
    double ds_init = 1e-2;
    double ds_min = 1e-9;
    double ds_max = 0.25;
    int max_steps = 2000;
    double lambda_floor = 1e-7;
    double norm_cap = 1e3;
    double corrector_tol = 1e-9;
    int max_corrector = 10;
};

/// Traces Sigma_eps^n from the minimal branch at lambda = 10 lambda_floor by
/// secant predictor + bordered Newton corrector in the weighted (u, lambda)
/// metric (u scaled by 1/max(1, sup norm)). Adapts ds, records fold sign
/// flips, stops at lambda_floor / norm_cap / max_steps; ds underflow returns
/// the partial branch with termination = step_failure.
Branch trace_branch(const ProblemSpec& spec, std::shared_ptr<const Mesh1D> mesh,
                    const ContinuationConfig& cfg, const SolveOptions& opts = {});

struct FoldResult {
    double lambda_est = 0.0;
    std::size_t index = 0;
    GridFunction u_at_fold;
};

/// Lambda maximum refined by a 3-point parabolic fit in (s, lambda);
/// throws NoFoldError when the branch has no tangent sign flip.
FoldResult detect_fold(const Branch& branch);

/// Transversal crossings of the vertical line lambda = lambda_query by the
/// (lambda, sup_norm) polyline. Throws QueryTooCloseToFold within twice the
/// local lambda resolution of the fold.
int count_solutions_at(double lambda_query, const Branch& branch);

struct SweepEntry {
    double eps = 0.0;
    std::optional<double> lambda_eps;
    Termination termination = Termination::max_steps;
};

struct EpsilonSweepResult {
    std::vector<SweepEntry> entries;
    bool lambda_monotone = true; // nonincreasing along descending eps (1e-4 slack)
    std::optional<double> lambda_limit_estimate; // Richardson over the last 3
    double matched_lambda = 0.0;
    std::vector<double> matched_sup_distances; // consecutive-eps solution gaps
    bool matched_converging = true;
};

/// Traces one branch per eps (descending list), concurrently.
EpsilonSweepResult epsilon_sweep(const ProblemSpec& base,
                                 std::span<const double> eps_descending,
                                 std::shared_ptr<const Mesh1D> mesh,
                                 const ContinuationConfig& cfg,
                                 const SolveOptions& opts = {});

/// Fits lambda(s) to a constant over the tail sup_norm in [10 n, norm_cap]
/// of a finite-n branch; requires cfg.norm_cap >= 50 n and at least 10 tail
/// points (TailTooShort otherwise).
double truncation_asymptote_estimate(const ProblemSpec& spec,
                                     std::shared_ptr<const Mesh1D> mesh,
                                     const ContinuationConfig& cfg,
                                     const SolveOptions& opts = {});

/// min over branch points of dist(argmax u, {0, L}).
double max_location_trace(const Branch& branch);

/// Interpolate the pre-fold (minimal) segment of the branch at a given
/// lambda; nullopt when lambda is outside the segment's range.
std::optional<GridFunction> lower_branch_at(const Branch& branch, double lambda);

} // namespace plb
