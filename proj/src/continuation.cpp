#include "plb/continuation.hpp"

#include "plb/kernels.hpp"
#include "plb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

namespace plb {

namespace {

double weighted_ip(std::span<const double> du, double dl,
                   std::span<const double> dv, double dm,
                   std::span<const double> h_c, double sigma) {
    return sigma * sigma * kern::dot_w(du, dv, h_c) + dl * dm;
}

BranchPoint make_point(double lambda, GridFunction u, double s, int sign) {
    BranchPoint p;
    p.lambda = lambda;
    p.sup_norm = u.sup_norm();
    p.l2_norm = u.l2_norm();
    p.argmax_x = u.argmax_x();
    p.arclength = s;
    p.tangent_lambda_sign = sign;
    p.converged = true;
    p.u = std::move(u);
    return p;
}

struct CorrectorOutcome {
    bool ok = false;
    GridFunction u;
    double lambda = 0.0;
    int iterations = 0;
};

// Newton on the bordered system  R(u, lambda) = 0,  <t, y - y_base>_w = ds.
CorrectorOutcome correct(const ProblemSpec& spec, const Mesh1D& mesh,
                         AssemblyWorkspace& ws, const GridFunction& u_pred,
                         double lambda_pred, const BranchPoint& base,
                         std::span<const double> tan_u, double tan_l, double ds,
                         double sigma, const ContinuationConfig& cfg,
                         const SolveOptions& opts) {
    const int n = u_pred.n();
    CorrectorOutcome out;
    out.u = u_pred;
    out.lambda = lambda_pred;

    std::vector<double> res(static_cast<size_t>(n)), col(static_cast<size_t>(n)),
        row(static_cast<size_t>(n)), du(static_cast<size_t>(n)),
        dy(static_cast<size_t>(n));
    Tridiag jac(n);
    const auto h_c = mesh.h_c();
    for (int i = 0; i < n; ++i)
        row[static_cast<size_t>(i)] =
            sigma * sigma * tan_u[static_cast<size_t>(i)] * h_c[static_cast<size_t>(i)];

    double prev_norm = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_corrector; ++it) {
        detail::residual_into(ws, mesh, out.u.v, out.lambda, spec, opts.assembly, res);
        const double norm = kern::max_abs(res);
        if (!std::isfinite(norm))
            return out;
        for (int i = 0; i < n; ++i)
            dy[static_cast<size_t>(i)] =
                out.u.v[static_cast<size_t>(i)] - base.u.v[static_cast<size_t>(i)];
        const double c = weighted_ip(dy, out.lambda - base.lambda, tan_u, tan_l,
                                     h_c, sigma) -
                         ds;
        if (norm <= cfg.corrector_tol && std::fabs(c) <= 1e-8 * std::max(1.0, ds)) {
            out.ok = true;
            out.iterations = it;
            return out;
        }
        if (it >= 2 && norm > 10.0 * prev_norm)
            return out;
        prev_norm = norm;

        detail::jacobian_into(ws, mesh, out.u.v, out.lambda, spec, opts.assembly, jac);
        detail::reaction_into(ws, out.u.v, 1.0, spec, col);
        for (auto& v : col)
            v = -v;

        std::vector<double> rhs_u(res.size());
        for (size_t i = 0; i < res.size(); ++i)
            rhs_u[i] = -res[i];
        double dlambda = 0.0;
        if (!bordered_solve(jac, col, row, tan_l, rhs_u, -c, du, dlambda))
            return out;

        // Positivity and lambda-sign guards on the step.
        double alpha = 1.0;
        const double mprev = kern::min_val(out.u.v) + spec.eps;
        const double theta = std::max(1e-14, 0.5 * mprev);
        for (int i = 0; i < n; ++i) {
            if (du[static_cast<size_t>(i)] < 0.0) {
                const double room = out.u.v[static_cast<size_t>(i)] + spec.eps - theta;
                if (room <= 0.0)
                    return out;
                alpha = std::min(alpha, 0.95 * room / (-du[static_cast<size_t>(i)]));
            }
        }
        if (dlambda < 0.0)
            alpha = std::min(alpha, 0.9 * out.lambda / (-dlambda));
        if (!(alpha > 1e-12))
            return out;
        kern::axpy(alpha, du, out.u.v);
        out.lambda += alpha * dlambda;
        out.iterations = it + 1;
    }
    return out;
}

} // namespace

Branch trace_branch(const ProblemSpec& spec, std::shared_ptr<const Mesh1D> mesh,
                    const ContinuationConfig& cfg, const SolveOptions& opts) {
    spec.validate();
    if (spec.eps == 0.0 && mesh->grading() != Grading::graded)
        throw InvalidSpec("trace_branch: eps = 0 requires a boundary-graded mesh");
    if (!(cfg.ds_min > 0.0) || !(cfg.ds_min <= cfg.ds_init) ||
        !(cfg.ds_init <= cfg.ds_max))
        throw InvalidSpec("trace_branch: need 0 < ds_min <= ds_init <= ds_max");

    Branch branch;
    branch.spec = spec;
    branch.termination = Termination::max_steps;

    const double lambda0 = 10.0 * cfg.lambda_floor;
    auto minimal = monotone_iteration_minimal(lambda0, spec, mesh, opts);
    if (!minimal.ok())
        throw ConvergenceError("trace_branch: no minimal solution at the start lambda");
    branch.points.push_back(make_point(lambda0, std::move(minimal.u), 0.0, +1));

    // Second point by natural continuation.
    const BranchPoint& p0 = branch.points.front();
    GridFunction u1;
    double lambda1 = 0.0;
    bool have_second = false;
    for (double factor : {1.5, 1.25, 1.1, 1.02}) {
        lambda1 = lambda0 * factor;
        auto res = newton_solve(p0.u, lambda1, spec, opts);
        if (res.ok()) {
            u1 = std::move(res.u);
            have_second = true;
            break;
        }
    }
    if (!have_second)
        throw ConvergenceError("trace_branch: failed to take the first natural step");

    AssemblyWorkspace ws;
    ws.resize(p0.u.n());
    const int n = p0.u.n();
    const auto h_c = mesh->h_c();

    {
        double sigma = 1.0 / std::max(1.0, p0.sup_norm);
        std::vector<double> dy(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            dy[static_cast<size_t>(i)] =
                u1.v[static_cast<size_t>(i)] - p0.u.v[static_cast<size_t>(i)];
        const double s1 = std::sqrt(
            weighted_ip(dy, lambda1 - lambda0, dy, lambda1 - lambda0, h_c, sigma));
        branch.points.push_back(make_point(lambda1, std::move(u1), s1, +1));
    }

    double ds = std::clamp(2.0 * branch.points.back().arclength, cfg.ds_min,
                           cfg.ds_init);
    int last_nonzero_sign = +1;
    int sign_flips = 0;
    std::vector<double> tan_u(static_cast<size_t>(n));
    GridFunction u_pred(mesh);

    for (int step = 0; step < cfg.max_steps; ++step) {
        const BranchPoint& base = branch.points.back();
        const BranchPoint& prev = branch.points[branch.points.size() - 2];
        const double sigma = 1.0 / std::max(1.0, base.sup_norm);

        for (int i = 0; i < n; ++i)
            tan_u[static_cast<size_t>(i)] =
                base.u.v[static_cast<size_t>(i)] - prev.u.v[static_cast<size_t>(i)];
        double tan_l = base.lambda - prev.lambda;
        const double tn = std::sqrt(
            weighted_ip(tan_u, tan_l, tan_u, tan_l, h_c, sigma));
        if (!(tn > 0.0)) {
            branch.termination = Termination::step_failure;
            break;
        }
        for (auto& v : tan_u)
            v /= tn;
        tan_l /= tn;

        bool accepted = false;
        CorrectorOutcome corr;
        while (!accepted) {
            u_pred.mesh = mesh;
            u_pred.v = base.u.v;
            kern::axpy(ds, tan_u, u_pred.v);
            for (auto& v : u_pred.v)
                v = std::max(v, 1e-13);
            const double lambda_pred = std::max(base.lambda + ds * tan_l,
                                                0.01 * cfg.lambda_floor);

            corr = correct(spec, *mesh, ws, u_pred, lambda_pred, base, tan_u, tan_l,
                           ds, sigma, cfg, opts);
            if (corr.ok) {
                accepted = true;
            } else {
                ds *= 0.5;
                if (ds < cfg.ds_min) {
                    branch.termination = Termination::step_failure;
                    return branch;
                }
            }
        }

        int sign = 0;
        if (std::fabs(tan_l) > 1e-9)
            sign = tan_l > 0.0 ? +1 : -1;
        if (sign != 0 && sign != last_nonzero_sign) {
            ++sign_flips;
            if (!branch.fold)
                branch.fold = FoldInfo{base.lambda, branch.points.size() - 1};
            last_nonzero_sign = sign;
        }

        branch.points.push_back(make_point(corr.lambda, std::move(corr.u),
                                           base.arclength + ds, sign));

        if (corr.iterations <= 4)
            ds = std::min(ds * 1.4, cfg.ds_max);
        else if (corr.iterations >= cfg.max_corrector - 2)
            ds = std::max(ds * 0.7, cfg.ds_min);

        const BranchPoint& added = branch.points.back();
        if (added.sup_norm >= cfg.norm_cap) {
            branch.termination = Termination::norm_cap;
            break;
        }
        if (added.lambda <= cfg.lambda_floor && step > 2) {
            branch.termination = Termination::lambda_floor;
            break;
        }
        if (step == cfg.max_steps - 1)
            branch.termination = Termination::max_steps;
    }

    branch.single_fold_shape = sign_flips <= 1;
    if (branch.fold) {
        // Refresh the fold record against the completed polyline.
        try {
            const FoldResult f = detect_fold(branch);
            branch.fold = FoldInfo{f.lambda_est, f.index};
        } catch (const NoFoldError&) {
            branch.fold.reset();
        }
    }
    return branch;
}

FoldResult detect_fold(const Branch& branch) {
    const auto& pts = branch.points;
    if (pts.size() < 3)
        throw NoFoldError("detect_fold: branch too short");
    bool seen_up = false, seen_down = false;
    for (const auto& p : pts) {
        if (p.tangent_lambda_sign > 0)
            seen_up = true;
        if (p.tangent_lambda_sign < 0 && seen_up)
            seen_down = true;
    }
    if (!seen_down)
        throw NoFoldError("detect_fold: no tangent sign flip on the branch");

    size_t m = 0;
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i].lambda > pts[m].lambda)
            m = i;
    if (m == 0 || m + 1 == pts.size())
        throw NoFoldError("detect_fold: lambda maximum at a branch endpoint");

    // Newton-form quadratic through the three samples around the maximum.
    const double s0 = pts[m - 1].arclength, s1 = pts[m].arclength,
                 s2 = pts[m + 1].arclength;
    const double l0 = pts[m - 1].lambda, l1 = pts[m].lambda, l2 = pts[m + 1].lambda;
    const double d01 = (l1 - l0) / (s1 - s0);
    const double d12 = (l2 - l1) / (s2 - s1);
    const double c = (d12 - d01) / (s2 - s0);
    double lambda_est = l1;
    if (c < 0.0) {
        const double sv = 0.5 * (s0 + s1) - d01 / (2.0 * c);
        if (sv > s0 && sv < s2)
            lambda_est = l0 + d01 * (sv - s0) + c * (sv - s0) * (sv - s1);
        if (!(lambda_est >= l1))
            lambda_est = l1;
    }
    FoldResult out;
    out.lambda_est = lambda_est;
    out.index = m;
    out.u_at_fold = pts[m].u;
    return out;
}

int count_solutions_at(double lambda_query, const Branch& branch) {
    const auto& pts = branch.points;
    if (branch.fold) {
        const size_t m = branch.fold->index;
        double res = 0.0;
        if (m > 0)
            res = std::max(res, std::fabs(pts[m].lambda - pts[m - 1].lambda));
        if (m + 1 < pts.size())
            res = std::max(res, std::fabs(pts[m + 1].lambda - pts[m].lambda));
        if (std::fabs(lambda_query - branch.fold->lambda_est) < 2.0 * res)
            throw QueryTooCloseToFold("count_solutions_at: query within fold resolution");
    }
    int count = 0;
    bool prev_zero = false;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double f0 = pts[i].lambda - lambda_query;
        const double f1 = pts[i + 1].lambda - lambda_query;
        if (f0 == 0.0) {
            if (!prev_zero)
                ++count;
            prev_zero = true;
            continue;
        }
        prev_zero = false;
        if (f0 * f1 < 0.0)
            ++count;
    }
    if (!pts.empty() && pts.back().lambda == lambda_query && !prev_zero)
        ++count;
    return count;
}

std::optional<GridFunction> lower_branch_at(const Branch& branch, double lambda) {
    const auto& pts = branch.points;
    if (pts.empty())
        return std::nullopt;
    const size_t end = branch.fold ? branch.fold->index : pts.size() - 1;
    for (size_t i = 0; i < end; ++i) {
        const double a = pts[i].lambda, b = pts[i + 1].lambda;
        if ((a <= lambda && lambda <= b) || (b <= lambda && lambda <= a)) {
            const double w = b == a ? 0.0 : (lambda - a) / (b - a);
            GridFunction out = pts[i].u;
            for (size_t k = 0; k < out.v.size(); ++k)
                out.v[k] = (1.0 - w) * pts[i].u.v[k] + w * pts[i + 1].u.v[k];
            return out;
        }
    }
    return std::nullopt;
}

EpsilonSweepResult epsilon_sweep(const ProblemSpec& base,
                                 std::span<const double> eps_descending,
                                 std::shared_ptr<const Mesh1D> mesh,
                                 const ContinuationConfig& cfg,
                                 const SolveOptions& opts) {
    for (size_t i = 0; i + 1 < eps_descending.size(); ++i)
        if (!(eps_descending[i] > eps_descending[i + 1]))
            throw InvalidSpec("epsilon_sweep: eps list must be strictly descending");
    if (!eps_descending.empty() && !(eps_descending.back() >= 0.0))
        throw InvalidSpec("epsilon_sweep: eps must be nonnegative");

    std::vector<std::future<Branch>> futures;
    futures.reserve(eps_descending.size());
    for (double e : eps_descending) {
        ProblemSpec spec = base;
        spec.eps = e;
        futures.push_back(std::async(std::launch::async, [spec, mesh, cfg, opts] {
            return trace_branch(spec, mesh, cfg, opts);
        }));
    }

    EpsilonSweepResult out;
    std::vector<Branch> branches;
    branches.reserve(futures.size());
    for (size_t i = 0; i < futures.size(); ++i) {
        Branch b = futures[i].get();
        SweepEntry entry;
        entry.eps = eps_descending[i];
        entry.termination = b.termination;
        if (b.fold)
            entry.lambda_eps = b.fold->lambda_est;
        out.entries.push_back(entry);
        branches.push_back(std::move(b));
    }

    std::vector<double> folds;
    for (const auto& e : out.entries)
        if (e.lambda_eps)
            folds.push_back(*e.lambda_eps);
    for (size_t i = 0; i + 1 < folds.size(); ++i)
        if (folds[i + 1] > folds[i] + 1e-4)
            out.lambda_monotone = false;

    if (folds.size() >= 3) {
        const size_t k = folds.size() - 1;
        const double d1 = folds[k - 2] - folds[k - 1];
        const double d2 = folds[k - 1] - folds[k];
        const double r = eps_descending[k - 2] / eps_descending[k - 1];
        if (d1 * d2 > 0.0 && std::fabs(d2) < std::fabs(d1) && r > 1.0) {
            const double alpha = std::log(d1 / d2) / std::log(r);
            out.lambda_limit_estimate =
                folds[k] - d2 / (std::pow(r, alpha) - 1.0);
        } else {
            out.lambda_limit_estimate = folds[k];
        }
    } else if (!folds.empty()) {
        out.lambda_limit_estimate = folds.back();
    }

    if (!folds.empty()) {
        const double lambda_probe = 0.4 * *std::min_element(folds.begin(), folds.end());
        out.matched_lambda = lambda_probe;
        std::vector<GridFunction> matched;
        for (const auto& b : branches) {
            auto u = lower_branch_at(b, lambda_probe);
            if (u)
                matched.push_back(std::move(*u));
        }
        for (size_t i = 0; i + 1 < matched.size(); ++i)
            out.matched_sup_distances.push_back(
                sup_distance(matched[i], matched[i + 1]));
        for (size_t i = 0; i + 1 < out.matched_sup_distances.size(); ++i)
            if (out.matched_sup_distances[i + 1] > out.matched_sup_distances[i])
                out.matched_converging = false;
    }
    return out;
}

double truncation_asymptote_estimate(const ProblemSpec& spec,
                                     std::shared_ptr<const Mesh1D> mesh,
                                     const ContinuationConfig& cfg,
                                     const SolveOptions& opts) {
    if (!spec.truncated())
        throw InvalidSpec("truncation_asymptote_estimate: n_trunc must be finite");
    if (!(cfg.norm_cap >= 50.0 * spec.n_trunc))
        throw InvalidSpec("truncation_asymptote_estimate: need norm_cap >= 50 n");

    const Branch branch = trace_branch(spec, mesh, cfg, opts);
    double sum = 0.0;
    int count = 0;
    for (const auto& p : branch.points) {
        if (p.sup_norm >= 10.0 * spec.n_trunc && p.sup_norm <= cfg.norm_cap) {
            sum += p.lambda;
            ++count;
        }
    }
    if (count < 10)
        throw TailTooShort("truncation_asymptote_estimate: only " +
                           std::to_string(count) + " tail points");
    return sum / count;
}

double max_location_trace(const Branch& branch) {
    if (branch.points.empty())
        throw DomainError("max_location_trace: empty branch");
    const double L = branch.points.front().u.mesh->length();
    double out = std::numeric_limits<double>::infinity();
    for (const auto& p : branch.points)
        out = std::min(out, std::min(p.argmax_x, L - p.argmax_x));
    return out;
}

} // namespace plb
