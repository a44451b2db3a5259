// plbranch: branch tracing and verification driver for the singular
// p-Laplacian problem family.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 verification failure.

#include "plb/config.hpp"
#include "plb/continuation.hpp"
#include "plb/eigenpair.hpp"
#include "plb/io.hpp"
#include "plb/svg.hpp"
#include "plb/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;

struct CommonArgs {
    std::string config_file;
    std::vector<std::string> overrides;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_file, "JSON config file");
    cmd->add_option("-s,--set", args.overrides,
                    "dotted-path override, e.g. spec.p=3 or mesh.num_interior=200");
    cmd->add_option("-o,--out", args.out_dir, "output directory");
}

plb::RunConfig resolve_config(const CommonArgs& args) {
    plb::RunConfig cfg = args.config_file.empty()
                             ? plb::default_config()
                             : plb::load_config_file(args.config_file);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw plb::ConfigError("override must look like key.path=value: " + kv);
        plb::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!args.out_dir.empty())
        cfg.output_dir = args.out_dir;
    cfg.validate();
    plb::apply_kernel_choice(cfg);
    return cfg;
}

std::filesystem::path out_path(const plb::RunConfig& cfg, const std::string& name) {
    return cfg.resolved_output_dir() / name;
}

int cmd_eigen(const plb::RunConfig& cfg, bool csv) {
    auto mesh = cfg.mesh.build(cfg.spec);
    const auto result = plb::first_eigenpair(mesh, cfg.spec.p, cfg.solve);
    json j;
    j["p"] = cfg.spec.p;
    j["N"] = cfg.mesh.num_interior;
    j["lambda1"] = result.lambda1;
    j["residual"] = result.residual;
    j["iterations"] = result.iterations;
    std::cout << j.dump(2) << "\n";
    if (csv)
        plb::write_grid_csv(result.phi1, out_path(cfg, "phi1.csv"));
    return 0;
}

int cmd_torsion(const plb::RunConfig& cfg) {
    auto mesh = cfg.mesh.build(cfg.spec);
    const auto ep = plb::torsion_solution(mesh, cfg.spec.p, cfg.solve);
    json j;
    j["p"] = cfg.spec.p;
    j["sup"] = ep.sup_norm();
    std::cout << j.dump(2) << "\n";
    plb::write_grid_csv(ep, out_path(cfg, "torsion.csv"));
    return 0;
}

int cmd_solve(const plb::RunConfig& cfg, double lambda) {
    auto mesh = cfg.mesh.build(cfg.spec);
    auto start = plb::monotone_iteration_minimal(lambda, cfg.spec, mesh, cfg.solve);
    plb::NewtonTrace trace;
    const auto res =
        plb::newton_solve(start.ok() ? start.u : plb::GridFunction(mesh, 0.1),
                          lambda, cfg.spec, cfg.solve, &trace);
    plb::write_newton_trace_jsonl(trace, out_path(cfg, "newton_trace.jsonl"));
    json j;
    j["lambda"] = lambda;
    j["converged"] = res.ok();
    j["iterations"] = res.iterations;
    j["residual_norm"] = res.residual_norm;
    if (res.ok()) {
        j["sup_norm"] = res.u.sup_norm();
        plb::write_grid_csv(res.u, out_path(cfg, "solution.csv"));
    }
    std::cout << j.dump(2) << "\n";
    return res.ok() ? 0 : 3;
}

int cmd_minimal(const plb::RunConfig& cfg, double lambda) {
    auto mesh = cfg.mesh.build(cfg.spec);
    const auto res = plb::monotone_iteration_minimal(lambda, cfg.spec, mesh, cfg.solve);
    json j;
    j["lambda"] = lambda;
    j["converged"] = res.ok();
    j["outer_iterations"] = res.outer_iterations;
    j["final_update"] = res.final_update;
    j["worst_monotonicity"] = res.worst_monotonicity;
    if (res.ok()) {
        j["sup_norm"] = res.u.sup_norm();
        plb::write_grid_csv(res.u, out_path(cfg, "minimal.csv"));
    }
    std::cout << j.dump(2) << "\n";
    return res.ok() ? 0 : 3;
}

plb::BranchCurve to_curve(const plb::Branch& branch) {
    plb::BranchCurve c;
    for (const auto& p : branch.points) {
        c.s.push_back(p.arclength);
        c.lambda.push_back(p.lambda);
        c.sup_norm.push_back(p.sup_norm);
        c.l2_norm.push_back(p.l2_norm);
        c.argmax_x.push_back(p.argmax_x);
        c.tangent_sign.push_back(p.tangent_lambda_sign);
    }
    return c;
}

int cmd_branch(const plb::RunConfig& cfg) {
    auto mesh = cfg.mesh.build(cfg.spec);
    const auto branch = plb::trace_branch(cfg.spec, mesh, cfg.continuation, cfg.solve);

    plb::write_branch_csv(branch, out_path(cfg, "branch.csv"));
    json manifest = plb::branch_manifest(branch, cfg.continuation);
    manifest["seed"] = cfg.seed;
    if (branch.spec.truncated()) {
        try {
            manifest["asymptote_estimate"] = plb::truncation_asymptote_estimate(
                cfg.spec, mesh, cfg.continuation, cfg.solve);
        } catch (const plb::Error& e) {
            manifest["asymptote_estimate_error"] = e.what();
        }
    }
    {
        std::ofstream out(out_path(cfg, "branch.json"));
        out << manifest.dump(2) << "\n";
    }

    plb::SvgOptions svg;
    try {
        const auto eig = plb::first_eigenpair(mesh, cfg.spec.p, cfg.solve);
        svg.bound_lambda = plb::lambda_star_upper_bound(cfg.spec, eig.lambda1);
    } catch (const plb::Error&) {
    }
    if (branch.fold) {
        svg.fold_lambda = branch.fold->lambda_est;
        svg.fold_sup = branch.points[branch.fold->index].sup_norm;
    }
    plb::write_bifurcation_svg(to_curve(branch), svg, out_path(cfg, "branch.svg"));

    std::cout << manifest.dump(2) << "\n";
    return branch.termination == plb::Termination::step_failure ? 3 : 0;
}

int cmd_sweep(const plb::RunConfig& cfg, std::vector<double> eps_list,
              std::vector<double> n_list) {
    auto mesh = cfg.mesh.build(cfg.spec);
    json j;
    if (!eps_list.empty()) {
        const auto sweep =
            plb::epsilon_sweep(cfg.spec, eps_list, mesh, cfg.continuation, cfg.solve);
        json entries = json::array();
        for (const auto& e : sweep.entries) {
            json ej;
            ej["eps"] = e.eps;
            if (e.lambda_eps)
                ej["lambda_eps"] = *e.lambda_eps;
            ej["termination"] = plb::termination_name(e.termination);
            entries.push_back(ej);
        }
        j["eps_sweep"] = entries;
        j["lambda_monotone"] = sweep.lambda_monotone;
        if (sweep.lambda_limit_estimate)
            j["lambda_limit_estimate"] = *sweep.lambda_limit_estimate;
        j["matched_lambda"] = sweep.matched_lambda;
        j["matched_sup_distances"] = sweep.matched_sup_distances;
        j["matched_converging"] = sweep.matched_converging;
    }
    if (!n_list.empty()) {
        json entries = json::array();
        for (double n : n_list) {
            plb::ProblemSpec spec = cfg.spec;
            spec.n_trunc = n;
            plb::ContinuationConfig ccfg = cfg.continuation;
            ccfg.norm_cap = std::max(ccfg.norm_cap, 50.0 * n);
            json ej;
            ej["n"] = n;
            try {
                ej["asymptote"] =
                    plb::truncation_asymptote_estimate(spec, mesh, ccfg, cfg.solve);
            } catch (const plb::Error& e) {
                ej["error"] = e.what();
            }
            entries.push_back(ej);
        }
        j["n_sweep"] = entries;
    }
    {
        std::ofstream out(out_path(cfg, "sweep.json"));
        out << j.dump(2) << "\n";
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_verify(const plb::RunConfig& cfg) {
    const auto report = plb::run_verification(cfg);
    for (const auto& c : report.checks) {
        const char* status = c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL");
        std::printf("[%s] %-28s %s\n", status, c.name.c_str(),
                    c.skipped ? c.skip_reason.c_str() : c.detail.c_str());
    }
    const auto path = out_path(cfg, "verification_report.json");
    {
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path);
        out << plb::report_to_json(report).dump(2) << "\n";
    }
    std::printf("%zu checks, %s, %.1fs; report: %s\n", report.checks.size(),
                report.all_pass() ? "all passed" : "FAILURES",
                report.total_wall_seconds, path.string().c_str());
    return report.all_pass() ? 0 : 4;
}

int cmd_plot(const plb::RunConfig& cfg, const std::string& csv_path,
             const std::string& svg_path) {
    const auto curve = plb::read_branch_csv(csv_path);
    plb::SvgOptions svg;
    plb::write_bifurcation_svg(curve, svg,
                               svg_path.empty() ? out_path(cfg, "plot.svg")
                                                : std::filesystem::path(svg_path));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"singular p-Laplacian branch toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    double lambda = 1.0;
    bool eigen_csv = false;
    std::vector<double> eps_list, n_list;
    std::string plot_csv, plot_svg;

    auto* eigen = app.add_subcommand("eigen", "first eigenpair of the 1D p-Laplacian");
    add_common(eigen, args);
    eigen->add_flag("--csv", eigen_csv, "also write phi1.csv");

    auto* torsion = app.add_subcommand("torsion", "torsion function e_p");
    add_common(torsion, args);

    auto* solve = app.add_subcommand("solve", "Newton solve at fixed lambda");
    add_common(solve, args);
    solve->add_option("--lambda", lambda, "parameter value")->required();

    auto* minimal = app.add_subcommand("minimal", "minimal solution by monotone iteration");
    add_common(minimal, args);
    minimal->add_option("--lambda", lambda, "parameter value")->required();

    auto* branch = app.add_subcommand("branch", "trace the solution branch");
    add_common(branch, args);

    auto* sweep = app.add_subcommand("sweep", "eps or n sweeps");
    add_common(sweep, args);
    sweep->add_option("--eps", eps_list, "descending eps list");
    sweep->add_option("--n", n_list, "truncation levels");

    auto* verify = app.add_subcommand("verify", "run the verification battery");
    add_common(verify, args);

    auto* plot = app.add_subcommand("plot", "branch CSV to SVG");
    add_common(plot, args);
    plot->add_option("--csv", plot_csv, "input branch CSV")->required();
    plot->add_option("--svg", plot_svg, "output SVG path");

    CLI11_PARSE(app, argc, argv);

    try {
        const plb::RunConfig cfg = resolve_config(args);
        if (eigen->parsed())
            return cmd_eigen(cfg, eigen_csv);
        if (torsion->parsed())
            return cmd_torsion(cfg);
        if (solve->parsed())
            return cmd_solve(cfg, lambda);
        if (minimal->parsed())
            return cmd_minimal(cfg, lambda);
        if (branch->parsed())
            return cmd_branch(cfg);
        if (sweep->parsed())
            return cmd_sweep(cfg, eps_list, n_list);
        if (verify->parsed())
            return cmd_verify(cfg);
        if (plot->parsed())
            return cmd_plot(cfg, plot_csv, plot_svg);
    } catch (const plb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const plb::InvalidSpec& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const plb::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
