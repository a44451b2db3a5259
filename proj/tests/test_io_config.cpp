#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plb/config.hpp"
#include "plb/continuation.hpp"
#include "plb/io.hpp"
#include "plb/svg.hpp"
#include "plb/verify.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace plb;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "plb_io_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Branch quick_branch() {
    ProblemSpec spec;
    spec.delta = 0.5;
    ContinuationConfig cfg;
    cfg.norm_cap = 50.0;
    cfg.max_steps = 400;
    auto mesh = Mesh1D::create(60, 1.0, Grading::graded, 2.0);
    return trace_branch(spec, mesh, cfg);
}

} // namespace

TEST_CASE("grid CSV and JSON round trip") {
    auto mesh = Mesh1D::create(10, 1.0, Grading::uniform, 1.0);
    GridFunction u(mesh);
    for (int i = 0; i < u.n(); ++i)
        u.v[static_cast<size_t>(i)] = 0.1 * (i + 1);

    const auto path = temp_dir() / "grid.csv";
    write_grid_csv(u, path);
    const std::string text = slurp(path);
    CHECK(text.rfind("x,u\n0,0\n", 0) == 0);   // boundary row first
    CHECK(text.find("\n1,0\n") != std::string::npos); // boundary row last

    const auto j = grid_to_json(u);
    const auto back = grid_from_json(j);
    CHECK(back.n() == u.n());
    for (int i = 0; i < u.n(); ++i)
        CHECK(back.v[static_cast<size_t>(i)] == u.v[static_cast<size_t>(i)]);

    auto bad = j;
    bad["extra"] = 1;
    CHECK_THROWS_AS(grid_from_json(bad), ConfigError);
}

TEST_CASE("spec JSON handles the infinite truncation") {
    ProblemSpec spec;
    spec.n_trunc = 12.0;
    auto j = spec_to_json(spec);
    CHECK(spec_from_json(j).n_trunc == 12.0);
    spec.n_trunc = std::numeric_limits<double>::infinity();
    j = spec_to_json(spec);
    CHECK(j["n_trunc"] == "inf");
    CHECK_FALSE(spec_from_json(j).truncated());
}

TEST_CASE("branch CSV round trip and determinism") {
    const Branch b1 = quick_branch();
    const Branch b2 = quick_branch();

    const auto p1 = temp_dir() / "b1.csv";
    const auto p2 = temp_dir() / "b2.csv";
    write_branch_csv(b1, p1);
    write_branch_csv(b2, p2);
    CHECK(slurp(p1) == slurp(p2)); // byte-identical rerun

    const auto curve = read_branch_csv(p1);
    REQUIRE(curve.lambda.size() == b1.points.size());
    for (size_t i = 0; i < curve.lambda.size(); ++i) {
        CHECK(curve.lambda[i] == b1.points[i].lambda);
        CHECK(curve.sup_norm[i] == b1.points[i].sup_norm);
        CHECK(curve.tangent_sign[i] == b1.points[i].tangent_lambda_sign);
    }

    ContinuationConfig cfg;
    const auto manifest = branch_manifest(b1, cfg);
    CHECK(manifest.contains("spec"));
    CHECK(manifest.contains("termination"));
    CHECK(manifest["num_points"] == b1.points.size());
}

TEST_CASE("svg emitter") {
    const Branch b = quick_branch();
    BranchCurve curve;
    for (const auto& p : b.points) {
        curve.s.push_back(p.arclength);
        curve.lambda.push_back(p.lambda);
        curve.sup_norm.push_back(p.sup_norm);
        curve.l2_norm.push_back(p.l2_norm);
        curve.argmax_x.push_back(p.argmax_x);
        curve.tangent_sign.push_back(p.tangent_lambda_sign);
    }
    SvgOptions opts;
    opts.bound_lambda = 12.0;
    if (b.fold) {
        opts.fold_lambda = b.fold->lambda_est;
        opts.fold_sup = b.points[b.fold->index].sup_norm;
    }
    const auto path = temp_dir() / "branch.svg";
    write_bifurcation_svg(curve, opts, path);
    const std::string text = slurp(path);
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("<polyline") != std::string::npos);
    CHECK(text.find("stroke-dasharray") != std::string::npos);
    CHECK(text.find("</svg>") != std::string::npos);
}

TEST_CASE("config parsing, overrides, unknown keys") {
    RunConfig cfg = default_config();
    CHECK(cfg.spec.p == 2.0);
    CHECK(cfg.mesh.num_interior == 400);
    CHECK_NOTHROW(cfg.validate());

    apply_override(cfg, "spec.p", "3");
    CHECK(cfg.spec.p == 3.0);
    apply_override(cfg, "mesh.grading", "uniform");
    CHECK(cfg.mesh.grading == "uniform");
    apply_override(cfg, "spec.n_trunc", "10");
    CHECK(cfg.spec.n_trunc == 10.0);
    CHECK_THROWS_AS(apply_override(cfg, "nope.key", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "spec.p", "0.5"), InvalidSpec);

    nlohmann::json j = config_to_json(default_config());
    j["spec"]["typo_key"] = 1;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    try {
        config_from_json(j);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
    }

    const auto path = temp_dir() / "config.json";
    {
        std::ofstream out(path);
        out << config_to_json(default_config()).dump(2);
    }
    CHECK_NOTHROW(load_config_file(path));
    CHECK_THROWS_AS(load_config_file(temp_dir() / "missing.json"), ConfigError);
}

TEST_CASE("report JSON round trip") {
    VerificationReport report;
    report.environment.mesh_interior = 400;
    report.environment.mesh_grading = "graded";
    report.environment.seed = 42;
    report.environment.kernel_backend = "avx2";
    report.environment.compiler = "test";
    CheckResult c;
    c.name = "demo";
    c.paper_anchor = "anchor";
    c.measured = {1.0, 2.5};
    c.bound = {3.0};
    c.tolerance = 1e-2;
    c.pass = true;
    c.detail = "detail";
    c.wall_seconds = 0.25;
    report.checks.push_back(c);
    report.total_wall_seconds = 0.5;

    const auto j = report_to_json(report);
    const auto back = report_from_json(j);
    CHECK(report_to_json(back) == j);
}

TEST_CASE("newton trace JSONL") {
    NewtonTrace trace = {{0, 1.0, 1.0}, {1, 0.125, 0.5}};
    const auto path = temp_dir() / "trace.jsonl";
    write_newton_trace_jsonl(trace, path);
    std::ifstream in(path);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("iteration"));
        CHECK(j.contains("residual_norm"));
        CHECK(j.contains("damping"));
        ++rows;
    }
    CHECK(rows == 2);
}
