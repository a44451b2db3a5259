#include "plb/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace plb {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open for writing: " + path.string());
    return out;
}

void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k)
                known = true;
        if (!known)
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

} // namespace

void write_grid_csv(const GridFunction& u, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "x,u\n";
    out << format_double(0.0) << "," << format_double(0.0) << "\n";
    for (int i = 0; i < u.n(); ++i)
        out << format_double(u.mesh->node(i + 1)) << ","
            << format_double(u.v[static_cast<size_t>(i)]) << "\n";
    out << format_double(u.mesh->length()) << "," << format_double(0.0) << "\n";
}

json grid_to_json(const GridFunction& u) {
    json mesh;
    mesh["num_interior"] = u.mesh->n();
    mesh["length"] = u.mesh->length();
    mesh["grading"] = u.mesh->grading() == Grading::graded ? "graded" : "uniform";
    mesh["gamma"] = u.mesh->gamma();
    json j;
    j["mesh"] = mesh;
    j["values"] = u.v;
    return j;
}

GridFunction grid_from_json(const json& j) {
    require_keys(j, {"mesh", "values"}, "grid");
    const json& m = j.at("mesh");
    require_keys(m, {"num_interior", "length", "grading", "gamma"}, "grid.mesh");
    const std::string grading = m.at("grading").get<std::string>();
    if (grading != "graded" && grading != "uniform")
        throw ConfigError("grid.mesh.grading: expected 'graded' or 'uniform'");
    auto mesh = Mesh1D::create(m.at("num_interior").get<int>(),
                               m.at("length").get<double>(),
                               grading == "graded" ? Grading::graded : Grading::uniform,
                               m.at("gamma").get<double>());
    return GridFunction(mesh, j.at("values").get<std::vector<double>>());
}

json spec_to_json(const ProblemSpec& spec) {
    json j;
    j["p"] = spec.p;
    j["q"] = spec.q;
    j["delta"] = spec.delta;
    j["eps"] = spec.eps;
    j["n_trunc"] = spec.truncated() ? json(spec.n_trunc) : json("inf");
    j["domain_length"] = spec.domain_length;
    return j;
}

ProblemSpec spec_from_json(const json& j) {
    require_keys(j, {"p", "q", "delta", "eps", "n_trunc", "domain_length"}, "spec");
    ProblemSpec spec;
    if (j.contains("p"))
        spec.p = j.at("p").get<double>();
    if (j.contains("q"))
        spec.q = j.at("q").get<double>();
    if (j.contains("delta"))
        spec.delta = j.at("delta").get<double>();
    if (j.contains("eps"))
        spec.eps = j.at("eps").get<double>();
    if (j.contains("n_trunc")) {
        const json& n = j.at("n_trunc");
        if (n.is_string()) {
            if (n.get<std::string>() != "inf")
                throw ConfigError("spec.n_trunc: expected a number or 'inf'");
            spec.n_trunc = std::numeric_limits<double>::infinity();
        } else {
            spec.n_trunc = n.get<double>();
        }
    }
    if (j.contains("domain_length"))
        spec.domain_length = j.at("domain_length").get<double>();
    spec.validate();
    return spec;
}

void write_branch_csv(const Branch& branch, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "s,lambda,sup_norm,l2_norm,argmax_x,tangent_sign\n";
    for (const auto& p : branch.points)
        out << format_double(p.arclength) << "," << format_double(p.lambda) << ","
            << format_double(p.sup_norm) << "," << format_double(p.l2_norm) << ","
            << format_double(p.argmax_x) << "," << p.tangent_lambda_sign << "\n";
}

BranchCurve read_branch_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open branch CSV: " + path.string());
    BranchCurve curve;
    std::string line;
    if (!std::getline(in, line) ||
        line != "s,lambda,sup_norm,l2_norm,argmax_x,tangent_sign")
        throw Error("branch CSV: unexpected header in " + path.string());
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string field;
        double vals[5];
        for (double& v : vals) {
            if (!std::getline(row, field, ','))
                throw Error("branch CSV: short row");
            v = std::stod(field);
        }
        if (!std::getline(row, field, ','))
            throw Error("branch CSV: short row");
        curve.s.push_back(vals[0]);
        curve.lambda.push_back(vals[1]);
        curve.sup_norm.push_back(vals[2]);
        curve.l2_norm.push_back(vals[3]);
        curve.argmax_x.push_back(vals[4]);
        curve.tangent_sign.push_back(std::stoi(field));
    }
    return curve;
}

const char* termination_name(Termination t) {
    switch (t) {
    case Termination::lambda_floor:
        return "lambda_floor";
    case Termination::norm_cap:
        return "norm_cap";
    case Termination::step_failure:
        return "step_failure";
    case Termination::max_steps:
        return "max_steps";
    }
    return "unknown";
}

json branch_manifest(const Branch& branch, const ContinuationConfig& cfg) {
    json j;
    j["spec"] = spec_to_json(branch.spec);
    json c;
    c["ds_init"] = cfg.ds_init;
    c["ds_min"] = cfg.ds_min;
    c["ds_max"] = cfg.ds_max;
    c["max_steps"] = cfg.max_steps;
    c["lambda_floor"] = cfg.lambda_floor;
    c["norm_cap"] = cfg.norm_cap;
    c["corrector_tol"] = cfg.corrector_tol;
    j["continuation"] = c;
    j["num_points"] = branch.points.size();
    j["termination"] = termination_name(branch.termination);
    j["single_fold_shape"] = branch.single_fold_shape;
    if (branch.fold) {
        json f;
        f["lambda_est"] = branch.fold->lambda_est;
        f["index"] = branch.fold->index;
        f["note"] = "fold solution, existence per strictly convex domain regime only";
        j["fold"] = f;
    }
    return j;
}

void write_newton_trace_jsonl(const NewtonTrace& trace,
                              const std::filesystem::path& path) {
    auto out = open_out(path);
    for (const auto& rec : trace) {
        json j;
        j["iteration"] = rec.iteration;
        j["residual_norm"] = rec.residual_norm;
        j["damping"] = rec.damping;
        out << j.dump() << "\n";
    }
}

} // namespace plb
