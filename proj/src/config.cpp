#include "plb/config.hpp"

#include "plb/io.hpp"
#include "plb/kernels.hpp"

#include <cstdlib>
#include <fstream>

namespace plb {

using nlohmann::json;

std::shared_ptr<const Mesh1D> MeshConfig::build(const ProblemSpec& spec) const {
    if (grading == "auto")
        return Mesh1D::for_spec(spec, num_interior);
    if (grading == "uniform")
        return Mesh1D::create(num_interior, spec.domain_length, Grading::uniform, 1.0);
    if (grading == "graded")
        return Mesh1D::create(num_interior, spec.domain_length, Grading::graded, gamma);
    throw ConfigError("mesh.grading: expected 'uniform', 'graded' or 'auto'");
}

void RunConfig::validate() const {
    spec.validate();
    if (mesh.num_interior < 3)
        throw ConfigError("mesh.num_interior: need at least 3");
    if (!(mesh.gamma >= 1.0))
        throw ConfigError("mesh.gamma: need gamma >= 1");
    if (mesh.grading != "uniform" && mesh.grading != "graded" && mesh.grading != "auto")
        throw ConfigError("mesh.grading: expected 'uniform', 'graded' or 'auto'");
    if (solve.max_newton < 1 || solve.max_outer < 1)
        throw ConfigError("solve: iteration caps must be >= 1");
    if (!(continuation.ds_min > 0.0) ||
        !(continuation.ds_min <= continuation.ds_init) ||
        !(continuation.ds_init <= continuation.ds_max))
        throw ConfigError("continuation: need 0 < ds_min <= ds_init <= ds_max");
    if (!(continuation.lambda_floor > 0.0) || !(continuation.norm_cap > 0.0))
        throw ConfigError("continuation: lambda_floor and norm_cap must be positive");
    if (kernels != "auto" && kernels != "scalar" && kernels != "avx2")
        throw ConfigError("kernels: expected 'auto', 'scalar' or 'avx2'");
}

std::filesystem::path RunConfig::resolved_output_dir() const {
    if (const char* env = std::getenv("PLB_OUTPUT_DIR"))
        return env;
    return output_dir;
}

RunConfig default_config() { return RunConfig{}; }

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
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

RunConfig config_from_json(const json& j) {
    reject_unknown(j,
                   {"spec", "mesh", "solve", "continuation", "output_dir", "seed",
                    "kernels"},
                   "config");
    RunConfig cfg;
    if (j.contains("spec"))
        cfg.spec = spec_from_json(j.at("spec"));
    if (j.contains("mesh")) {
        const json& m = j.at("mesh");
        reject_unknown(m, {"num_interior", "grading", "gamma"}, "config.mesh");
        if (m.contains("num_interior"))
            cfg.mesh.num_interior = m.at("num_interior").get<int>();
        if (m.contains("grading"))
            cfg.mesh.grading = m.at("grading").get<std::string>();
        if (m.contains("gamma"))
            cfg.mesh.gamma = m.at("gamma").get<double>();
    }
    if (j.contains("solve")) {
        const json& s = j.at("solve");
        reject_unknown(s,
                       {"tol_residual", "max_newton", "tol_fixedpoint", "max_outer",
                        "regularize_flux", "eta_rel"},
                       "config.solve");
        if (s.contains("tol_residual"))
            cfg.solve.tol_residual = s.at("tol_residual").get<double>();
        if (s.contains("max_newton"))
            cfg.solve.max_newton = s.at("max_newton").get<int>();
        if (s.contains("tol_fixedpoint"))
            cfg.solve.tol_fixedpoint = s.at("tol_fixedpoint").get<double>();
        if (s.contains("max_outer"))
            cfg.solve.max_outer = s.at("max_outer").get<int>();
        if (s.contains("regularize_flux"))
            cfg.solve.assembly.regularize_flux = s.at("regularize_flux").get<bool>();
        if (s.contains("eta_rel"))
            cfg.solve.assembly.eta_rel = s.at("eta_rel").get<double>();
    }
    if (j.contains("continuation")) {
        const json& c = j.at("continuation");
        reject_unknown(c,
                       {"ds_init", "ds_min", "ds_max", "max_steps", "lambda_floor",
                        "norm_cap", "corrector_tol", "max_corrector"},
                       "config.continuation");
        if (c.contains("ds_init"))
            cfg.continuation.ds_init = c.at("ds_init").get<double>();
        if (c.contains("ds_min"))
            cfg.continuation.ds_min = c.at("ds_min").get<double>();
        if (c.contains("ds_max"))
            cfg.continuation.ds_max = c.at("ds_max").get<double>();
        if (c.contains("max_steps"))
            cfg.continuation.max_steps = c.at("max_steps").get<int>();
        if (c.contains("lambda_floor"))
            cfg.continuation.lambda_floor = c.at("lambda_floor").get<double>();
        if (c.contains("norm_cap"))
            cfg.continuation.norm_cap = c.at("norm_cap").get<double>();
        if (c.contains("corrector_tol"))
            cfg.continuation.corrector_tol = c.at("corrector_tol").get<double>();
        if (c.contains("max_corrector"))
            cfg.continuation.max_corrector = c.at("max_corrector").get<int>();
    }
    if (j.contains("output_dir"))
        cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed"))
        cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("kernels"))
        cfg.kernels = j.at("kernels").get<std::string>();
    cfg.validate();
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["spec"] = spec_to_json(cfg.spec);
    j["mesh"] = {{"num_interior", cfg.mesh.num_interior},
                 {"grading", cfg.mesh.grading},
                 {"gamma", cfg.mesh.gamma}};
    j["solve"] = {{"tol_residual", cfg.solve.tol_residual},
                  {"max_newton", cfg.solve.max_newton},
                  {"tol_fixedpoint", cfg.solve.tol_fixedpoint},
                  {"max_outer", cfg.solve.max_outer},
                  {"regularize_flux", cfg.solve.assembly.regularize_flux},
                  {"eta_rel", cfg.solve.assembly.eta_rel}};
    j["continuation"] = {{"ds_init", cfg.continuation.ds_init},
                         {"ds_min", cfg.continuation.ds_min},
                         {"ds_max", cfg.continuation.ds_max},
                         {"max_steps", cfg.continuation.max_steps},
                         {"lambda_floor", cfg.continuation.lambda_floor},
                         {"norm_cap", cfg.continuation.norm_cap},
                         {"corrector_tol", cfg.continuation.corrector_tol},
                         {"max_corrector", cfg.continuation.max_corrector}};
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    j["kernels"] = cfg.kernels;
    return j;
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    json j = config_to_json(cfg);
    json* node = &j;
    size_t start = 0;
    while (true) {
        const size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (dot == std::string::npos) {
            json parsed;
            try {
                parsed = json::parse(value);
            } catch (const json::parse_error&) {
                parsed = value; // bare strings (e.g. grading=uniform)
            }
            (*node)[part] = parsed;
            break;
        }
        if (!node->contains(part))
            throw ConfigError("override: unknown key '" + key + "'");
        node = &(*node)[part];
        start = dot + 1;
    }
    cfg = config_from_json(j);
}

void apply_kernel_choice(const RunConfig& cfg) {
    if (cfg.kernels == "auto")
        return;
    const kern::Backend want =
        cfg.kernels == "avx2" ? kern::Backend::avx2 : kern::Backend::scalar;
    if (!kern::set_backend(want))
        throw ConfigError("kernels: backend '" + cfg.kernels +
                          "' not supported on this CPU");
}

} // namespace plb
