#pragma once

#include "plb/continuation.hpp"
#include "plb/mesh.hpp"
#include "plb/problem.hpp"
#include "plb/solve.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace plb {

struct MeshConfig {
    int num_interior = 400;
    std::string grading = "graded"; // "uniform" | "graded" | "auto"
    double gamma = 2.0;

    std::shared_ptr<const Mesh1D> build(const ProblemSpec& spec) const;
};

struct RunConfig {
    ProblemSpec spec;
    MeshConfig mesh;
    SolveOptions solve;
    ContinuationConfig continuation;
    std::string output_dir = "out";
    std::uint64_t seed = 20240801;
    std::string kernels = "auto"; // "auto" | "scalar" | "avx2"

    void validate() const; // throws ConfigError / InvalidSpec
    std::filesystem::path resolved_output_dir() const; // env override applies
};

RunConfig default_config();
RunConfig config_from_json(const nlohmann::json& j); // unknown keys rejected
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config_file(const std::filesystem::path& path);

/// Dotted-path override, e.g. "spec.p=3" or "mesh.num_interior=200".
void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value);

/// Applies cfg.kernels to the kernel dispatch (throws ConfigError for an
/// unsupported explicit choice).
void apply_kernel_choice(const RunConfig& cfg);

} // namespace plb
