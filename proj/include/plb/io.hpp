#pragma once

#include "plb/continuation.hpp"
#include "plb/mesh.hpp"
#include "plb/solve.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace plb {

std::string format_double(double v); // shortest round-trippable (%.17g)

// GridFunction: CSV rows (x, u) including the boundary zeros; JSON record
// {mesh: {...}, values: [...]}.
void write_grid_csv(const GridFunction& u, const std::filesystem::path& path);
nlohmann::json grid_to_json(const GridFunction& u);
GridFunction grid_from_json(const nlohmann::json& j);

nlohmann::json spec_to_json(const ProblemSpec& spec);
ProblemSpec spec_from_json(const nlohmann::json& j); // strict keys

// Branch CSV: s, lambda, sup_norm, l2_norm, argmax_x, tangent_sign.
void write_branch_csv(const Branch& branch, const std::filesystem::path& path);

struct BranchCurve { // as read back from CSV, for plotting
    std::vector<double> s, lambda, sup_norm, l2_norm, argmax_x;
    std::vector<int> tangent_sign;
};
BranchCurve read_branch_csv(const std::filesystem::path& path);

nlohmann::json branch_manifest(const Branch& branch,
                               const ContinuationConfig& cfg);

void write_newton_trace_jsonl(const NewtonTrace& trace,
                              const std::filesystem::path& path);

const char* termination_name(Termination t);

} // namespace plb
