#pragma once

#include "plb/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace plb {

struct CheckResult {
    std::string name;
    std::string paper_anchor;
    std::vector<double> measured;
    std::vector<double> bound;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string skip_reason;
    std::string detail;
    double wall_seconds = 0.0;
};

struct EnvironmentInfo {
    int mesh_interior = 0;
    std::string mesh_grading;
    double tol_residual = 0.0;
    double corrector_tol = 0.0;
    std::uint64_t seed = 0;
    std::string kernel_backend;
    std::string compiler;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    EnvironmentInfo environment;
    double total_wall_seconds = 0.0;

    bool all_pass() const;
};

/// Runs the full verification battery in dependency order
/// (eigenpair -> torsion -> base singular -> branch -> sweeps).
/// Check contents are deterministic given config and seed; wall times are
/// environment metadata only.
VerificationReport run_verification(const RunConfig& cfg);

nlohmann::json report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::json& j);

/// First eigenvalue of the 1D p-Laplacian on (0, L) by shooting: RK4 on
/// u' = |phi|^{1/(p-1)} sgn(phi), phi' = -lambda |u|^{p-2} u with bisection
/// on the terminal value. Independent oracle for the eigen module.
double shooting_lambda1(double p, double length, int steps = 20000);

} // namespace plb
