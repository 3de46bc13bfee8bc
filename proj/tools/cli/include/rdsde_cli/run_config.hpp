#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsde/coeff.hpp"
#include "rdsde/expr.hpp"
#include "rdsde/solver.hpp"
#include "rdsde_cli/config.hpp"

namespace rdsde::cli {

struct DiagnosticsConfig {
    double alpha = 0.3;
    double lambda = 0.0;
    bool norms = true;
};

struct AuditConfig {
    AuditBox box;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
};

/// Everything a config file describes, validated.
struct RunConfig {
    ConfigFile file;
    ParamMap params;
    std::vector<Expr> eta;
    std::optional<CoefficientSet> coefficients;
    std::optional<double> rho;
    Problem problem;
    SolverConfig solver;
    std::size_t paths = 1;
    std::string output_directory = "rdsde_out";
    bool write_csv = true;
    bool write_json = true;
    DiagnosticsConfig diagnostics;
    AuditConfig audit;
    std::vector<std::string> warnings;
};

/// Parses, applies `overrides` ("section.key=value") and validates.
/// RDSDE_OUTPUT_DIR, when set, replaces output.directory.
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides = {});
RunConfig make_run_config(ConfigFile file);

}  // namespace rdsde::cli
