#pragma once

#include "mcflow/baseline.hpp"
#include "mcflow/config.hpp"
#include "mcflow/stepper.hpp"
#include "mcflow/verify.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace mcflow {

struct DriverResult {
    ExitCode code = ExitCode::ok;
    std::string message;
};

/// Curve factory driven by the config's `curve` key.
ParametrizedCurve make_curve(const RunConfig& cfg);

/// Exact solution for curves that have one (circle, angenent); empty
/// otherwise. Throws ConfigError if `exact = true` was requested for a curve
/// without a registered exact solution.
std::optional<ExactSolution> make_exact(const RunConfig& cfg);

/// Mesh + initial data for the configured curve.
struct Problem {
    CurveMesh mesh;
    PositionVector x0;
    StateVector u0;
};
Problem make_problem(const RunConfig& cfg);
Problem make_problem(const RunConfig& cfg, int n_elements);

/// Output root: $MCFLOW_OUTPUT_ROOT when set, else ./out. Experiment files
/// land in <root>/<output_dir>/.
std::filesystem::path output_root();
std::filesystem::path output_dir_for(const RunConfig& cfg);

/// Flow records as CSV (`step,t,length,min_sqrt_g[,err_x_H1,err_v_H1,
/// err_pi_H1,err_H_H1]`); error columns only when an exact solution provides
/// them. `method_label` prepends a method column (compare outputs).
std::string flow_records_csv(const FlowResult& result, bool with_errors,
                             const std::string& method_label = "");

/// Snapshot series CSV in the mesh module's `t,node,comp*` format.
std::string snapshots_csv(const CurveMesh& mesh, const FlowResult& result);

/// L-infinity-in-time H1 errors (x, v, proj, curv) over a run's records.
std::array<double, 4> linf_h1_errors(const FlowResult& result);

/// Subcommand drivers. They write output files and map failures to exit
/// codes: 2 config, 3 solver, 4 singularity stop, 5 verify failure.
DriverResult cmd_run(const RunConfig& cfg);
DriverResult cmd_converge(const RunConfig& cfg);
DriverResult cmd_compare(const RunConfig& cfg);
DriverResult cmd_verify();

} // namespace mcflow
