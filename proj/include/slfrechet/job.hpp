#pragma once

// One command-line job: parse potentials and directions, run the requested
// computation, write a JSON report and optional CSV plot data.
//
// Exit codes: 0 success, 2 bad input, 3 solver failure, 4 route disagreement.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace slf {

enum class Command { eigen, dlambda, d2lambda, kernel, oracle, concavity };

Command parse_command(const std::string& name);
std::string command_name(Command c);

struct JobSpec {
    Command command = Command::eigen;
    double ell = 0.0;
    int n_cells = 4000;
    double alpha = 0.0;
    double beta = 0.0;
    int index = 0;
    std::string q_expr = "zero";
    std::string h_expr;
    std::string q2_expr;
    std::vector<std::string> routes{"direct"};
    std::vector<double> taus;
    std::string json_path;  // empty: stdout
    std::string csv_path;   // empty: no plot data
    std::uint64_t seed = 20190101;
    double s_step = 1e-3;
    int modes = 0;   // oracle: perturbation-sum modes, 0 to skip
    int trials = 0;  // oracle: Rayleigh trials (Dirichlet only), 0 to skip
    double route_tol = 1e-5;
    double u_route_tol = 1e-6;
};

enum ExitCode : int {
    exit_ok = 0,
    exit_bad_input = 2,
    exit_solver_failure = 3,
    exit_route_disagreement = 4,
};

// Applies SL_FRECHET_SEED from the environment, if set.
void apply_environment(JobSpec& spec);

// Runs the job. The JSON report goes to spec.json_path or `out`; a one-line
// JSON error object goes to `err` on failure.
int run(const JobSpec& spec, std::ostream& out, std::ostream& err);

} // namespace slf
