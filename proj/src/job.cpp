#include "slfrechet/job.hpp"

#include "slfrechet/eigensolver.hpp"
#include "slfrechet/errors.hpp"
#include "slfrechet/frechet.hpp"
#include "slfrechet/function_io.hpp"
#include "slfrechet/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace slf {

using nlohmann::json;

namespace {

json grid_json(const Grid& g) { return {{"ell", g.ell()}, {"n_cells", g.n_cells()}}; }

json bc_json(const BoundaryData& bc) { return {{"alpha", bc.alpha()}, {"beta", bc.beta()}}; }

json diagnostics_json(const EigenDiagnostics& d)
{
    return {{"bracket_expansions", d.bracket_expansions},
            {"bisection_steps", d.bisection_steps},
            {"newton_steps", d.newton_steps},
            {"lower_bracket", d.lower_bracket},
            {"upper_bracket", d.upper_bracket}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

bool has_route(const JobSpec& spec, const std::string& r)
{
    return std::find(spec.routes.begin(), spec.routes.end(), r) != spec.routes.end();
}

void require_direction(const JobSpec& spec)
{
    if (spec.h_expr.empty())
        throw InputError("command '" + command_name(spec.command) + "' needs a direction --h");
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f)
        throw InputError("cannot open '" + path + "' for writing");
    f << text;
}

json eigen_report(const JobSpec& spec, const Grid& grid, const BoundaryData& bc, const Eigenpair& ep)
{
    json j;
    j["command"] = command_name(spec.command);
    j["grid"] = grid_json(grid);
    j["bc"] = bc_json(bc);
    j["q"] = spec.q_expr;
    j["index"] = ep.index;
    j["lambda"] = ep.lambda;
    j["sign_changes"] = ep.sign_changes;
    j["residuals"] = {{"normalization", ep.normalization_residual},
                      {"boundary", ep.boundary_residual},
                      {"angle", ep.diagnostics.angle_residual}};
    j["solver"] = diagnostics_json(ep.diagnostics);
    return j;
}

struct Outcome {
    json report;
    int code = exit_ok;
    std::string failure;
};

Outcome execute(const JobSpec& spec)
{
    const Grid grid(spec.ell, spec.n_cells);
    const BoundaryData bc(spec.alpha, spec.beta);
    const SampledFn q = parse_builtin(spec.q_expr, grid);
    if (spec.index < 0)
        throw InputError("index must be nonnegative");

    Outcome out;
    switch (spec.command) {
    case Command::eigen:
    case Command::dlambda: {
        const Eigenpair ep = eigenpair(q, bc, spec.index);
        out.report = eigen_report(spec, grid, bc, ep);
        if (spec.command == Command::dlambda) {
            require_direction(spec);
            const SampledFn h = parse_builtin(spec.h_expr, grid);
            const double L = first_derivative(ep, h);
            out.report["h"] = spec.h_expr;
            out.report["L"] = L;
            out.report["residuals"]["fredholm"] = fredholm_residual(ep, h, L);
        }
        if (!spec.csv_path.empty())
            write_csv(spec.csv_path, ep.efn);
        break;
    }
    case Command::d2lambda: {
        require_direction(spec);
        for (const auto& r : spec.routes)
            if (r != "direct" && r != "energy" && r != "kernel" && r != "dual")
                throw InputError("unknown route '" + r + "' (direct, energy, kernel, dual)");
        const SampledFn h = parse_builtin(spec.h_expr, grid);
        const Eigenpair ep = eigenpair(q, bc, spec.index);
        const FrechetRoutes routes{.energy = has_route(spec, "energy"),
                                   .kernel = has_route(spec, "kernel"),
                                   .dual = has_route(spec, "dual")};
        const FrechetResult fr = evaluate_frechet(ep, q, bc, h, routes);
        const FrechetTolerances tol{.route_rel = spec.route_tol, .u_route = spec.u_route_tol};

        out.report = eigen_report(spec, grid, bc, ep);
        out.report["h"] = spec.h_expr;
        out.report["L"] = fr.L;
        out.report["M_direct"] = fr.M_direct;
        out.report["M_energy"] = optional_json(fr.M_energy);
        out.report["M_kernel"] = optional_json(fr.M_kernel);
        out.report["M_dual"] = optional_json(fr.M_dual);
        json gaps = json::object();
        if (fr.M_energy)
            gaps["energy"] = std::abs(*fr.M_energy - fr.M_direct);
        if (fr.M_kernel)
            gaps["kernel"] = std::abs(*fr.M_kernel - fr.M_direct);
        if (fr.M_dual)
            gaps["dual"] = std::abs(*fr.M_dual - fr.M_direct);
        out.report["route_gaps"] = gaps;
        out.report["residuals"]["fredholm"] = fr.fredholm_residual_f1;
        out.report["residuals"]["U_boundary"] = fr.U_boundary_residual;
        out.report["residuals"]["U_route_gap"] = fr.U_route_gap;
        out.report["tolerances"] = {{"route_rel", tol.route_rel},
                                    {"route_abs_floor", tol.route_abs_floor},
                                    {"u_route", tol.u_route}};
        if (!spec.csv_path.empty())
            write_csv(spec.csv_path, fr.U.z);
        const std::string msg = route_disagreement(fr, tol);
        if (!msg.empty()) {
            out.code = exit_route_disagreement;
            out.failure = "route disagreement: " + msg;
        }
        break;
    }
    case Command::kernel: {
        const Eigenpair ep = eigenpair(q, bc, spec.index);
        const KernelMatrix G = build_G(q, ep.lambda);
        const KernelMatrix J = build_Jn(ep, G);
        out.report = eigen_report(spec, grid, bc, ep);
        out.report["kernel"] = {{"dim", J.dim()},
                                {"J_symmetry_residual", J.symmetry_residual()},
                                {"G_symmetry_residual", G.symmetry_residual()}};
        if (!spec.h_expr.empty()) {
            const SampledFn h = parse_builtin(spec.h_expr, grid);
            out.report["h"] = spec.h_expr;
            out.report["M_kernel"] = quadratic_form(J, h);
        }
        if (!spec.csv_path.empty()) {
            std::ofstream f(spec.csv_path);
            if (!f)
                throw InputError("cannot open '" + spec.csv_path + "' for writing");
            write_kernel_csv(f, J);
        }
        break;
    }
    case Command::oracle: {
        require_direction(spec);
        const SampledFn h = parse_builtin(spec.h_expr, grid);
        const FdReport fd = fd_derivatives(q, bc, spec.index, h, spec.s_step);
        json j;
        j["command"] = command_name(spec.command);
        j["grid"] = grid_json(grid);
        j["bc"] = bc_json(bc);
        j["q"] = spec.q_expr;
        j["h"] = spec.h_expr;
        j["index"] = spec.index;
        j["seed"] = spec.seed;
        j["fd"] = {{"s_step", fd.s_step},
                   {"fd_first", fd.fd_first},
                   {"fd_second", fd.fd_second},
                   {"richardson_first", fd.richardson_first},
                   {"richardson_second", fd.richardson_second},
                   {"analytic_L", fd.analytic_L},
                   {"analytic_M", fd.analytic_M},
                   {"abs_gap_first", fd.abs_gap_first},
                   {"abs_gap_second", fd.abs_gap_second},
                   {"rel_gap_first", fd.rel_gap_first},
                   {"rel_gap_second", fd.rel_gap_second}};
        if (spec.modes > 0)
            j["perturbation_sum_M"] = perturbation_sum_M(q, bc, spec.index, h, spec.modes);
        if (spec.trials > 0) {
            const RayleighReport rr = rayleigh_check(q, spec.trials, spec.seed);
            j["rayleigh"] = {{"seed", rr.seed},
                             {"lambda1", rr.lambda1},
                             {"quotient_at_efn", rr.quotient_at_efn},
                             {"min_trial_quotient", rr.min_trial_quotient},
                             {"trials", rr.trial_quotients.size()}};
        }
        out.report = j;
        break;
    }
    case Command::concavity: {
        if (spec.q2_expr.empty())
            throw InputError("command 'concavity' needs a second potential --q2");
        const SampledFn q2 = parse_builtin(spec.q2_expr, grid);
        std::vector<double> taus = spec.taus;
        if (taus.empty())
            taus = {0.0, 0.25, 0.5, 0.75, 1.0};
        const ConcavityReport rep = concavity_probe(q, q2, bc, spec.index, taus);
        json rows = json::array();
        for (const auto& r : rep.rows)
            rows.push_back({{"tau", r.tau},
                            {"lambda_mix", r.lambda_mix},
                            {"lambda_q1", r.lambda_q1},
                            {"lambda_q2", r.lambda_q2},
                            {"slack", r.slack}});
        json j;
        j["command"] = command_name(spec.command);
        j["grid"] = grid_json(grid);
        j["bc"] = bc_json(bc);
        j["q"] = spec.q_expr;
        j["q2"] = spec.q2_expr;
        j["index"] = spec.index;
        j["rows"] = rows;
        j["min_slack"] = rep.min_slack;
        out.report = j;
        if (!spec.csv_path.empty()) {
            std::ofstream f(spec.csv_path);
            if (!f)
                throw InputError("cannot open '" + spec.csv_path + "' for writing");
            f.precision(17);
            f << "tau,lambda_mix,lambda_q1,lambda_q2,slack\n";
            for (const auto& r : rep.rows)
                f << r.tau << ',' << r.lambda_mix << ',' << r.lambda_q1 << ',' << r.lambda_q2 << ','
                  << r.slack << '\n';
        }
        break;
    }
    }
    return out;
}

void emit_error(std::ostream& err, int code, const std::string& kind, const std::string& message)
{
    err << json{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}}.dump() << '\n';
}

} // namespace

Command parse_command(const std::string& name)
{
    if (name == "eigen")
        return Command::eigen;
    if (name == "dlambda")
        return Command::dlambda;
    if (name == "d2lambda")
        return Command::d2lambda;
    if (name == "kernel")
        return Command::kernel;
    if (name == "oracle")
        return Command::oracle;
    if (name == "concavity")
        return Command::concavity;
    throw InputError("unknown command '" + name + "'");
}

std::string command_name(Command c)
{
    switch (c) {
    case Command::eigen: return "eigen";
    case Command::dlambda: return "dlambda";
    case Command::d2lambda: return "d2lambda";
    case Command::kernel: return "kernel";
    case Command::oracle: return "oracle";
    case Command::concavity: return "concavity";
    }
    return "unknown";
}

void apply_environment(JobSpec& spec)
{
    if (const char* s = std::getenv("SL_FRECHET_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(s, &used);
            if (used != std::string(s).size())
                throw InputError("");
            spec.seed = v;
        } catch (const std::exception&) {
            throw InputError(std::string("SL_FRECHET_SEED is not an unsigned integer: '") + s + "'");
        }
    }
}

int run(const JobSpec& spec, std::ostream& out, std::ostream& err)
{
    try {
        Outcome o = execute(spec);
        const std::string text = o.report.dump(2) + "\n";
        if (spec.json_path.empty())
            out << text;
        else
            write_text_file(spec.json_path, text);
        if (o.code != exit_ok)
            emit_error(err, o.code, "route_disagreement", o.failure);
        return o.code;
    } catch (const InputError& e) {
        emit_error(err, exit_bad_input, "input", e.what());
        return exit_bad_input;
    } catch (const SolverError& e) {
        emit_error(err, exit_solver_failure, "solver", e.what());
        return exit_solver_failure;
    } catch (const RouteAgreementError& e) {
        emit_error(err, exit_route_disagreement, "route_disagreement", e.what());
        return exit_route_disagreement;
    }
}

} // namespace slf
