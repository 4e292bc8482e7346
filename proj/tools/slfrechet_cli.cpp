// slfrechet: eigenvalues of -z'' + q z = lambda z and their first and second
// derivatives with respect to the potential q.

#include "slfrechet/errors.hpp"
#include "slfrechet/function_io.hpp"
#include "slfrechet/job.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <numbers>
#include <sstream>

namespace {

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

struct RawOptions {
    std::string ell = "pi";
    std::string alpha;
    std::string beta;
    bool dirichlet = false;
    bool neumann = false;
    int index = -1;
    int dirichlet_n = 0;
    std::string routes = "direct";
    std::string taus;
};

void add_common(CLI::App* sub, slf::JobSpec& spec, RawOptions& raw)
{
    sub->add_option("--ell", raw.ell, "interval length (accepts pi)");
    sub->add_option("--n-cells", spec.n_cells, "grid cells (even, >= 2)");
    sub->add_option("--alpha", raw.alpha, "left boundary angle in [0, pi)");
    sub->add_option("--beta", raw.beta, "right boundary angle in (0, pi]");
    sub->add_flag("--dirichlet", raw.dirichlet, "z(0) = z(ell) = 0");
    sub->add_flag("--neumann", raw.neumann, "z'(0) = z'(ell) = 0");
    sub->add_option("--index", raw.index, "eigenvalue index k >= 0 (interior zeros)");
    sub->add_option("--dirichlet-n", raw.dirichlet_n, "1-based Dirichlet numbering, index = n - 1");
    sub->add_option("--q", spec.q_expr, "potential expression");
    sub->add_option("--h", spec.h_expr, "direction expression");
    sub->add_option("--json", spec.json_path, "write the JSON report here instead of stdout");
    sub->add_option("--csv", spec.csv_path, "plot data output path");
    sub->add_option("--seed", spec.seed, "random seed (SL_FRECHET_SEED overrides)");
    sub->add_option("--route-tol", spec.route_tol, "relative route-agreement tolerance");
    sub->add_option("--u-route-tol", spec.u_route_tol, "U_n route-agreement tolerance");
}

void finish(slf::JobSpec& spec, const RawOptions& raw)
{
    using slf::InputError;
    spec.ell = slf::parse_real(raw.ell);
    if (raw.dirichlet && raw.neumann)
        throw InputError("--dirichlet and --neumann are mutually exclusive");
    const bool neumann = raw.neumann;
    spec.alpha = raw.alpha.empty() ? (neumann ? 0.5 * std::numbers::pi : 0.0) : slf::parse_real(raw.alpha);
    spec.beta = raw.beta.empty() ? (neumann ? 0.5 * std::numbers::pi : std::numbers::pi) : slf::parse_real(raw.beta);
    if ((raw.dirichlet || raw.neumann) && (!raw.alpha.empty() || !raw.beta.empty()))
        throw InputError("--dirichlet/--neumann cannot be combined with --alpha/--beta");
    if (raw.index >= 0 && raw.dirichlet_n > 0)
        throw InputError("--index and --dirichlet-n are mutually exclusive");
    if (raw.dirichlet_n > 0)
        spec.index = raw.dirichlet_n - 1;
    else if (raw.index >= 0)
        spec.index = raw.index;
    spec.routes = split_list(raw.routes);
    spec.taus.clear();
    for (const auto& t : split_list(raw.taus))
        spec.taus.push_back(slf::parse_real(t));
    slf::apply_environment(spec);
}

void input_error(const std::string& msg)
{
    std::cerr << nlohmann::json{{"error", {{"code", 2}, {"kind", "input"}, {"message", msg}}}}.dump()
              << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sturm-Liouville eigenvalues and their Frechet derivatives in the potential"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    slf::JobSpec spec;
    RawOptions raw;

    auto* eigen = app.add_subcommand("eigen", "eigenvalue and normalized eigenfunction");
    auto* dl = app.add_subcommand("dlambda", "first derivative L along h");
    auto* d2 = app.add_subcommand("d2lambda", "second derivative M along h by several routes");
    auto* kernel = app.add_subcommand("kernel", "tabulate the quadratic-form kernel J_n");
    auto* oracle = app.add_subcommand("oracle", "finite-difference and variational checks");
    auto* conc = app.add_subcommand("concavity", "concavity slack of lambda along q -> q2");
    for (auto* sub : {eigen, dl, d2, kernel, oracle, conc})
        add_common(sub, spec, raw);
    d2->add_option("--routes", raw.routes, "comma list of direct,energy,kernel,dual");
    oracle->add_option("--s-step", spec.s_step, "finite-difference step");
    oracle->add_option("--modes", spec.modes, "modes in the perturbation-sum oracle (0 skips)");
    oracle->add_option("--trials", spec.trials, "random Rayleigh trials (0 skips)");
    conc->add_option("--q2", spec.q2_expr, "second potential expression");
    conc->add_option("--taus", raw.taus, "comma list of weights in [0, 1]");

    try {
        app.parse(argc, argv);
        spec.command = slf::parse_command(app.get_subcommands().front()->get_name());
        finish(spec, raw);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        input_error(e.what());
        return slf::exit_bad_input;
    } catch (const slf::InputError& e) {
        input_error(e.what());
        return slf::exit_bad_input;
    }
    return slf::run(spec, std::cout, std::cerr);
}
