#include "slfrechet/frechet.hpp"

#include "slfrechet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slf {

namespace {

bool is_zero(const SampledFn& f)
{
    return std::all_of(f.values().begin(), f.values().end(), [](double v) { return v == 0.0; });
}

// Source term of the U_n equation: -E (h - L).
SampledFn un_source(const Eigenpair& ep, const SampledFn& h, double L)
{
    return -1.0 * hat_h(ep, h, L);
}

double energy_integral(const SampledFn& q, double lambda, const IvpSolution& U)
{
    const SampledFn Q = q - lambda;
    return -2.0 * integrate(U.dz * U.dz + Q * U.z * U.z);
}

} // namespace

double first_derivative(const Eigenpair& ep, const SampledFn& h)
{
    return integrate(ep.efn * ep.efn * h);
}

SampledFn hat_h(const Eigenpair& ep, const SampledFn& h, double L)
{
    return ep.efn * (h - L);
}

IvpSolution solve_Un(const Eigenpair& ep, const SampledFn& q, const SampledFn& h, double L,
                     UnMethod method)
{
    require_same_grid(q.grid(), h.grid());
    require_same_grid(q.grid(), ep.efn.grid());
    const SampledFn Q = q - ep.lambda;
    const SampledFn f = un_source(ep, h, L);
    if (method == UnMethod::ivp)
        return integrate_ivp(Q, f, 0.0, 0.0);
    return variation_of_constants(fundamental_solutions(Q), f);
}

double second_derivative_direct(const Eigenpair& ep, const SampledFn& h, const SampledFn& U)
{
    const double L = first_derivative(ep, h);
    return 2.0 * integrate(hat_h(ep, h, L) * U);
}

double second_derivative_energy(const Eigenpair& ep, const SampledFn& q, const IvpSolution& U,
                                const BoundaryData& bc)
{
    if (!bc.is_dirichlet_right() && !bc.is_neumann_right())
        throw InputError("energy form requires z(l)=0 or z'(l)=0");
    return energy_integral(q, ep.lambda, U);
}

IvpSolution solve_Vn(const Eigenpair& ep, const SampledFn& q, const SampledFn& h, double L)
{
    require_same_grid(q.grid(), h.grid());
    return integrate_ivp_backward(q - ep.lambda, un_source(ep, h, L), 0.0, 0.0);
}

double second_derivative_energy_dual(const Eigenpair& ep, const SampledFn& q, const IvpSolution& V,
                                     const BoundaryData& bc)
{
    if (!bc.is_dirichlet_left() && !bc.is_neumann_left())
        throw InputError("dual energy form requires z(0)=0 or z'(0)=0");
    return energy_integral(q, ep.lambda, V);
}

KernelMatrix build_G(const SampledFn& q, double lambda)
{
    const FundamentalPair fs = fundamental_solutions(q - lambda);
    const auto& p1 = fs.psi1.z;
    const auto& p2 = fs.psi2.z;
    KernelMatrix G(q.grid());
    const std::size_t n = G.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = p1[i] * p2[j] - p2[i] * p1[j];
            G(i, j) = v;
            G(j, i) = v;
        }
    }
    return G;
}

KernelMatrix build_Jn(const Eigenpair& ep, const KernelMatrix& G)
{
    require_same_grid(G.grid(), ep.efn.grid());
    const std::size_t n = G.dim();
    const auto w = simpson_weights(G.grid());
    const auto E = ep.efn.values();

    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = G.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += w[j] * row[j] * E[j];
        g[i] = acc;
    }
    double c = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        c += w[i] * g[i] * E[i];
        s += w[i] * E[i] * E[i];
    }

    KernelMatrix J(G.grid());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = E[i] * E[j] *
                             (G(i, j) * s * s - s * g[i] * E[j] - s * g[j] * E[i] + c * E[i] * E[j]);
            J(i, j) = v;
            J(j, i) = v;
        }
    }
    return J;
}

double quadratic_form(const KernelMatrix& J, const SampledFn& h)
{
    require_same_grid(J.grid(), h.grid());
    const std::size_t n = J.dim();
    const auto w = simpson_weights(J.grid());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = w[i] * h[i];
        if (hi == 0.0)
            continue;
        const auto row = J.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += row[j] * w[j] * h[j];
        total += hi * acc;
    }
    return total;
}

double fredholm_residual(const Eigenpair& ep, const SampledFn& h, double L)
{
    return integrate(ep.efn * (L - h) * ep.efn);
}

double un_boundary_residual(const IvpSolution& U, const BoundaryData& bc)
{
    return std::abs(U.z.back() * std::cos(bc.beta()) - U.dz.back() * std::sin(bc.beta()));
}

double route_gap(double reference, double other)
{
    return std::abs(reference - other) / (1.0 + std::abs(reference));
}

FrechetResult evaluate_frechet(const Eigenpair& ep, const SampledFn& q, const BoundaryData& bc,
                               const SampledFn& h, const FrechetRoutes& routes)
{
    require_same_grid(q.grid(), h.grid());
    require_same_grid(q.grid(), ep.efn.grid());
    const Grid& grid = q.grid();
    const SampledFn zero = SampledFn::constant(grid, 0.0);

    if (is_zero(h)) {
        auto zero_if = [](bool on) { return on ? std::optional<double>(0.0) : std::nullopt; };
        return FrechetResult{.L = 0.0,
                             .U = {zero, zero},
                             .hat_h = zero,
                             .M_direct = 0.0,
                             .M_energy = zero_if(routes.energy),
                             .M_kernel = zero_if(routes.kernel),
                             .M_dual = zero_if(routes.dual),
                             .fredholm_residual_f1 = 0.0,
                             .U_boundary_residual = 0.0,
                             .U_route_gap = 0.0};
    }

    const double L = first_derivative(ep, h);
    IvpSolution U = solve_Un(ep, q, h, L, UnMethod::ivp);
    SampledFn hh = hat_h(ep, h, L);
    const double M = 2.0 * integrate(hh * U.z);
    const IvpSolution U_kernel = solve_Un(ep, q, h, L, UnMethod::kernel);
    FrechetResult r{.L = L,
                    .U = U,
                    .hat_h = std::move(hh),
                    .M_direct = M,
                    .M_energy = std::nullopt,
                    .M_kernel = std::nullopt,
                    .M_dual = std::nullopt,
                    .fredholm_residual_f1 = fredholm_residual(ep, h, L),
                    .U_boundary_residual = un_boundary_residual(U, bc),
                    .U_route_gap = (U.z - U_kernel.z).max_abs()};

    if (routes.energy)
        r.M_energy = second_derivative_energy(ep, q, r.U, bc);
    if (routes.dual)
        r.M_dual = second_derivative_energy_dual(ep, q, solve_Vn(ep, q, h, L), bc);
    if (routes.kernel) {
        const KernelMatrix J = build_Jn(ep, build_G(q, ep.lambda));
        r.M_kernel = quadratic_form(J, h);
    }
    return r;
}

std::string route_disagreement(const FrechetResult& r, const FrechetTolerances& tol)
{
    std::ostringstream failures;
    auto check = [&](const char* name, const std::optional<double>& m) {
        if (!m)
            return;
        const double diff = std::abs(*m - r.M_direct);
        if (diff > std::max(tol.route_rel * (1.0 + std::abs(r.M_direct)), tol.route_abs_floor))
            failures << name << " differs from M_direct by " << diff << "; ";
    };
    check("M_energy", r.M_energy);
    check("M_kernel", r.M_kernel);
    check("M_dual", r.M_dual);
    if (r.U_route_gap > tol.u_route * (1.0 + r.U.z.max_abs()))
        failures << "U_n routes differ by " << r.U_route_gap << "; ";
    return failures.str();
}

FrechetResult frechet_derivatives(const Eigenpair& ep, const SampledFn& q, const BoundaryData& bc,
                                  const SampledFn& h, const FrechetRoutes& routes,
                                  const FrechetTolerances& tol)
{
    FrechetResult r = evaluate_frechet(ep, q, bc, h, routes);
    const std::string msg = route_disagreement(r, tol);
    if (!msg.empty())
        throw RouteAgreementError("route disagreement: " + msg);
    return r;
}

} // namespace slf
