#include "slfrechet/eigensolver.hpp"

#include "slfrechet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace slf {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double angle_eps = 1e-12;

// Scaled angle: tan(theta) = S z / z'. S = 1 is the classical Pruefer angle;
// S near sqrt(lambda - q) keeps theta' of order S instead of lambda, which is
// what lets RK4 resolve high indices on moderate grids.
struct PrueferRhs {
    double lambda;
    double S;

    // Returns (theta', s') with s = d theta / d lambda.
    std::pair<double, double> operator()(double q, double theta, double s) const
    {
        const double sn = std::sin(theta);
        const double cs = std::cos(theta);
        const double k = (lambda - q) / S;
        const double dtheta = S * cs * cs + k * sn * sn;
        const double ds = 2.0 * (k - S) * sn * cs * s + sn * sn / S;
        return {dtheta, ds};
    }
};

double scaled_angle(double angle, double S) { return std::atan2(S * std::sin(angle), std::cos(angle)); }

PrueferState shoot(const SampledFn& q, double alpha, double lambda, double S, bool with_sensitivity)
{
    if (!(S > 0.0) || !std::isfinite(S))
        throw InputError("Pruefer scale must be positive");
    const auto v = q.values();
    const auto mid = cell_midpoints(v);
    const double h = q.grid().step();
    const PrueferRhs rhs{lambda, S};
    double theta = scaled_angle(alpha, S);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double q0 = v[i], q1 = v[i + 1], qm = mid[i];
        if (with_sensitivity) {
            const auto [a1, b1] = rhs(q0, theta, s);
            const auto [a2, b2] = rhs(qm, theta + 0.5 * h * a1, s + 0.5 * h * b1);
            const auto [a3, b3] = rhs(qm, theta + 0.5 * h * a2, s + 0.5 * h * b2);
            const auto [a4, b4] = rhs(q1, theta + h * a3, s + h * b3);
            theta += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            s += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        } else {
            const double a1 = rhs(q0, theta, 0.0).first;
            const double a2 = rhs(qm, theta + 0.5 * h * a1, 0.0).first;
            const double a3 = rhs(qm, theta + 0.5 * h * a2, 0.0).first;
            const double a4 = rhs(q1, theta + h * a3, 0.0).first;
            theta += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        }
    }
    if (!std::isfinite(theta) || !std::isfinite(s))
        throw SolverError("Pruefer integration produced a non-finite angle at lambda = " +
                          std::to_string(lambda));
    return {theta, s};
}

double min_value(const SampledFn& f) { return *std::min_element(f.values().begin(), f.values().end()); }
double max_value(const SampledFn& f) { return *std::max_element(f.values().begin(), f.values().end()); }

} // namespace

BoundaryData::BoundaryData(double alpha, double beta) : alpha_(alpha), beta_(beta)
{
    if (!(alpha >= 0.0 && alpha < pi))
        throw InputError("alpha must lie in [0, pi), got " + std::to_string(alpha));
    if (!(beta > 0.0 && beta <= pi))
        throw InputError("beta must lie in (0, pi], got " + std::to_string(beta));
}

BoundaryData BoundaryData::dirichlet() { return {0.0, pi}; }
BoundaryData BoundaryData::neumann() { return {0.5 * pi, 0.5 * pi}; }

bool BoundaryData::is_dirichlet_left() const { return std::abs(alpha_) <= angle_eps; }
bool BoundaryData::is_neumann_left() const { return std::abs(alpha_ - 0.5 * pi) <= angle_eps; }
bool BoundaryData::is_dirichlet_right() const { return std::abs(beta_ - pi) <= angle_eps; }
bool BoundaryData::is_neumann_right() const { return std::abs(beta_ - 0.5 * pi) <= angle_eps; }

double pruefer_scale(double ell, int index) { return std::max(1.0, (index + 1) * pi / ell); }

double pruefer_target(const BoundaryData& bc, int index, double scale)
{
    return index * pi + scaled_angle(bc.beta(), scale);
}

double pruefer_angle_at_ell(const SampledFn& q, const BoundaryData& bc, double lambda, double scale)
{
    return shoot(q, bc.alpha(), lambda, scale, false).theta;
}

PrueferState pruefer_with_sensitivity(const SampledFn& q, const BoundaryData& bc, double lambda,
                                      double scale)
{
    return shoot(q, bc.alpha(), lambda, scale, true);
}

EigenvalueResult solve_eigenvalue(const SampledFn& q, const BoundaryData& bc, int index,
                                  const EigenSolveOptions& opts)
{
    if (index < 0)
        throw InputError("eigenvalue index must be nonnegative, got " + std::to_string(index));

    const double ell = q.grid().ell();
    const double S = pruefer_scale(ell, index);
    const double target = pruefer_target(bc, index, S);
    auto residual = [&](double lambda) { return pruefer_angle_at_ell(q, bc, lambda, S) - target; };

    EigenDiagnostics diag;
    double lo = min_value(q) - 1.0;
    const double freq = (index + 2) * pi / ell;
    double hi = max_value(q) + freq * freq + 1.0;

    // A Robin left end can push the lowest eigenvalues below min q.
    double r_lo = residual(lo);
    for (int it = 0; r_lo >= 0.0; ++it) {
        if (it >= opts.max_bracket_growth)
            throw SolverError("index out of searched range: no lower bracket for index " +
                              std::to_string(index));
        const double width = hi - lo;
        lo -= width;
        r_lo = residual(lo);
        ++diag.bracket_expansions;
    }
    double r_hi = residual(hi);
    for (int it = 0; r_hi <= 0.0; ++it) {
        if (it >= opts.max_bracket_growth)
            throw SolverError("index out of searched range: no upper bracket for index " +
                              std::to_string(index));
        hi = lo + 2.0 * (hi - lo);
        r_hi = residual(hi);
        ++diag.bracket_expansions;
    }
    diag.lower_bracket = lo;
    diag.upper_bracket = hi;

    auto bisect_until = [&](double width_tol) {
        while (hi - lo > width_tol * std::max(1.0, std::abs(0.5 * (lo + hi)))) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            const double r = residual(mid);
            ++diag.bisection_steps;
            if (r == 0.0) {
                lo = hi = mid;
                break;
            }
            (r < 0.0 ? lo : hi) = mid;
        }
    };
    bisect_until(opts.bisection_tol);

    double lambda = 0.5 * (lo + hi);
    PrueferState st = pruefer_with_sensitivity(q, bc, lambda, S);
    double r = st.theta - target;
    for (int it = 0; it < opts.max_newton_steps; ++it) {
        if (r == 0.0 || !(st.dtheta_dlambda > 0.0))
            break;
        const double next = lambda - r / st.dtheta_dlambda;
        if (!(next >= lo && next <= hi))
            break;
        const double step = next - lambda;
        lambda = next;
        st = pruefer_with_sensitivity(q, bc, lambda, S);
        r = st.theta - target;
        ++diag.newton_steps;
        (r < 0.0 ? lo : hi) = lambda;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lambda)))
            break;
    }

    if (std::abs(r) > opts.angle_tol) {
        // Newton did not polish enough; fall back to plain bisection.
        lo = std::min(lo, lambda);
        hi = std::max(hi, lambda);
        bisect_until(std::numeric_limits<double>::epsilon());
        lambda = 0.5 * (lo + hi);
        r = residual(lambda);
        if (std::abs(r) > opts.angle_tol)
            throw SolverError("eigenvalue angle residual " + std::to_string(r) +
                              " exceeds tolerance for index " + std::to_string(index));
    }
    diag.angle_residual = std::abs(r);
    return {lambda, diag};
}

double eigenvalue(const SampledFn& q, const BoundaryData& bc, int index, const EigenSolveOptions& opts)
{
    return solve_eigenvalue(q, bc, index, opts).lambda;
}

int count_sign_changes(const SampledFn& f, double rel_tol)
{
    const double floor = rel_tol * f.max_abs();
    int changes = 0;
    int last_sign = 0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        const double v = f[i];
        if (std::abs(v) <= floor)
            continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign)
            ++changes;
        last_sign = s;
    }
    return changes;
}

Eigenpair eigenpair(const SampledFn& q, const BoundaryData& bc, int index, const EigenSolveOptions& opts)
{
    const auto [lambda, diag] = solve_eigenvalue(q, bc, index, opts);
    const SampledFn Q = q - lambda;
    const SampledFn zero = SampledFn::constant(q.grid(), 0.0);
    IvpSolution phi = integrate_ivp(Q, zero, std::sin(bc.alpha()), std::cos(bc.alpha()), opts.ivp);

    const double norm = std::sqrt(integrate(phi.z * phi.z));
    if (!(norm > 0.0))
        throw SolverError("eigenfunction has zero norm");
    double scale = 1.0 / norm;

    // Initial data (sin alpha, cos alpha) already makes phi positive near 0;
    // flip only if roundoff says otherwise.
    const double floor = 1e-12 * phi.z.max_abs();
    for (std::size_t i = 0; i < phi.z.size(); ++i) {
        if (std::abs(phi.z[i]) > floor) {
            if (phi.z[i] < 0.0)
                scale = -scale;
            break;
        }
    }

    Eigenpair ep{.index = index,
                 .lambda = lambda,
                 .efn = scale * phi.z,
                 .efn_deriv = scale * phi.dz,
                 .diagnostics = diag};
    ep.normalization_residual = std::abs(integrate(ep.efn * ep.efn) - 1.0);
    ep.boundary_residual = std::abs(ep.efn.back() * std::cos(bc.beta()) -
                                    ep.efn_deriv.back() * std::sin(bc.beta()));
    ep.sign_changes = count_sign_changes(ep.efn);
    if (ep.sign_changes != index)
        throw SolverError("eigenfunction for index " + std::to_string(index) + " has " +
                          std::to_string(ep.sign_changes) + " interior sign changes");
    return ep;
}

} // namespace slf
