#pragma once

// First and second Frechet derivatives of lambda_n(q) along a direction h.
//
//   L = int E^2 h
//   U solves -U'' + (q - lambda) U = -E (h - L),  U(0) = U'(0) = 0
//   M = 2 int E (h - L) U                                  (direct)
//     = int int J(x, y) h(x) h(y) dx dy                    (kernel)
//     = -2 int (U'^2 + (q - lambda) U^2)   if beta in {pi/2, pi}   (energy)
//     = -2 int (V'^2 + (q - lambda) V^2)   if alpha in {0, pi/2}   (dual, V(ell) = V'(ell) = 0)

#include "slfrechet/eigensolver.hpp"
#include "slfrechet/grid.hpp"
#include "slfrechet/ode.hpp"

#include <optional>
#include <string>

namespace slf {

double first_derivative(const Eigenpair& ep, const SampledFn& h);

// hat_h = E (h - L)
SampledFn hat_h(const Eigenpair& ep, const SampledFn& h, double L);

enum class UnMethod { ivp, kernel };

// U_n by direct IVP integration or by the variation-of-constants integral.
// Both carry a derivative track.
IvpSolution solve_Un(const Eigenpair& ep, const SampledFn& q, const SampledFn& h, double L,
                     UnMethod method);

double second_derivative_direct(const Eigenpair& ep, const SampledFn& h, const SampledFn& U);

// Requires z(ell) = 0 or z'(ell) = 0 at the right end; InputError otherwise.
double second_derivative_energy(const Eigenpair& ep, const SampledFn& q, const IvpSolution& U,
                                const BoundaryData& bc);

// Backward solution of the U_n equation with V(ell) = V'(ell) = 0.
IvpSolution solve_Vn(const Eigenpair& ep, const SampledFn& q, const SampledFn& h, double L);

// Energy form in V; requires z(0) = 0 or z'(0) = 0 at the left end.
double second_derivative_energy_dual(const Eigenpair& ep, const SampledFn& q, const IvpSolution& V,
                                     const BoundaryData& bc);

// Symmetrized kernel G(x, y) = W(min, max) built from the fundamental
// solutions of -z'' + (q - lambda) z = 0.
KernelMatrix build_G(const SampledFn& q, double lambda);

// Two-point kernel of the second derivative:
//   J(x, y) = E(x) E(y) [G(x, y) s^2 - g(x) E(y) s - g(y) E(x) s + c E(x) E(y)]
// where g(x) = int G(x, v) E(v) dv, c = int g E and s = int E^2 (= 1).
KernelMatrix build_Jn(const Eigenpair& ep, const KernelMatrix& G);

// Double Simpson contraction int int J(x, y) h(x) h(y).
double quadratic_form(const KernelMatrix& J, const SampledFn& h);

// int E (L - h) E; vanishes when L is the Rayleigh average of h.
double fredholm_residual(const Eigenpair& ep, const SampledFn& h, double L);

// |U(ell) cos beta - U'(ell) sin beta|
double un_boundary_residual(const IvpSolution& U, const BoundaryData& bc);

struct FrechetRoutes {
    bool energy = false;
    bool kernel = false;
    bool dual = false;
};

struct FrechetTolerances {
    double route_rel = 1e-5;
    double route_abs_floor = 1e-8;
    // max-norm bound on |U_ivp - U_kernel|, scaled by 1 + max|U|
    double u_route = 1e-6;
};

struct FrechetResult {
    double L = 0.0;
    IvpSolution U;
    SampledFn hat_h;
    double M_direct = 0.0;
    std::optional<double> M_energy;
    std::optional<double> M_kernel;
    std::optional<double> M_dual;
    double fredholm_residual_f1 = 0.0;
    double U_boundary_residual = 0.0;
    // max |U_ivp - U_kernel| over nodes
    double U_route_gap = 0.0;
};

// Evaluates every requested route without judging agreement.
FrechetResult evaluate_frechet(const Eigenpair& ep, const SampledFn& q, const BoundaryData& bc,
                               const SampledFn& h, const FrechetRoutes& routes = {});

// Empty when all routes agree; otherwise a description of each violation.
std::string route_disagreement(const FrechetResult& r, const FrechetTolerances& tol = {});

// Evaluates every requested route and throws RouteAgreementError when any
// of them departs from M_direct beyond tol.route_rel * (1 + |M_direct|)
// (with an absolute floor).
FrechetResult frechet_derivatives(const Eigenpair& ep, const SampledFn& q, const BoundaryData& bc,
                                  const SampledFn& h, const FrechetRoutes& routes = {},
                                  const FrechetTolerances& tol = {});

// Scaled agreement gap used by frechet_derivatives.
double route_gap(double reference, double other);

} // namespace slf
