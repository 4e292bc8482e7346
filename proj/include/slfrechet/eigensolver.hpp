#pragma once

// Eigenvalues of -z'' + q z = lambda z on [0, ell] with separated boundary
// conditions
//     z(0) cos(alpha) - z'(0) sin(alpha) = 0,
//     z(ell) cos(beta) - z'(ell) sin(beta) = 0,
// located by shooting on the Pruefer angle.
//
// Index convention: index k >= 0 counts the interior zeros of the
// eigenfunction. The n-th Dirichlet eigenvalue (n = 1, 2, ...) is index n - 1;
// the zeroth Neumann eigenvalue is index 0.

#include "slfrechet/grid.hpp"
#include "slfrechet/ode.hpp"

namespace slf {

class BoundaryData {
public:
    // alpha in [0, pi), beta in (0, pi]; InputError otherwise.
    BoundaryData(double alpha, double beta);

    static BoundaryData dirichlet();
    static BoundaryData neumann();

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    bool is_dirichlet_left() const;
    bool is_neumann_left() const;
    bool is_dirichlet_right() const;
    bool is_neumann_right() const;

private:
    double alpha_;
    double beta_;
};

struct EigenSolveOptions {
    double bisection_tol = 1e-8;
    int max_newton_steps = 5;
    double angle_tol = 1e-10;
    int max_bracket_growth = 60;
    IvpOptions ivp;
};

struct EigenDiagnostics {
    int bracket_expansions = 0;
    int bisection_steps = 0;
    int newton_steps = 0;
    double angle_residual = 0.0;
    double lower_bracket = 0.0;
    double upper_bracket = 0.0;
};

struct PrueferState {
    double theta;
    double dtheta_dlambda;
};

// Angle with tan(theta) = scale * z / z'. For scale = 1 this is
// theta' = cos^2 theta + (lambda - q) sin^2 theta, theta(0) = alpha, and the
// index-k eigenvalue solves theta(ell) = k pi + beta. Other scales map alpha
// and beta through atan2(scale sin, cos); zeros of z stay at multiples of pi.
double pruefer_angle_at_ell(const SampledFn& q, const BoundaryData& bc, double lambda, double scale = 1.0);

// theta(ell) together with d theta(ell) / d lambda from the variational equation.
PrueferState pruefer_with_sensitivity(const SampledFn& q, const BoundaryData& bc, double lambda,
                                      double scale = 1.0);

// Scale used by the eigenvalue solver: max(1, (index + 1) pi / ell).
double pruefer_scale(double ell, int index);

// k pi + beta mapped to the scaled angle.
double pruefer_target(const BoundaryData& bc, int index, double scale);

struct EigenvalueResult {
    double lambda;
    EigenDiagnostics diagnostics;
};

// Root of theta(ell; lambda) = k pi + beta. SolverError if no bracket is found.
EigenvalueResult solve_eigenvalue(const SampledFn& q, const BoundaryData& bc, int index,
                                  const EigenSolveOptions& opts = {});

double eigenvalue(const SampledFn& q, const BoundaryData& bc, int index,
                  const EigenSolveOptions& opts = {});

struct Eigenpair {
    int index = 0;
    double lambda = 0.0;
    SampledFn efn;        // unit L2 norm, positive near x = 0
    SampledFn efn_deriv;  // derivative track from the integrator
    double normalization_residual = 0.0;
    double boundary_residual = 0.0;
    int sign_changes = 0;
    EigenDiagnostics diagnostics;
};

Eigenpair eigenpair(const SampledFn& q, const BoundaryData& bc, int index,
                    const EigenSolveOptions& opts = {});

// Sign changes over the interior nodes, ignoring values within
// rel_tol * max|f| of zero.
int count_sign_changes(const SampledFn& f, double rel_tol = 1e-10);

} // namespace slf
