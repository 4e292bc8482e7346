#pragma once

// Independent checks of the derivative formulas: finite differences of
// s -> lambda(q + s h), the truncated second-order perturbation sum, the
// Rayleigh quotient and concavity of lambda in q.

#include "slfrechet/eigensolver.hpp"
#include "slfrechet/grid.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace slf {

struct FdReport {
    double s_step = 0.0;
    double fd_first = 0.0;
    double fd_second = 0.0;
    double richardson_first = 0.0;
    double richardson_second = 0.0;
    double analytic_L = 0.0;
    double analytic_M = 0.0;
    double abs_gap_first = 0.0;
    double abs_gap_second = 0.0;
    double rel_gap_first = 0.0;   // |richardson_first - L| / (1 + |L|)
    double rel_gap_second = 0.0;  // |richardson_second - M| / (1 + |M|)
};

// Central differences with steps s and s/2, Richardson-combined, compared
// against L and M_direct. s must lie in [1e-6, 1e-1].
FdReport fd_derivatives(const SampledFn& q, const BoundaryData& bc, int index, const SampledFn& h,
                        double s = 1e-3, const EigenSolveOptions& opts = {});

// 2 sum_{m != index, m < modes} <E_index h, E_m>^2 / (lambda_index - lambda_m).
// Requires modes >= index + 5.
double perturbation_sum_M(const SampledFn& q, const BoundaryData& bc, int index, const SampledFn& h,
                          int modes);

// int (z'^2 + q z^2) / int z^2 with Simpson quadrature.
double rayleigh_quotient(const SampledFn& q, const SampledFn& z, const SampledFn& dz);

struct RayleighReport {
    std::uint64_t seed = 0;
    double lambda1 = 0.0;
    double quotient_at_efn = 0.0;
    double min_trial_quotient = 0.0;
    std::vector<double> trial_quotients;
};

// Compares the first Dirichlet eigenvalue with the Rayleigh quotient of its
// eigenfunction and of `trials` random piecewise-linear trial functions
// vanishing at both ends.
RayleighReport rayleigh_check(const SampledFn& q, int trials, std::uint64_t seed);

struct ConcavityRow {
    double tau = 0.0;
    double lambda_mix = 0.0;
    double lambda_q1 = 0.0;
    double lambda_q2 = 0.0;
    double slack = 0.0;  // lambda_mix - tau lambda_q1 - (1 - tau) lambda_q2
};

struct ConcavityReport {
    std::vector<ConcavityRow> rows;
    double min_slack = 0.0;
};

ConcavityReport concavity_probe(const SampledFn& q1, const SampledFn& q2, const BoundaryData& bc,
                                int index, const std::vector<double>& taus);

// Seeded random functions.

// Piecewise-linear through `knots` + 1 equispaced knot values drawn
// i.i.d. uniform in [-amplitude, amplitude], sampled on the grid.
SampledFn random_piecewise_linear(const Grid& grid, std::mt19937_64& rng, int knots,
                                  double amplitude = 1.0);

// c0 + sum_{m=1..modes} (a_m cos(m pi x / ell) + b_m sin(m pi x / ell)) / m
// with coefficients uniform in [-amplitude, amplitude].
SampledFn random_smooth(const Grid& grid, std::mt19937_64& rng, int modes, double amplitude = 1.0);

} // namespace slf
