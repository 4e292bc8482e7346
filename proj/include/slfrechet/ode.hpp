#pragma once

// Fixed-step RK4 integration of -z'' + Q(x) z = f(x) on a grid, fundamental
// solutions of the homogeneous equation and the variation-of-constants kernel.

#include "slfrechet/grid.hpp"

#include <utility>
#include <vector>

namespace slf {

// A trajectory and its derivative, both produced by the integrator.
struct IvpSolution {
    SampledFn z;
    SampledFn dz;
};

struct IvpOptions {
    double blowup_cap = 1e120;
};

// Forward solve from x = 0 with z(0) = z0, z'(0) = dz0. Q and f are
// evaluated at the RK4 midpoint stages by cubic interpolation (cell_midpoints).
IvpSolution integrate_ivp(const SampledFn& Q, const SampledFn& f, double z0, double dz0,
                          const IvpOptions& opts = {});

// Backward solve from x = ell with z(ell) = z_end, z'(ell) = dz_end.
IvpSolution integrate_ivp_backward(const SampledFn& Q, const SampledFn& f, double z_end,
                                   double dz_end, const IvpOptions& opts = {});

// psi1 has initial data (1, 0), psi2 has (0, 1).
struct FundamentalPair {
    IvpSolution psi1;
    IvpSolution psi2;
};

FundamentalPair fundamental_solutions(const SampledFn& Q, const IvpOptions& opts = {});

// psi1 psi2' - psi1' psi2 at every node.
std::vector<double> wronskian(const FundamentalPair& fs);

// Dense row-major table of a two-point kernel on the grid square.
class KernelMatrix {
public:
    explicit KernelMatrix(Grid grid);

    const Grid& grid() const { return grid_; }
    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    std::span<const double> row(std::size_t i) const
    {
        return {entries_.data() + i * dim_, dim_};
    }

    // max |K(i,j) - K(j,i)|
    double symmetry_residual() const;
    // max |K(i,j) + K(j,i)|
    double antisymmetry_residual() const;

private:
    Grid grid_;
    std::size_t dim_;
    std::vector<double> entries_;
};

// W(x, y) = psi1(x) psi2(y) - psi2(x) psi1(y).
KernelMatrix kernel_W(const IvpSolution& psi1, const IvpSolution& psi2);

// z(x) = int_0^x W(x, y) f(y) dy from a tabulated kernel.
SampledFn variation_of_constants(const KernelMatrix& W, const SampledFn& f);

// The same integral without materializing W, using the separable form
// W(x, y) = psi1(x) psi2(y) - psi2(x) psi1(y). Also returns z'.
IvpSolution variation_of_constants(const FundamentalPair& fs, const SampledFn& f);

} // namespace slf
