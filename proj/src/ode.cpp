#include "slfrechet/ode.hpp"

#include "slfrechet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slf {

namespace {

void check_cap(double z, double dz, double cap, std::size_t node)
{
    if (!std::isfinite(z) || !std::isfinite(dz) || std::abs(z) > cap || std::abs(dz) > cap)
        throw SolverError("IVP solution exceeded blow-up cap at node " + std::to_string(node) +
                          " (grid too coarse or spectral parameter too large)");
}

// Last entry of cumulative_integral without building the whole table.
double prefix_integral(double h, std::span<const double> v)
{
    const std::size_t m = v.size() - 1;
    const std::size_t even = m - m % 2;
    double s = 0.0;
    for (std::size_t k = 0; k + 2 <= even; k += 2)
        s += v[k] + 4.0 * v[k + 1] + v[k + 2];
    s *= h / 3.0;
    if (m % 2 == 1)
        s += 0.5 * h * (v[m - 1] + v[m]);
    return s;
}

// z' = w, w' = Q z - f
IvpSolution rk4(std::span<const double> Q, std::span<const double> f, const Grid& grid, double z0,
                double dz0, double cap)
{
    const std::size_t n = grid.size();
    const double h = grid.step();
    const auto Qm = cell_midpoints(Q);
    const auto fm_all = cell_midpoints(f);
    std::vector<double> z(n), w(n);
    z[0] = z0;
    w[0] = dz0;
    check_cap(z0, dz0, cap, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double q0 = Q[i], q1 = Q[i + 1], qm = Qm[i];
        const double f0 = f[i], f1 = f[i + 1], fm = fm_all[i];
        const double y = z[i], v = w[i];

        const double k1z = v;
        const double k1w = q0 * y - f0;
        const double k2z = v + 0.5 * h * k1w;
        const double k2w = qm * (y + 0.5 * h * k1z) - fm;
        const double k3z = v + 0.5 * h * k2w;
        const double k3w = qm * (y + 0.5 * h * k2z) - fm;
        const double k4z = v + h * k3w;
        const double k4w = q1 * (y + h * k3z) - f1;

        z[i + 1] = y + h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        w[i + 1] = v + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        check_cap(z[i + 1], w[i + 1], cap, i + 1);
    }
    return {SampledFn(grid, std::move(z)), SampledFn(grid, std::move(w))};
}

} // namespace

IvpSolution integrate_ivp(const SampledFn& Q, const SampledFn& f, double z0, double dz0,
                          const IvpOptions& opts)
{
    require_same_grid(Q.grid(), f.grid());
    if (!std::isfinite(z0) || !std::isfinite(dz0))
        throw InputError("IVP initial data must be finite");
    return rk4(Q.values(), f.values(), Q.grid(), z0, dz0, opts.blowup_cap);
}

IvpSolution integrate_ivp_backward(const SampledFn& Q, const SampledFn& f, double z_end,
                                   double dz_end, const IvpOptions& opts)
{
    require_same_grid(Q.grid(), f.grid());
    if (!std::isfinite(z_end) || !std::isfinite(dz_end))
        throw InputError("IVP terminal data must be finite");
    // t = ell - x leaves z'' unchanged and flips the sign of z'.
    std::vector<double> rq(Q.values().rbegin(), Q.values().rend());
    std::vector<double> rf(f.values().rbegin(), f.values().rend());
    IvpSolution rev = rk4(rq, rf, Q.grid(), z_end, -dz_end, opts.blowup_cap);
    std::vector<double> z(rev.z.values().rbegin(), rev.z.values().rend());
    std::vector<double> dz(rev.dz.values().rbegin(), rev.dz.values().rend());
    for (double& d : dz)
        d = -d;
    return {SampledFn(Q.grid(), std::move(z)), SampledFn(Q.grid(), std::move(dz))};
}

FundamentalPair fundamental_solutions(const SampledFn& Q, const IvpOptions& opts)
{
    const SampledFn zero = SampledFn::constant(Q.grid(), 0.0);
    return {integrate_ivp(Q, zero, 1.0, 0.0, opts), integrate_ivp(Q, zero, 0.0, 1.0, opts)};
}

std::vector<double> wronskian(const FundamentalPair& fs)
{
    const auto& p1 = fs.psi1;
    const auto& p2 = fs.psi2;
    std::vector<double> w(p1.z.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = p1.z[i] * p2.dz[i] - p1.dz[i] * p2.z[i];
    return w;
}

KernelMatrix::KernelMatrix(Grid grid)
    : grid_(grid), dim_(grid.size()), entries_(dim_ * dim_, 0.0)
{
}

double KernelMatrix::symmetry_residual() const
{
    double r = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j)
            r = std::max(r, std::abs((*this)(i, j) - (*this)(j, i)));
    return r;
}

double KernelMatrix::antisymmetry_residual() const
{
    double r = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            r = std::max(r, std::abs((*this)(i, j) + (*this)(j, i)));
    return r;
}

KernelMatrix kernel_W(const IvpSolution& psi1, const IvpSolution& psi2)
{
    require_same_grid(psi1.z.grid(), psi2.z.grid());
    KernelMatrix W(psi1.z.grid());
    const std::size_t n = W.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = psi1.z[i] * psi2.z[j] - psi2.z[i] * psi1.z[j];
            W(i, j) = v;
            W(j, i) = -v;
        }
    }
    return W;
}

SampledFn variation_of_constants(const KernelMatrix& W, const SampledFn& f)
{
    require_same_grid(W.grid(), f.grid());
    const std::size_t n = W.dim();
    const double h = W.grid().step();
    std::vector<double> z(n, 0.0);
    std::vector<double> integrand(n);
    for (std::size_t i = 1; i < n; ++i) {
        const auto row = W.row(i);
        for (std::size_t j = 0; j <= i; ++j)
            integrand[j] = row[j] * f[j];
        z[i] = prefix_integral(h, std::span<const double>(integrand.data(), i + 1));
    }
    return SampledFn(W.grid(), std::move(z));
}

IvpSolution variation_of_constants(const FundamentalPair& fs, const SampledFn& f)
{
    require_same_grid(fs.psi1.z.grid(), f.grid());
    const Grid& grid = f.grid();
    const std::size_t n = grid.size();
    std::vector<double> a(n), b(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = fs.psi2.z[j] * f[j];
        b[j] = fs.psi1.z[j] * f[j];
    }
    const auto A = cumulative_integral(grid.step(), a);
    const auto B = cumulative_integral(grid.step(), b);
    std::vector<double> z(n), dz(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = fs.psi1.z[i] * A[i] - fs.psi2.z[i] * B[i];
        // W(x, x) = 0, so differentiating under the integral leaves only the kernel derivative.
        dz[i] = fs.psi1.dz[i] * A[i] - fs.psi2.dz[i] * B[i];
    }
    return {SampledFn(grid, std::move(z)), SampledFn(grid, std::move(dz))};
}

} // namespace slf
