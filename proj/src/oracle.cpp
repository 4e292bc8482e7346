#include "slfrechet/oracle.hpp"

#include "slfrechet/errors.hpp"
#include "slfrechet/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace slf {

FdReport fd_derivatives(const SampledFn& q, const BoundaryData& bc, int index, const SampledFn& h,
                        double s, const EigenSolveOptions& opts)
{
    require_same_grid(q.grid(), h.grid());
    if (!(s >= 1e-6 && s <= 1e-1))
        throw InputError("finite-difference step must lie in [1e-6, 1e-1], got " + std::to_string(s));

    auto lam = [&](double t) { return eigenvalue(q + t * h, bc, index, opts); };
    const double l0 = lam(0.0);
    const double lp = lam(s), lm = lam(-s);
    const double lp2 = lam(0.5 * s), lm2 = lam(-0.5 * s);

    FdReport r;
    r.s_step = s;
    r.fd_first = (lp - lm) / (2.0 * s);
    r.fd_second = (lp - 2.0 * l0 + lm) / (s * s);
    const double half_first = (lp2 - lm2) / s;
    const double half_second = (lp2 - 2.0 * l0 + lm2) / (0.25 * s * s);
    r.richardson_first = (4.0 * half_first - r.fd_first) / 3.0;
    r.richardson_second = (4.0 * half_second - r.fd_second) / 3.0;

    const Eigenpair ep = eigenpair(q, bc, index, opts);
    const FrechetResult fr = evaluate_frechet(ep, q, bc, h);
    r.analytic_L = fr.L;
    r.analytic_M = fr.M_direct;
    r.abs_gap_first = std::abs(r.richardson_first - r.analytic_L);
    r.abs_gap_second = std::abs(r.richardson_second - r.analytic_M);
    r.rel_gap_first = r.abs_gap_first / (1.0 + std::abs(r.analytic_L));
    r.rel_gap_second = r.abs_gap_second / (1.0 + std::abs(r.analytic_M));
    return r;
}

double perturbation_sum_M(const SampledFn& q, const BoundaryData& bc, int index, const SampledFn& h,
                          int modes)
{
    require_same_grid(q.grid(), h.grid());
    if (modes < index + 5)
        throw InputError("perturbation sum needs modes >= index + 5");
    const Eigenpair en = eigenpair(q, bc, index);
    const SampledFn eh = en.efn * h;
    double sum = 0.0;
    for (int m = 0; m < modes; ++m) {
        if (m == index)
            continue;
        const Eigenpair em = eigenpair(q, bc, m);
        const double c = inner_product(eh, em.efn);
        sum += c * c / (en.lambda - em.lambda);
    }
    return 2.0 * sum;
}

double rayleigh_quotient(const SampledFn& q, const SampledFn& z, const SampledFn& dz)
{
    require_same_grid(q.grid(), z.grid());
    require_same_grid(q.grid(), dz.grid());
    return integrate(dz * dz + q * z * z) / integrate(z * z);
}

RayleighReport rayleigh_check(const SampledFn& q, int trials, std::uint64_t seed)
{
    if (trials < 1)
        throw InputError("rayleigh_check needs at least one trial");
    const Grid& grid = q.grid();
    const Eigenpair e1 = eigenpair(q, BoundaryData::dirichlet(), 0);

    RayleighReport rep;
    rep.seed = seed;
    rep.lambda1 = e1.lambda;
    rep.quotient_at_efn = rayleigh_quotient(q, e1.efn, e1.efn_deriv);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> knot_count(2, 24);
    const double hstep = grid.step();
    rep.min_trial_quotient = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        const SampledFn raw = random_piecewise_linear(grid, rng, knot_count(rng));
        // Pin both ends to zero with a linear correction.
        const double a = raw.front(), b = raw.back();
        const SampledFn z = SampledFn::sample(grid, [&](double x) {
            return raw.at(x) - a - (b - a) * x / grid.ell();
        });
        // z is piecewise linear on the grid, so int z'^2 is exact cell by cell.
        double grad = 0.0;
        for (std::size_t i = 0; i + 1 < z.size(); ++i) {
            const double d = z[i + 1] - z[i];
            grad += d * d / hstep;
        }
        const double R = (grad + integrate(q * z * z)) / integrate(z * z);
        rep.trial_quotients.push_back(R);
        rep.min_trial_quotient = std::min(rep.min_trial_quotient, R);
    }
    return rep;
}

ConcavityReport concavity_probe(const SampledFn& q1, const SampledFn& q2, const BoundaryData& bc,
                                int index, const std::vector<double>& taus)
{
    require_same_grid(q1.grid(), q2.grid());
    for (double tau : taus)
        if (!(tau >= 0.0 && tau <= 1.0))
            throw InputError("concavity weights must lie in [0, 1], got " + std::to_string(tau));

    const double l1 = eigenvalue(q1, bc, index);
    const double l2 = eigenvalue(q2, bc, index);
    ConcavityReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (double tau : taus) {
        ConcavityRow row{.tau = tau, .lambda_q1 = l1, .lambda_q2 = l2};
        if (tau == 0.0)
            row.lambda_mix = l2;
        else if (tau == 1.0)
            row.lambda_mix = l1;
        else
            row.lambda_mix = eigenvalue(tau * q1 + (1.0 - tau) * q2, bc, index);
        row.slack = row.lambda_mix - tau * l1 - (1.0 - tau) * l2;
        rep.min_slack = std::min(rep.min_slack, row.slack);
        rep.rows.push_back(row);
    }
    if (taus.empty())
        rep.min_slack = 0.0;
    return rep;
}

SampledFn random_piecewise_linear(const Grid& grid, std::mt19937_64& rng, int knots, double amplitude)
{
    if (knots < 1)
        throw InputError("random piecewise-linear function needs at least one knot interval");
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    std::vector<double> kv(static_cast<std::size_t>(knots) + 1);
    for (double& v : kv)
        v = u(rng);
    const double width = grid.ell() / knots;
    return SampledFn::sample(grid, [&](double x) {
        const double t = x / width;
        auto i = std::min(static_cast<std::size_t>(t), kv.size() - 2);
        const double frac = t - static_cast<double>(i);
        return (1.0 - frac) * kv[i] + frac * kv[i + 1];
    });
}

SampledFn random_smooth(const Grid& grid, std::mt19937_64& rng, int modes, double amplitude)
{
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    const double c0 = u(rng);
    std::vector<double> a(modes), b(modes);
    for (int m = 0; m < modes; ++m) {
        a[m] = u(rng);
        b[m] = u(rng);
    }
    const double k = std::numbers::pi / grid.ell();
    return SampledFn::sample(grid, [&](double x) {
        double v = c0;
        for (int m = 0; m < modes; ++m)
            v += (a[m] * std::cos((m + 1) * k * x) + b[m] * std::sin((m + 1) * k * x)) / (m + 1);
        return v;
    });
}

} // namespace slf
