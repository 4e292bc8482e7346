#include "slfrechet/errors.hpp"
#include "slfrechet/ode.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace slf;
using std::numbers::pi;

namespace {

double max_err(const SampledFn& f, auto&& exact)
{
    double e = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        e = std::max(e, std::abs(f[i] - exact(f.grid().node(i))));
    return e;
}

SampledFn smooth_random(const Grid& g, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(rng), b = u(rng), c = u(rng);
    return SampledFn::sample(g, [=](double x) { return a + b * std::sin(1.3 * x) + c * std::cos(2.1 * x); });
}

} // namespace

TEST_CASE("integrate_ivp closed forms")
{
    const Grid g(pi, 2000);
    const auto zero = SampledFn::constant(g, 0.0);

    const auto lin = integrate_ivp(zero, zero, 0.0, 1.0);
    CHECK(max_err(lin.z, [](double x) { return x; }) <= 1e-12);
    CHECK(max_err(lin.dz, [](double) { return 1.0; }) <= 1e-12);

    const auto osc = integrate_ivp(SampledFn::constant(g, -1.0), zero, 0.0, 1.0);
    CHECK(max_err(osc.z, [](double x) { return std::sin(x); }) <= 1e-8);
    CHECK(max_err(osc.dz, [](double x) { return std::cos(x); }) <= 1e-8);

    const auto par = integrate_ivp(zero, SampledFn::constant(g, 1.0), 0.0, 0.0);
    CHECK(max_err(par.z, [](double x) { return -0.5 * x * x; }) <= 1e-10);
}

TEST_CASE("integrate_ivp reports blow-up")
{
    const Grid g(10.0, 100);
    const auto zero = SampledFn::constant(g, 0.0);
    IvpOptions opts;
    opts.blowup_cap = 1e3;
    CHECK_THROWS_AS(integrate_ivp(SampledFn::constant(g, 4.0), zero, 1.0, 0.0, opts), SolverError);
}

TEST_CASE("integrate_ivp_backward matches terminal data")
{
    const Grid g(pi, 2000);
    const auto zero = SampledFn::constant(g, 0.0);
    // z = sin(x) has z(pi) = 0, z'(pi) = -1.
    const auto back = integrate_ivp_backward(SampledFn::constant(g, -1.0), zero, 0.0, -1.0);
    CHECK(max_err(back.z, [](double x) { return std::sin(x); }) <= 1e-8);
    CHECK(max_err(back.dz, [](double x) { return std::cos(x); }) <= 1e-8);
}

TEST_CASE("IVP converges at fourth order")
{
    auto err = [](int n) {
        const Grid g(pi, n);
        const auto Q = SampledFn::sample(g, [](double x) { return -1.0 - 0.0 * x; });
        const auto f = SampledFn::sample(g, [](double x) { return std::exp(-x); });
        // z'' = -z - e^{-x}, z(0) = 0, z'(0) = 0 => z = (-e^{-x} + cos x - sin x) / 2
        const auto s = integrate_ivp(Q, f, 0.0, 0.0);
        return max_err(s.z, [](double x) { return 0.5 * (-std::exp(-x) + std::cos(x) - std::sin(x)); });
    };
    const double order = std::log2(err(100) / err(200));
    CHECK(order > 3.8);
}

TEST_CASE("fundamental solutions and the Wronskian")
{
    const Grid g(pi, 2000);
    const auto fs0 = fundamental_solutions(SampledFn::constant(g, 0.0));
    CHECK(max_err(fs0.psi1.z, [](double) { return 1.0; }) <= 1e-12);
    CHECK(max_err(fs0.psi2.z, [](double x) { return x; }) <= 1e-12);

    const auto fs1 = fundamental_solutions(SampledFn::constant(g, -1.0));
    CHECK(max_err(fs1.psi1.z, [](double x) { return std::cos(x); }) <= 1e-8);
    CHECK(max_err(fs1.psi2.z, [](double x) { return std::sin(x); }) <= 1e-8);

    std::mt19937_64 rng(11);
    for (int t = 0; t < 5; ++t) {
        const auto fs = fundamental_solutions(5.0 * smooth_random(g, rng));
        for (double w : wronskian(fs))
            CHECK(std::abs(w - 1.0) <= 1e-8);
    }
}

TEST_CASE("kernel_W closed forms and antisymmetry")
{
    const Grid g(pi, 200);
    const auto fs0 = fundamental_solutions(SampledFn::constant(g, 0.0));
    const auto W0 = kernel_W(fs0.psi1, fs0.psi2);
    double e0 = 0.0;
    for (std::size_t i = 0; i < W0.dim(); ++i)
        for (std::size_t j = 0; j < W0.dim(); ++j)
            e0 = std::max(e0, std::abs(W0(i, j) - (g.node(j) - g.node(i))));
    CHECK(e0 <= 1e-12);

    const auto fs1 = fundamental_solutions(SampledFn::constant(g, -1.0));
    const auto W1 = kernel_W(fs1.psi1, fs1.psi2);
    double e1 = 0.0;
    for (std::size_t i = 0; i < W1.dim(); ++i)
        for (std::size_t j = 0; j < W1.dim(); ++j)
            e1 = std::max(e1, std::abs(W1(i, j) - std::sin(g.node(j) - g.node(i))));
    CHECK(e1 <= 1e-8);

    CHECK(W1.antisymmetry_residual() == 0.0);
    for (std::size_t i = 0; i < W1.dim(); ++i)
        CHECK(W1(i, i) == 0.0);
}

TEST_CASE("variation_of_constants: examples")
{
    const Grid g(pi, 2000);
    const auto zero = SampledFn::constant(g, 0.0);
    const auto fs = fundamental_solutions(zero);
    const auto W = kernel_W(fs.psi1, fs.psi2);

    CHECK(variation_of_constants(W, zero).max_abs() == 0.0);
    const auto z = variation_of_constants(W, SampledFn::constant(g, 1.0));
    CHECK(max_err(z, [](double x) { return -0.5 * x * x; }) <= 1e-8);
}

TEST_CASE("variation_of_constants agrees with the direct IVP")
{
    const Grid g(pi, 2000);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 4; ++t) {
        const auto Q = 3.0 * smooth_random(g, rng);
        const auto f = smooth_random(g, rng);
        const auto direct = integrate_ivp(Q, f, 0.0, 0.0);
        const auto fs = fundamental_solutions(Q);
        const auto bound = 1e-6 * (1.0 + direct.z.max_abs());

        const auto streamed = variation_of_constants(fs, f);
        CHECK((streamed.z - direct.z).max_abs() <= bound);
        CHECK((streamed.dz - direct.dz).max_abs() <= bound);

        const auto tabulated = variation_of_constants(kernel_W(fs.psi1, fs.psi2), f);
        CHECK((tabulated - direct.z).max_abs() <= bound);
    }
}
