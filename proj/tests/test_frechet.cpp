#include "slfrechet/errors.hpp"
#include "slfrechet/frechet.hpp"
#include "slfrechet/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace slf;
using std::numbers::pi;

namespace {

// Bench case: q = 0 on [0, pi], Dirichlet, k = 0, h = cos 2x.
//   E = c sin x with c = sqrt(2/pi), L = -1/2, E (h - L) = (c/2) sin 3x,
//   U'' + U = (c/2) sin 3x, U(0) = U'(0) = 0  =>  U = (c/4) sin^3 x,
//   M = 2 int (c/2) sin 3x (c/4) sin^3 x = -1/16.
struct Bench {
    Grid grid{pi, 4000};
    SampledFn q = SampledFn::constant(grid, 0.0);
    SampledFn h = SampledFn::sample(grid, [](double x) { return std::cos(2 * x); });
    BoundaryData bc = BoundaryData::dirichlet();
    Eigenpair ep = eigenpair(q, bc, 0);
};

const Bench& bench()
{
    static const Bench b;
    return b;
}

double U_exact(double x) { return 0.25 * std::sqrt(2.0 / pi) * std::pow(std::sin(x), 3); }

double max_err(const SampledFn& f, auto&& exact)
{
    double e = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        e = std::max(e, std::abs(f[i] - exact(f.grid().node(i))));
    return e;
}

double M_of(const Eigenpair& ep, const SampledFn& q, const SampledFn& h)
{
    const double L = first_derivative(ep, h);
    return second_derivative_direct(ep, h, solve_Un(ep, q, h, L, UnMethod::ivp).z);
}

} // namespace

TEST_CASE("first_derivative")
{
    const auto& b = bench();
    CHECK(std::abs(first_derivative(b.ep, SampledFn::constant(b.grid, 3.5)) - 3.5) <= 1e-9);
    CHECK(std::abs(first_derivative(b.ep, b.h) + 0.5) <= 1e-6);
    CHECK(first_derivative(b.ep, SampledFn::constant(b.grid, 0.0)) == 0.0);
}

TEST_CASE("solve_Un: zero sources and the bench closed form")
{
    const auto& b = bench();
    const auto c = SampledFn::constant(b.grid, 2.0);
    const double Lc = first_derivative(b.ep, c);
    CHECK(solve_Un(b.ep, b.q, c, Lc, UnMethod::ivp).z.max_abs() <= 1e-9);
    const auto zero = SampledFn::constant(b.grid, 0.0);
    CHECK(solve_Un(b.ep, b.q, zero, 0.0, UnMethod::kernel).z.max_abs() == 0.0);

    const double L = first_derivative(b.ep, b.h);
    for (auto m : {UnMethod::ivp, UnMethod::kernel}) {
        const auto U = solve_Un(b.ep, b.q, b.h, L, m);
        CHECK(max_err(U.z, U_exact) <= 1e-6);
    }
}

TEST_CASE("solve_Un routes agree on random data")
{
    std::mt19937_64 rng(21);
    const Grid g(2.0, 2000);
    for (int t = 0; t < 4; ++t) {
        const auto q = random_smooth(g, rng, 4, 2.0);
        const auto h = random_smooth(g, rng, 5);
        const BoundaryData bc(0.3 * t, 3.0 - 0.4 * t);
        const auto ep = eigenpair(q, bc, t);
        const double L = first_derivative(ep, h);
        const auto a = solve_Un(ep, q, h, L, UnMethod::ivp);
        const auto k = solve_Un(ep, q, h, L, UnMethod::kernel);
        CHECK((a.z - k.z).max_abs() <= 1e-6);
    }
}

TEST_CASE("second derivative: direct and energy forms")
{
    const auto& b = bench();
    const double L = first_derivative(b.ep, b.h);
    const auto U = solve_Un(b.ep, b.q, b.h, L, UnMethod::ivp);
    CHECK(std::abs(second_derivative_direct(b.ep, b.h, U.z) + 0.0625) <= 1e-5);
    CHECK(std::abs(second_derivative_energy(b.ep, b.q, U, b.bc) + 0.0625) <= 1e-5);

    const auto c = SampledFn::constant(b.grid, -4.0);
    const auto Uc = solve_Un(b.ep, b.q, c, first_derivative(b.ep, c), UnMethod::ivp);
    CHECK(std::abs(second_derivative_direct(b.ep, c, Uc.z)) <= 1e-9);
    CHECK(std::abs(second_derivative_energy(b.ep, b.q, Uc, b.bc)) <= 1e-9);

    const auto zero = SampledFn::constant(b.grid, 0.0);
    CHECK(second_derivative_direct(b.ep, zero, zero) == 0.0);

    CHECK_THROWS_WITH_AS(second_derivative_energy(b.ep, b.q, U, BoundaryData(0.0, pi / 3)),
                         "energy form requires z(l)=0 or z'(l)=0", InputError);
}

TEST_CASE("build_G closed forms and symmetry")
{
    const Grid g(pi, 200);
    const auto zero = SampledFn::constant(g, 0.0);
    const auto G0 = build_G(zero, 0.0);
    const auto G1 = build_G(zero, 1.0);
    double e0 = 0.0, e1 = 0.0;
    for (std::size_t i = 0; i < G0.dim(); ++i)
        for (std::size_t j = 0; j < G0.dim(); ++j) {
            const double d = std::abs(g.node(i) - g.node(j));
            e0 = std::max(e0, std::abs(G0(i, j) - d));
            e1 = std::max(e1, std::abs(G1(i, j) - std::sin(d)));
        }
    CHECK(e0 <= 1e-12);
    CHECK(e1 <= 1e-7);
    CHECK(G1.symmetry_residual() == 0.0);

    std::mt19937_64 rng(8);
    const auto Gr = build_G(random_smooth(g, rng, 3, 4.0), 2.5);
    CHECK(Gr.symmetry_residual() == 0.0);
}

TEST_CASE("build_Jn and quadratic_form")
{
    const Grid g(pi, 2000);
    const auto q = SampledFn::constant(g, 0.0);
    const auto ep = eigenpair(q, BoundaryData::dirichlet(), 0);
    const auto J = build_Jn(ep, build_G(q, ep.lambda));
    CHECK(J.symmetry_residual() == 0.0);
    CHECK(std::abs(quadratic_form(J, SampledFn::constant(g, 1.0))) <= 1e-7);
    CHECK(quadratic_form(J, SampledFn::constant(g, 0.0)) == 0.0);
    const auto h = SampledFn::sample(g, [](double x) { return std::cos(2 * x); });
    CHECK(std::abs(quadratic_form(J, h) + 0.0625) <= 1e-4);
}

TEST_CASE("quadratic_form agrees with the direct formula on random directions")
{
    const Grid g(pi, 1000);
    std::mt19937_64 rng(99);
    const auto q = random_smooth(g, rng, 3, 2.0);
    const BoundaryData bc(0.5, 2.5);
    for (int k : {0, 2}) {
        const auto ep = eigenpair(q, bc, k);
        const auto J = build_Jn(ep, build_G(q, ep.lambda));
        for (int t = 0; t < 10; ++t) {
            const auto h = random_smooth(g, rng, 6);
            const double Md = M_of(ep, q, h);
            CHECK(std::abs(quadratic_form(J, h) - Md) <= 1e-5 * (1.0 + std::abs(Md)));
        }
    }
}

TEST_CASE("solve_Vn and the dual energy form")
{
    const auto& b = bench();
    const double L = first_derivative(b.ep, b.h);
    const auto V = solve_Vn(b.ep, b.q, b.h, L);
    CHECK(std::abs(second_derivative_energy_dual(b.ep, b.q, V, b.bc) + 0.0625) <= 1e-5);

    const auto c = SampledFn::constant(b.grid, 1.5);
    CHECK(solve_Vn(b.ep, b.q, c, first_derivative(b.ep, c)).z.max_abs() <= 1e-9);

    std::mt19937_64 rng(4);
    const Grid g(2.0, 2000);
    for (int t = 0; t < 4; ++t) {
        const auto q = random_smooth(g, rng, 3, 3.0);
        const auto h = random_smooth(g, rng, 5);
        const auto bc = BoundaryData::dirichlet();
        const auto ep = eigenpair(q, bc, t % 3);
        const double Lh = first_derivative(ep, h);
        const double via_U = second_derivative_energy(ep, q, solve_Un(ep, q, h, Lh, UnMethod::ivp), bc);
        const double via_V = second_derivative_energy_dual(ep, q, solve_Vn(ep, q, h, Lh), bc);
        CHECK(std::abs(via_U - via_V) <= 1e-5 * (1.0 + std::abs(via_U)));
    }

    CHECK_THROWS_AS(second_derivative_energy_dual(b.ep, b.q, V, BoundaryData(1.0, pi)), InputError);
}

TEST_CASE("fredholm_residual")
{
    const auto& b = bench();
    const double L = first_derivative(b.ep, b.h);
    CHECK(std::abs(fredholm_residual(b.ep, b.h, L)) <= 1e-9);
    const auto c = SampledFn::constant(b.grid, 6.0);
    CHECK(std::abs(fredholm_residual(b.ep, c, first_derivative(b.ep, c))) <= 1e-12);
    CHECK(std::abs(fredholm_residual(b.ep, b.h, L + 1.0) - 1.0) <= 1e-9);
}

TEST_CASE("un_boundary_residual")
{
    const auto& b = bench();
    const auto c = SampledFn::constant(b.grid, 1.0);
    CHECK(un_boundary_residual(solve_Un(b.ep, b.q, c, first_derivative(b.ep, c), UnMethod::ivp), b.bc) <= 1e-12);

    const auto U = solve_Un(b.ep, b.q, b.h, first_derivative(b.ep, b.h), UnMethod::ivp);
    CHECK(std::abs(U.z.back()) <= 1e-6 * U.z.max_abs());

    std::mt19937_64 rng(12);
    const Grid g(3.0, 3000);
    std::uniform_real_distribution<double> ua(0.0, pi - 1e-3), ub(1e-3, pi);
    for (int t = 0; t < 6; ++t) {
        const auto q = random_smooth(g, rng, 4, 2.0);
        const auto h = random_smooth(g, rng, 4);
        const BoundaryData bc(ua(rng), ub(rng));
        const auto ep = eigenpair(q, bc, t % 4);
        const auto Ut = solve_Un(ep, q, h, first_derivative(ep, h), UnMethod::ivp);
        CHECK(un_boundary_residual(Ut, bc) <= 1e-5 * (1.0 + Ut.z.max_abs() + Ut.dz.max_abs()));
    }
}

TEST_CASE("homogeneity and translation flatness")
{
    const Grid g(pi, 2000);
    std::mt19937_64 rng(31);
    const auto q = random_smooth(g, rng, 3, 2.0);
    const auto h = random_smooth(g, rng, 4);
    const BoundaryData bc(0.2, 2.9);
    const auto ep = eigenpair(q, bc, 1);
    const double L = first_derivative(ep, h);
    const double M = M_of(ep, q, h);
    for (double c : {2.0, -3.0}) {
        CHECK(first_derivative(ep, c * h) == doctest::Approx(c * L).epsilon(1e-12));
        CHECK(std::abs(M_of(ep, q, c * h) - c * c * M) <= 1e-7 * std::abs(c * c * M));
    }
    for (double c : {-2.0, 0.7, 5.0})
        CHECK(std::abs(M_of(ep, q, h + c) - M) <= 1e-6);
}

TEST_CASE("negative definiteness for the lowest Dirichlet and Neumann eigenvalues")
{
    const Grid g(pi, 2000);
    std::mt19937_64 rng(2024);
    const auto q = random_smooth(g, rng, 3, 3.0);
    for (const auto& bc : {BoundaryData::dirichlet(), BoundaryData::neumann()}) {
        const auto ep = eigenpair(q, bc, 0);
        for (int t = 0; t < 20; ++t)
            CHECK(M_of(ep, q, random_piecewise_linear(g, rng, 16)) <= 1e-8);
    }
}

TEST_CASE("frechet_derivatives: all routes, degenerate direction, disagreement")
{
    const auto& b = bench();
    const Grid g(pi, 2000);
    const auto q = SampledFn::constant(g, 0.0);
    const auto h = SampledFn::sample(g, [](double x) { return std::cos(2 * x); });
    const auto bc = BoundaryData::dirichlet();
    const auto ep = eigenpair(q, bc, 0);
    const FrechetRoutes all{.energy = true, .kernel = true, .dual = true};
    const auto r = frechet_derivatives(ep, q, bc, h, all);
    CHECK(std::abs(r.L + 0.5) <= 1e-6);
    CHECK(std::abs(r.M_direct + 0.0625) <= 1e-5);
    REQUIRE(r.M_energy);
    REQUIRE(r.M_kernel);
    REQUIRE(r.M_dual);
    CHECK(std::abs(*r.M_kernel + 0.0625) <= 1e-5);
    CHECK(r.fredholm_residual_f1 <= 1e-9);
    CHECK(r.U_route_gap <= 1e-6);

    const auto z = frechet_derivatives(b.ep, b.q, b.bc, SampledFn::constant(b.grid, 0.0), all);
    CHECK(z.L == 0.0);
    CHECK(z.M_direct == 0.0);
    CHECK(*z.M_kernel == 0.0);
    CHECK(z.U.z.max_abs() == 0.0);

    const FrechetTolerances strict{.route_rel = 0.0, .route_abs_floor = 0.0, .u_route = 0.0};
    CHECK_THROWS_AS(frechet_derivatives(ep, q, bc, h, all, strict), RouteAgreementError);
    CHECK_FALSE(route_disagreement(evaluate_frechet(ep, q, bc, h, all)).size() > 0);
}
