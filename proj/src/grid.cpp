#include "slfrechet/grid.hpp"

#include "slfrechet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slf {

Grid::Grid(double ell, int n_cells) : ell_(ell), n_cells_(n_cells)
{
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw InputError("grid length must be positive and finite, got " + std::to_string(ell));
    if (n_cells < 2)
        throw InputError("grid needs at least 2 cells, got " + std::to_string(n_cells));
    if (n_cells % 2 != 0)
        throw InputError("grid cell count must be even for Simpson quadrature, got " +
                         std::to_string(n_cells));
}

double Grid::node(std::size_t i) const
{
    if (i + 1 == size())
        return ell_;
    return static_cast<double>(i) * ell_ / n_cells_;
}

std::vector<double> Grid::nodes() const
{
    std::vector<double> x(size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = node(i);
    return x;
}

Grid make_grid(double ell, int n_cells) { return Grid(ell, n_cells); }

void require_same_grid(const Grid& a, const Grid& b)
{
    if (!(a == b))
        throw InputError("sampled functions live on different grids");
}

SampledFn::SampledFn(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw InputError("sample count " + std::to_string(values_.size()) +
                         " does not match grid node count " + std::to_string(grid_.size()));
    for (double v : values_)
        if (!std::isfinite(v))
            throw InputError("sampled function has a non-finite value");
}

SampledFn SampledFn::constant(const Grid& grid, double value)
{
    return SampledFn(grid, std::vector<double>(grid.size(), value));
}

double SampledFn::at(double x) const
{
    const double h = grid_.step();
    const double t = std::clamp(x, 0.0, grid_.ell()) / h;
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i >= values_.size() - 1)
        return values_.back();
    const double frac = t - static_cast<double>(i);
    return (1.0 - frac) * values_[i] + frac * values_[i + 1];
}

double SampledFn::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

SampledFn& SampledFn::operator+=(const SampledFn& rhs)
{
    require_same_grid(grid_, rhs.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += rhs.values_[i];
    return *this;
}

SampledFn& SampledFn::operator-=(const SampledFn& rhs)
{
    require_same_grid(grid_, rhs.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= rhs.values_[i];
    return *this;
}

SampledFn& SampledFn::operator*=(const SampledFn& rhs)
{
    require_same_grid(grid_, rhs.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] *= rhs.values_[i];
    return *this;
}

SampledFn& SampledFn::operator*=(double c)
{
    for (double& v : values_)
        v *= c;
    return *this;
}

SampledFn& SampledFn::operator+=(double c)
{
    for (double& v : values_)
        v += c;
    return *this;
}

SampledFn operator+(SampledFn a, const SampledFn& b) { return a += b; }
SampledFn operator-(SampledFn a, const SampledFn& b) { return a -= b; }
SampledFn operator*(SampledFn a, const SampledFn& b) { return a *= b; }
SampledFn operator*(double c, SampledFn a) { return a *= c; }
SampledFn operator*(SampledFn a, double c) { return a *= c; }
SampledFn operator+(SampledFn a, double c) { return a += c; }
SampledFn operator-(SampledFn a, double c) { return a += -c; }

SampledFn operator-(double c, SampledFn a)
{
    a *= -1.0;
    return a += c;
}

std::vector<double> simpson_weights(const Grid& grid)
{
    const double third = grid.step() / 3.0;
    std::vector<double> w(grid.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = (i % 2 == 1 ? 4.0 : 2.0) * third;
    w.front() = third;
    w.back() = third;
    return w;
}

double integrate(const SampledFn& f)
{
    const auto v = f.values();
    const std::size_t n = v.size() - 1;
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        (i % 2 == 1 ? odd : even) += v[i];
    return f.grid().step() / 3.0 * (v[0] + v[n] + 4.0 * odd + 2.0 * even);
}

double inner_product(const SampledFn& f, const SampledFn& g)
{
    require_same_grid(f.grid(), g.grid());
    return integrate(f * g);
}

std::vector<double> cell_midpoints(std::span<const double> v)
{
    const std::size_t cells = v.size() - 1;
    std::vector<double> mid(cells);
    if (v.size() < 4) {
        for (std::size_t i = 0; i < cells; ++i)
            mid[i] = 0.5 * (v[i] + v[i + 1]);
        return mid;
    }
    for (std::size_t i = 0; i < cells; ++i) {
        if (i == 0)
            mid[i] = (5.0 * v[0] + 15.0 * v[1] - 5.0 * v[2] + v[3]) / 16.0;
        else if (i + 1 == cells)
            mid[i] = (v[i - 2] - 5.0 * v[i - 1] + 15.0 * v[i] + 5.0 * v[i + 1]) / 16.0;
        else
            mid[i] = (-v[i - 1] + 9.0 * v[i] + 9.0 * v[i + 1] - v[i + 2]) / 16.0;
    }
    return mid;
}

std::vector<double> cumulative_integral(double step, std::span<const double> values)
{
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t m = 1; m < values.size(); ++m) {
        if (m % 2 == 0)
            out[m] = out[m - 2] + step / 3.0 * (values[m - 2] + 4.0 * values[m - 1] + values[m]);
        else
            out[m] = out[m - 1] + 0.5 * step * (values[m - 1] + values[m]);
    }
    return out;
}

} // namespace slf
