#pragma once

// Uniform grids on [0, ell], sampled functions and composite Simpson quadrature.

#include <cstddef>
#include <span>
#include <vector>

namespace slf {

class Grid {
public:
    // Throws InputError unless ell > 0 and n_cells is even and >= 2.
    Grid(double ell, int n_cells);

    double ell() const { return ell_; }
    int n_cells() const { return n_cells_; }
    std::size_t size() const { return static_cast<std::size_t>(n_cells_) + 1; }
    double step() const { return ell_ / n_cells_; }
    double node(std::size_t i) const;
    std::vector<double> nodes() const;

    bool operator==(const Grid&) const = default;

private:
    double ell_;
    int n_cells_;
};

Grid make_grid(double ell, int n_cells);

// Real function sampled at the grid nodes. at() interpolates linearly; the
// integrators use cubic midpoints so that they match Simpson quadrature.
class SampledFn {
public:
    SampledFn(Grid grid, std::vector<double> values);

    static SampledFn constant(const Grid& grid, double value);

    template <class F>
    static SampledFn sample(const Grid& grid, F&& f)
    {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = f(grid.node(i));
        return SampledFn(grid, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    // Piecewise-linear evaluation, x clamped to [0, ell].
    double at(double x) const;
    double max_abs() const;

    SampledFn& operator+=(const SampledFn& rhs);
    SampledFn& operator-=(const SampledFn& rhs);
    SampledFn& operator*=(const SampledFn& rhs);
    SampledFn& operator*=(double c);
    SampledFn& operator+=(double c);

private:
    Grid grid_;
    std::vector<double> values_;
};

SampledFn operator+(SampledFn a, const SampledFn& b);
SampledFn operator-(SampledFn a, const SampledFn& b);
SampledFn operator*(SampledFn a, const SampledFn& b);
SampledFn operator*(double c, SampledFn a);
SampledFn operator*(SampledFn a, double c);
SampledFn operator+(SampledFn a, double c);
SampledFn operator-(SampledFn a, double c);
SampledFn operator-(double c, SampledFn a);

// Throws InputError when two operands live on different grids.
void require_same_grid(const Grid& a, const Grid& b);

// Composite Simpson weights h/3 * [1, 4, 2, 4, ..., 4, 1].
std::vector<double> simpson_weights(const Grid& grid);

double integrate(const SampledFn& f);
double inner_product(const SampledFn& f, const SampledFn& g);

// Values at the n_cells cell midpoints by 4-point cubic interpolation
// (one-sided in the first and last cell). Needs at least 4 nodes; with
// fewer it falls back to linear interpolation.
std::vector<double> cell_midpoints(std::span<const double> values);

// Running integrals from 0 to every node: Simpson over even prefixes, plus
// one trapezoid panel on odd prefixes.
std::vector<double> cumulative_integral(double step, std::span<const double> values);

} // namespace slf
