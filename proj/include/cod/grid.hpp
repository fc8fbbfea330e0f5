#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cod {

using cplx = std::complex<double>;

/// Thrown for malformed grids, mismatched operands and off-grid limits.
class GridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Uniform 1D grid: point(i) = start + i*step for 0 <= i < count.
 *
 * For periodic use the last sample is excluded, so the period is step*count.
 */
class Grid {
public:
    Grid(double start, double step, std::size_t count);

    /// Grid covering [lo, hi] inclusive with `count` points.
    static Grid closed(double lo, double hi, std::size_t count);
    /// Periodic grid on [lo, lo + period) with `count` points.
    static Grid periodic(double lo, double period, std::size_t count);

    double start() const { return start_; }
    double step() const { return step_; }
    std::size_t count() const { return count_; }
    double point(std::size_t i) const { return start_ + static_cast<double>(i) * step_; }
    double end() const { return point(count_ - 1); }
    double period() const { return step_ * static_cast<double>(count_); }

    std::vector<double> points() const;

    /// Index of the grid point equal to x (within 1e-9*step), or throws "limit not on grid".
    std::size_t index_of(double x) const;
    /// Nearest grid index, clamped into range.
    std::size_t nearest_index(double x) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double start_;
    double step_;
    std::size_t count_;
};

/// Complex samples of a function on a uniform grid.
class GridFunction {
public:
    explicit GridFunction(Grid grid);
    GridFunction(Grid grid, std::vector<cplx> values);

    template <class Fn>
    static GridFunction sample(const Grid& grid, Fn&& fn) {
        std::vector<cplx> v(grid.count());
        for (std::size_t i = 0; i < grid.count(); ++i) v[i] = cplx(fn(grid.point(i)));
        return GridFunction(grid, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }
    cplx operator[](std::size_t i) const { return values_[i]; }
    cplx& operator[](std::size_t i) { return values_[i]; }

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(cplx c);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(cplx c, GridFunction a) { return a *= c; }
    friend GridFunction operator*(GridFunction a, cplx c) { return a *= c; }

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    Grid grid_;
    std::vector<cplx> values_;
};

/// Pointwise product.
GridFunction multiply(const GridFunction& a, const GridFunction& b);

struct Norms {
    double sup = 0.0;
    double l2 = 0.0;
};

Norms norms(const GridFunction& f);
double sup_norm(const GridFunction& f);
bool all_finite(const GridFunction& f);

/// Composite-trapezoid antiderivative g(x_i) = integral of f from lower_limit to x_i.
GridFunction cumulative_integral(const GridFunction& f, double lower_limit);

/// Central second difference inside, one-sided second-order stencils at the ends.
GridFunction second_derivative(const GridFunction& f);

/// Wavenumbers 2*pi*j/period in FFT storage order, j in [-n/2, n/2).
std::vector<double> wavenumbers(const Grid& grid);

/// Forward DFT with 1/n normalization: a pure mode exp(i k_j x) maps to amplitude 1 at slot j.
GridFunction dft(const GridFunction& f);
/// Inverse of dft(): idft(dft(f)) == f to round-off.
GridFunction idft(const GridFunction& spectrum);

/// CSV with header `x,re,im`, values printed with %.17g.
void write_csv(std::ostream& out, const GridFunction& f);
/// Reads the `x,re,im` format back; the grid is inferred from the x column.
GridFunction read_csv(std::istream& in);

std::string format_double(double v);

} // namespace cod
