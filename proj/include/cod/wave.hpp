#pragma once

// 1D wave equation in a static dispersive medium,
//   d/dt (eps(x) dA/dt) - d^2A/dx^2 = 0,  A(x,0) = S(x),  dA/dt(x,0) = R(x),
// with G = d/dt eps d/dt, G^-1 = int dt eps^-1 int dt (from t = 0), V = d^2/dx^2.

#include "cod/engine.hpp"
#include "cod/grid.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace cod::wave {

inline constexpr std::size_t max_axis_points = 2048;

/// Dense (time, space) samples; x is periodic, t starts at 0.
class SpaceTimeField {
public:
    SpaceTimeField(Grid x_grid, Grid t_grid);

    const Grid& x_grid() const { return x_grid_; }
    const Grid& t_grid() const { return t_grid_; }
    std::size_t nx() const { return x_grid_.count(); }
    std::size_t nt() const { return t_grid_.count(); }

    cplx operator()(std::size_t it, std::size_t ix) const { return values_[it * nx() + ix]; }
    cplx& operator()(std::size_t it, std::size_t ix) { return values_[it * nx() + ix]; }
    std::span<cplx> row(std::size_t it) { return {values_.data() + it * nx(), nx()}; }
    std::span<const cplx> row(std::size_t it) const { return {values_.data() + it * nx(), nx()}; }
    GridFunction row_function(std::size_t it) const;
    std::span<const cplx> values() const { return values_; }

    SpaceTimeField& operator+=(const SpaceTimeField& other);
    SpaceTimeField& operator-=(const SpaceTimeField& other);
    SpaceTimeField& operator*=(cplx c);

    friend SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
    friend SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }
    friend SpaceTimeField operator*(cplx c, SpaceTimeField a) { return a *= c; }

private:
    void require_same(const SpaceTimeField& other) const;

    Grid x_grid_;
    Grid t_grid_;
    std::vector<cplx> values_;
};

double sup_norm(const SpaceTimeField& f);
bool all_finite(const SpaceTimeField& f);

struct WaveProblem {
    GridFunction epsilon;  // eps(x) > 0
    GridFunction S;        // A at t = 0
    GridFunction R;        // dA/dt at t = 0
};

/// Throws std::invalid_argument when eps <= 0, grids mismatch, t does not start at 0,
/// or either axis exceeds max_axis_points.
CodScheme<SpaceTimeField> build_wave_scheme(const WaveProblem& p, const Grid& x_grid, const Grid& t_grid);

/// Spectral d^2/dx^2 of every time row.
SpaceTimeField spatial_second_derivative(const SpaceTimeField& f);

struct WaveSolution {
    SpaceTimeField field;
    SeriesRun<SpaceTimeField> run;
    double initial_value_error = 0.0;       // max |A(x,0) - S(x)|
    double initial_derivative_error = 0.0;  // max |dA/dt(x,0) - R(x)|, one-sided second order
    std::string message;
};

WaveSolution solve_wave(const WaveProblem& p, const Grid& x_grid, const Grid& t_grid, const StopPolicy& policy);

/// Row-major CSV: one line per time sample, `re,im` pairs per x sample.
void write_csv(std::ostream& out, const SpaceTimeField& f);
void write_metadata(std::ostream& out, const SpaceTimeField& f);

} // namespace cod::wave
