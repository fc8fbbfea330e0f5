#pragma once

// Multi-dimensional stationary Schroedinger equation [Delta + 2(E - U)] psi = 0 on
// periodic boxes, with Fourier-space inverses of Delta and (2E + Delta).

#include "cod/engine.hpp"
#include "cod/grid.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace cod::spectral {

class ResonanceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Complex samples on a 1D or 2D periodic box anchored at the origin, stored row-major.
class PeriodicField {
public:
    /// sizes must be even and >= 4; 2D boxes must be square (equal lengths and sizes).
    PeriodicField(std::vector<std::size_t> shape, std::vector<double> box_lengths);
    PeriodicField(std::vector<std::size_t> shape, std::vector<double> box_lengths, std::vector<cplx> values);

    static PeriodicField from_grid_function(const GridFunction& f);
    GridFunction to_grid_function() const;

    template <class Fn>
    static PeriodicField sample_1d(std::size_t n, double length, Fn&& fn) {
        PeriodicField f({n}, {length});
        for (std::size_t i = 0; i < n; ++i) f.values_[i] = cplx(fn(f.coordinate(0, i)));
        return f;
    }

    template <class Fn>
    static PeriodicField sample_2d(std::size_t n, double length, Fn&& fn) {
        PeriodicField f({n, n}, {length, length});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) f.values_[i * n + j] = cplx(fn(f.coordinate(0, i), f.coordinate(1, j)));
        }
        return f;
    }

    std::size_t dims() const { return shape_.size(); }
    const std::vector<std::size_t>& shape() const { return shape_; }
    const std::vector<double>& box_lengths() const { return box_lengths_; }
    std::size_t size() const { return values_.size(); }
    std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }
    cplx operator[](std::size_t i) const { return values_[i]; }
    cplx& operator[](std::size_t i) { return values_[i]; }

    double spacing(std::size_t axis) const { return box_lengths_[axis] / static_cast<double>(shape_[axis]); }
    double coordinate(std::size_t axis, std::size_t i) const { return static_cast<double>(i) * spacing(axis); }

    /// |k|^2 for every mode, in FFT storage order matching values().
    std::vector<double> k_squared() const;

    bool same_layout(const PeriodicField& other) const;

    PeriodicField& operator+=(const PeriodicField& other);
    PeriodicField& operator-=(const PeriodicField& other);
    PeriodicField& operator*=(cplx c);

    friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
    friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
    friend PeriodicField operator*(cplx c, PeriodicField a) { return a *= c; }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> box_lengths_;
    std::vector<cplx> values_;
};

double sup_norm(const PeriodicField& f);
bool all_finite(const PeriodicField& f);
cplx mean(const PeriodicField& f);
PeriodicField multiply(const PeriodicField& a, const PeriodicField& b);

/// Spectral Laplacian.
PeriodicField laplacian(const PeriodicField& f);

/// Delta^-1 = -F^-1 k^-2 F with the k = 0 mode mapped to zero (pseudo-inverse):
/// laplacian(inverse_laplacian(f)) = f - mean(f).
PeriodicField inverse_laplacian(const PeriodicField& f);

/// (2E + Delta) f.
PeriodicField helmholtz(const PeriodicField& f, double energy);

/// (2E + Delta)^-1 = F^-1 1/(2E - k^2) F. Throws ResonanceError("on-shell mode") if 2E = k^2 on the grid.
PeriodicField resolvent(const PeriodicField& f, double energy);

enum class Variant {
    laplace,    // G = Delta, V = -2(E - U)
    resolvent,  // G = 2E + Delta, V = 2U
};

/// Scheme for one of the two decompositions. psi_g must be annihilated by G.
CodScheme<PeriodicField> build_stationary_scheme(const PeriodicField& potential, double energy,
                                                 const PeriodicField& psi_g, Variant variant);

SeriesRun<PeriodicField> solve_stationary(const PeriodicField& potential, double energy, const PeriodicField& psi_g,
                                          Variant variant, const StopPolicy& policy);

/// Source-driven particular solution of [Delta + 2(E - U)] psi = source, seeded with psi_g = 0.
SeriesRun<PeriodicField> solve_stationary_with_source(const PeriodicField& potential, double energy,
                                                      const PeriodicField& source, Variant variant,
                                                      const StopPolicy& policy);

/// Residual [Delta + 2(E - U)] psi.
PeriodicField stationary_defect(const PeriodicField& potential, double energy, const PeriodicField& psi);

/// 1D: `x,re,im`. 2D: one CSV row per first-axis index, re and im interleaved as `re,im` pairs.
void write_csv(std::ostream& out, const PeriodicField& f);
/// Sidecar JSON: dims, shape, box_lengths, and the zero-mode convention.
void write_metadata(std::ostream& out, const PeriodicField& f);

} // namespace cod::spectral
