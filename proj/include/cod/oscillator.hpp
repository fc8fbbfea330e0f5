#pragma once

// Cauchy problem f'' + omega^2(t) f = 0, f(t_a) = a, f'(t_b) = b, solved with
// G = d^2/dt^2, V = -omega^2, G^-1 = two nested cumulative integrals and
// psi_g = a + b (t - t_a).

#include "cod/engine.hpp"
#include "cod/grid.hpp"

#include <vector>

namespace cod::oscillator {

struct OscillatorProblem {
    GridFunction omega_sq;
    double t_a = 0.0;
    double t_b = 0.0;
    cplx a = 1.0;
    cplx b = 0.0;
};

/// Builds the scheme. The cycle map is f -> -I_{t_a}(I_{t_b}(omega^2 f)).
/// Throws GridError("limit not on grid") when t_a or t_b is off-grid.
/// With t_a != t_b the derivative condition at t_b is not enforced term by term;
/// that mode is experimental.
CodScheme<GridFunction> build_scheme(const OscillatorProblem& p);

/// |a| * c_max^n * t^(2n) / (2n)!, evaluated in log space.
double term_bound(int n, double a_abs, double c_max, double t);

/// Closed-form series for omega^2 = -t^alpha, f(0) = 1, f'(0) = 0:
/// f(t) = sum_n c_n t^(n (alpha + 2)).
class PowerSeriesSolution {
public:
    PowerSeriesSolution(double alpha, int n_terms);

    double alpha() const { return alpha_; }
    const std::vector<long double>& coefficients() const { return coefficients_; }
    const std::vector<double>& exponents() const { return exponents_; }

    /// Horner accumulation in u = t^(alpha + 2).
    double eval(double t) const;
    long double eval_extended(long double t) const;

private:
    double alpha_;
    std::vector<long double> coefficients_;
    std::vector<double> exponents_;
};

PowerSeriesSolution power_series_solution(double alpha, int n_terms);

/// 1 + t^(alpha+2)/((alpha+1)(alpha+2)) * exp(2 t^(alpha/2+1)/(alpha+2)).
double upper_estimate(double alpha, double t);

/// 2 t^(alpha/2+1)/(alpha+2): log of the growth rate at large t.
double asymptotic_exponent(double alpha, double t);

} // namespace cod::oscillator
