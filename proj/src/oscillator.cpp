#include "cod/oscillator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cod::oscillator {

CodScheme<GridFunction> build_scheme(const OscillatorProblem& p) {
    const Grid grid = p.omega_sq.grid();
    // Validate the limits up front so the error surfaces at build time.
    grid.index_of(p.t_a);
    grid.index_of(p.t_b);

    const GridFunction generating = GridFunction::sample(grid, [&](double t) { return p.a + p.b * (t - p.t_a); });
    const GridFunction omega_sq = p.omega_sq;
    const double t_a = p.t_a;
    const double t_b = p.t_b;

    auto g_op = [](const GridFunction& f) { return second_derivative(f); };
    auto g_inverse = [t_a, t_b](const GridFunction& f) {
        return cumulative_integral(cumulative_integral(f, t_b), t_a);
    };
    auto v_op = [omega_sq](const GridFunction& f) {
        GridFunction out = multiply(omega_sq, f);
        out *= -1.0;
        return out;
    };

    // Second differences of a linear function only carry round-off.
    const double h = grid.step();
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + sup_norm(generating)) / (h * h);

    std::string label = "oscillator";
    if (t_a != t_b) label += " (experimental: t_a != t_b)";
    return CodScheme<GridFunction>(std::move(label), generating, g_op, g_inverse, v_op, tol);
}

double term_bound(int n, double a_abs, double c_max, double t) {
    if (n < 1) throw std::invalid_argument("term_bound: n must be >= 1");
    if (c_max < 0.0 || t < 0.0) throw std::invalid_argument("term_bound: c_max and t must be non-negative");
    if (t == 0.0 || c_max == 0.0 || a_abs == 0.0) return 0.0;
    const double log_value =
        std::log(a_abs) + n * std::log(c_max) + 2.0 * n * std::log(t) - std::lgamma(2.0 * n + 1.0);
    return std::exp(log_value);
}

PowerSeriesSolution::PowerSeriesSolution(double alpha, int n_terms) : alpha_(alpha) {
    if (!(alpha > -1.0)) throw std::invalid_argument("power series requires alpha > -1");
    if (n_terms < 1) throw std::invalid_argument("power series requires n_terms >= 1");
    coefficients_.reserve(static_cast<std::size_t>(n_terms));
    exponents_.reserve(static_cast<std::size_t>(n_terms));
    long double c = 1.0L;
    const long double a = alpha;
    for (int n = 0; n < n_terms; ++n) {
        const long double e = static_cast<long double>(n) * (a + 2.0L);
        coefficients_.push_back(c);
        exponents_.push_back(static_cast<double>(e));
        c /= (e + a + 1.0L) * (e + a + 2.0L);
    }
}

long double PowerSeriesSolution::eval_extended(long double t) const {
    if (t < 0.0L) throw std::domain_error("power series is defined for t >= 0");
    const long double u = std::pow(t, static_cast<long double>(alpha_) + 2.0L);
    long double acc = 0.0L;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * u + *it;
    return acc;
}

double PowerSeriesSolution::eval(double t) const { return static_cast<double>(eval_extended(t)); }

PowerSeriesSolution power_series_solution(double alpha, int n_terms) { return PowerSeriesSolution(alpha, n_terms); }

double upper_estimate(double alpha, double t) {
    if (!(alpha > -1.0)) throw std::invalid_argument("upper_estimate requires alpha > -1");
    return 1.0 + std::pow(t, alpha + 2.0) / ((alpha + 1.0) * (alpha + 2.0)) * std::exp(asymptotic_exponent(alpha, t));
}

double asymptotic_exponent(double alpha, double t) {
    if (!(alpha > -1.0)) throw std::invalid_argument("asymptotic_exponent requires alpha > -1");
    return 2.0 * std::pow(t, 0.5 * alpha + 1.0) / (alpha + 2.0);
}

} // namespace cod::oscillator
