#include "cod/exp_potential.hpp"

#include <cmath>

namespace cod::exp_potential {

cplx resolvent_ratio(double m, cplx lambda) {
    const cplx denom = lambda * lambda + m * m;
    const double scale = std::norm(lambda) + m * m;
    if (std::abs(denom) <= 1e-14 * scale) throw PoleError("on-shell pole");
    return 1.0 / denom;
}

cplx nested_inverse_partial(double m, cplx lambda, int K) {
    if (K < 0) throw std::invalid_argument("nested_inverse_partial: K must be >= 0");
    if (lambda == cplx(0.0)) throw PoleError("on-shell pole");
    // G0^-1 maps e^{lambda x} to e^{lambda x}/lambda^2 (both limits at -infinity),
    // so each inner cycle G0^-1 V0 multiplies by -m^2/lambda^2.
    const cplx inv_g0 = 1.0 / (lambda * lambda);
    const cplx ratio = -m * m * inv_g0;
    cplx term = 1.0;
    cplx sum = 0.0;
    for (int k = 0; k <= K; ++k) {
        sum += term;
        term *= ratio;
    }
    return sum * inv_g0;
}

ExpSeriesSolution::ExpSeriesSolution(double m, double amplitude, int n_terms) : m_(m), amplitude_(amplitude) {
    if (n_terms < 1) throw std::invalid_argument("particular_solution: n_terms must be >= 1");
    if (m == 0.0) throw std::domain_error("zero-energy degenerate");
    product_coeffs_.reserve(static_cast<std::size_t>(n_terms));
    cplx p = 1.0;
    for (int k = 1; k <= n_terms; ++k) {
        // One outer cycle on e^{(k-1+im)x}: V multiplies by A e^x, G^-1 by resolvent_ratio(m, k + im).
        p *= resolvent_ratio(m, cplx(k, m));
        product_coeffs_.push_back(p);
    }
}

cplx ExpSeriesSolution::sum(double x, bool conjugated) const {
    const double z = amplitude_ * std::exp(x);
    cplx acc = 0.0;
    for (auto it = product_coeffs_.rbegin(); it != product_coeffs_.rend(); ++it) {
        acc = (acc + (conjugated ? std::conj(*it) : *it)) * z;
    }
    acc += 1.0;
    const double phase = conjugated ? -m_ * x : m_ * x;
    return std::polar(1.0, phase) * acc;
}

cplx ExpSeriesSolution::operator()(double x) const { return sum(x, false); }
cplx ExpSeriesSolution::conjugate(double x) const { return sum(x, true); }

ExpSeriesSolution particular_solution(const ExpPotentialProblem& p, int n_terms) {
    return ExpSeriesSolution(p.m, p.amplitude, n_terms);
}

GeneralSolution::GeneralSolution(const ExpPotentialProblem& p, int n_terms)
    : particular_(particular_solution(p, n_terms)), c1_(p.c1), c2_(p.c2) {}

cplx GeneralSolution::operator()(double x) const {
    cplx v = 0.0;
    if (c1_ != cplx(0.0)) v += c1_ * particular_(x);
    if (c2_ != cplx(0.0)) v += c2_ * particular_.conjugate(x);
    return v;
}

GridFunction GeneralSolution::sample(const Grid& grid) const {
    return GridFunction::sample(grid, [this](double x) { return (*this)(x); });
}

GeneralSolution general_solution(const ExpPotentialProblem& p, int n_terms) { return GeneralSolution(p, n_terms); }

GridFunction residual(const GridFunction& psi, double m, double amplitude) {
    GridFunction out = second_derivative(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = psi.grid().point(i);
        out[i] += (m * m - amplitude * std::exp(x)) * psi[i];
    }
    return out;
}

GridFunction residual(const GeneralSolution& psi, const Grid& grid, double m, double amplitude) {
    const Grid padded(grid.start() - grid.step(), grid.step(), grid.count() + 2);
    const GridFunction samples = psi.sample(padded);
    const double inv_h2 = 1.0 / (grid.step() * grid.step());
    GridFunction out(grid);
    for (std::size_t i = 0; i < grid.count(); ++i) {
        const double x = grid.point(i);
        const cplx d2 = (samples[i] - 2.0 * samples[i + 1] + samples[i + 2]) * inv_h2;
        out[i] = d2 + (m * m - amplitude * std::exp(x)) * samples[i + 1];
    }
    return out;
}

} // namespace cod::exp_potential
