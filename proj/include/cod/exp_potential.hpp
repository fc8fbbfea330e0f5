#pragma once

// Stationary Schroedinger equation [m^2 + d^2/dx^2 - A e^x] psi = 0 in closed form.
// G = m^2 + d^2/dx^2 is inverted by an inner series (G0 = d^2/dx^2, V0 = -m^2),
// evaluated exactly on exponential monomials e^{lambda x}.

#include "cod/grid.hpp"

#include <stdexcept>
#include <vector>

namespace cod::exp_potential {

class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Resummed action of G^-1 on e^{lambda x}: returns 1/(lambda^2 + m^2).
/// Throws PoleError("on-shell pole") when lambda^2 + m^2 vanishes.
cplx resolvent_ratio(double m, cplx lambda);

/// Inner series truncated after K cycles: sum_{k=0..K} (-m^2/lambda^2)^k / lambda^2.
/// Converges to resolvent_ratio(m, lambda) when |m^2/lambda^2| < 1.
cplx nested_inverse_partial(double m, cplx lambda, int K);

struct ExpPotentialProblem {
    double m = 1.0;          // 2E = m^2
    double amplitude = 0.0;  // A
    cplx c1 = 1.0;
    cplx c2 = 0.0;
};

/// psi_p(x) = e^{imx} [1 + sum_n A^n e^{nx} P_n],  P_n = prod_{k<=n} 1/(k^2 + 2imk).
class ExpSeriesSolution {
public:
    ExpSeriesSolution(double m, double amplitude, int n_terms);

    double m() const { return m_; }
    double amplitude() const { return amplitude_; }
    const std::vector<cplx>& product_coeffs() const { return product_coeffs_; }

    cplx operator()(double x) const;
    /// Coefficient-wise conjugate series (m -> -m); equals conj(psi_p(x)) for real x.
    cplx conjugate(double x) const;

private:
    cplx sum(double x, bool conjugated) const;

    double m_;
    double amplitude_;
    std::vector<cplx> product_coeffs_;  // P_1 .. P_N
};

/// Throws std::domain_error("zero-energy degenerate") for m == 0.
ExpSeriesSolution particular_solution(const ExpPotentialProblem& p, int n_terms);

/// psi(x) = c1 psi_p(x) + c2 psi_p*(x).
class GeneralSolution {
public:
    GeneralSolution(const ExpPotentialProblem& p, int n_terms);
    cplx operator()(double x) const;
    GridFunction sample(const Grid& grid) const;

private:
    ExpSeriesSolution particular_;
    cplx c1_;
    cplx c2_;
};

GeneralSolution general_solution(const ExpPotentialProblem& p, int n_terms);

/// Discrete residual psi'' + m^2 psi - A e^x psi on the sampled grid.
GridFunction residual(const GridFunction& psi, double m, double amplitude);

/// Residual of an evaluator on `grid`: samples one extra point past each end so every
/// grid point, including the two ends, gets the central second difference.
GridFunction residual(const GeneralSolution& psi, const Grid& grid, double m, double amplitude);

} // namespace cod::exp_potential
