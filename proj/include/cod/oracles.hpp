#pragma once

// Reference solvers used only to check the series solutions. None of them reuse
// the series code paths; they share nothing beyond the field containers.

#include "cod/grid.hpp"
#include "cod/tdse.hpp"
#include "cod/wave.hpp"

#include <functional>
#include <string>

namespace cod::oracles {

template <class Solution>
struct OracleResult {
    Solution solution;
    std::string method;
    double step_used = 0.0;
    double error_estimate = 0.0;  // from a step-halving comparison
};

using ComplexFn = std::function<cplx(double)>;

/// Classic RK4 on (f, f') for f'' + omega^2(t) f = 0 with f(t0) = a, f'(t0) = b,
/// integrated both ways from t0 to cover the grid. The internal step is halved until
/// the Richardson estimate drops below `target` (or the halving budget runs out).
OracleResult<GridFunction> rk4_oscillator(const ComplexFn& omega_sq, cplx a, cplx b, double t0, const Grid& grid,
                                          double target = 1e-9);

/// Fixed-step RK4 with `substeps` steps per grid interval, no refinement.
GridFunction rk4_oscillator_fixed(const ComplexFn& omega_sq, cplx a, cplx b, double t0, const Grid& grid,
                                  int substeps);

struct CrankNicolsonOptions {
    int substeps = 16;              // oracle step = dt / substeps
    bool time_independent = false;  // factor the step matrix once
    bool richardson = false;        // combine substeps and 2*substeps runs to fourth order
};

/// Crank-Nicolson on the dense Fourier-collocation Hamiltonian, from t = 0 to t_final in steps of
/// dt/substeps; the matrices are built from explicit Fourier sums, not from the FFT path.
OracleResult<GridFunction> crank_nicolson(const tdse::TdseSetup& setup, double dt, double t_final,
                                          const CrankNicolsonOptions& options = {});

/// Same, starting from an arbitrary state psi at time t0.
GridFunction crank_nicolson_from(const tdse::TdseSetup& setup, const GridFunction& psi, double t0, double duration,
                                 int n_steps, bool time_independent);

struct LeapfrogResult {
    OracleResult<wave::SpaceTimeField> oracle;
    double energy_drift = 0.0;  // max relative change of the discrete energy
};

/// Explicit second-order leapfrog for d/dt(eps dA/dt) = d^2A/dx^2 with a dense Fourier
/// second-derivative matrix, sampled on t_grid. Runs with `substeps` and 2 * `substeps` inner
/// steps per output interval and returns the finer run; error_estimate is |fine - coarse| / 3.
/// Throws std::invalid_argument unless dt <= 2 dx sqrt(eps_min) / pi, the stability limit of the
/// spectral operator (stricter than dt <= dx sqrt(eps_min)).
LeapfrogResult leapfrog_wave(const wave::WaveProblem& p, const Grid& x_grid, const Grid& t_grid, int substeps);

} // namespace cod::oracles
