#pragma once

// Time-dependent Schroedinger equation on a 1D periodic grid,
//   i d/dt psi = [1/2 (i d/dx + A(t))^2 + U(x, t)] psi,
// advanced by the series psi(t+dt) = sum_n (-i int dt H)^n psi(t).

#include "cod/grid.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cod::tdse {

using Potential = std::function<double(double x, double t)>;
using VectorPotential = std::function<double(double t)>;

class PropagationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// psi0 must be L2-normalized to 1 within 1e-12; the grid is periodic.
class TdseSetup {
public:
    TdseSetup(Grid grid, Potential potential, VectorPotential vector_potential, GridFunction psi0);

    const Grid& grid() const { return grid_; }
    const GridFunction& psi0() const { return psi0_; }
    double potential(double x, double t) const { return potential_(x, t); }
    double vector_potential(double t) const { return vector_potential_(t); }

private:
    Grid grid_;
    Potential potential_;
    VectorPotential vector_potential_;
    GridFunction psi0_;
};

/// Scales f to unit L2 norm.
GridFunction normalized(GridFunction f);
double l2_norm(const GridFunction& f);

struct PropagatorStep {
    double dt = 1e-2;
    int n_terms = 4;
    /// Equispaced sub-nodes per step; the cumulative time quadrature is exact for
    /// polynomials of degree quadrature_nodes - 1.
    int quadrature_nodes = 5;

    void validate() const;
};

/// H psi with the kinetic part applied per Fourier mode: exp(ikx) -> 1/2 (k - A(t))^2 exp(ikx).
GridFunction hamiltonian_apply(const TdseSetup& setup, const GridFunction& psi, double t);

/// Rough spectral radius of H at time t: 1/2 (k_max + |A|)^2 + max |U|.
double spectral_radius_estimate(const TdseSetup& setup, double t);

/// Cumulative integration weights w[i][j] = int_{s_0}^{s_i} l_j(s) ds on q equispaced nodes of [0, 1].
std::vector<std::vector<double>> cumulative_weights(int q);

/// One step t -> t + dt: sum of n_terms + 1 series terms, each term built from the
/// previous one by -i times the cumulative time integral of H(tau) term(tau).
GridFunction cod_step(const TdseSetup& setup, const PropagatorStep& step, const GridFunction& psi, double t);

struct StepRecord {
    int step = 0;
    double t = 0.0;
    double norm = 1.0;
    double drift = 0.0;
};

struct PropagationReport {
    std::vector<StepRecord> steps;
    double max_drift = 0.0;
    std::vector<std::string> warnings;
};

struct PropagationResult {
    GridFunction psi;
    PropagationReport report;
};

/// Repeats cod_step from t = 0 to t_final (a multiple of dt).
/// Throws PropagationError("propagation unstable") once the norm drift exceeds 0.1.
/// `on_step`, when set, is called after every step with the current state.
PropagationResult propagate(const TdseSetup& setup, const PropagatorStep& step, double t_final,
                            const std::function<void(const StepRecord&, const GridFunction&)>& on_step = {});

/// One JSON object per line: {"step":..,"t":..,"norm":..,"drift":..}.
std::string step_record_json(const StepRecord& r);

} // namespace cod::tdse
