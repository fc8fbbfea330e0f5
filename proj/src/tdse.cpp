#include "cod/tdse.hpp"

#include "cod/json_text.hpp"

#include <algorithm>
#include <cmath>

namespace cod::tdse {

TdseSetup::TdseSetup(Grid grid, Potential potential, VectorPotential vector_potential, GridFunction psi0)
    : grid_(grid),
      potential_(std::move(potential)),
      vector_potential_(std::move(vector_potential)),
      psi0_(std::move(psi0)) {
    if (!(psi0_.grid() == grid_)) throw GridError("psi0 is not sampled on the setup grid");
    if (!potential_) potential_ = [](double, double) { return 0.0; };
    if (!vector_potential_) vector_potential_ = [](double) { return 0.0; };
    if (std::abs(l2_norm(psi0_) - 1.0) > 1e-12) throw std::invalid_argument("psi0 must be L2-normalized");
}

double l2_norm(const GridFunction& f) { return norms(f).l2; }

GridFunction normalized(GridFunction f) {
    const double n = l2_norm(f);
    if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero function");
    f *= 1.0 / n;
    return f;
}

void PropagatorStep::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("propagator: dt must be positive");
    if (n_terms < 1) throw std::invalid_argument("propagator: n_terms must be >= 1");
    if (quadrature_nodes < 2 || quadrature_nodes > 16) {
        throw std::invalid_argument("propagator: quadrature_nodes must lie in [2, 16]");
    }
}

GridFunction hamiltonian_apply(const TdseSetup& setup, const GridFunction& psi, double t) {
    const double a = setup.vector_potential(t);
    const auto k = wavenumbers(psi.grid());
    GridFunction spectrum = dft(psi);
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        // i d/dx acts as -k on exp(ikx), so (i d/dx + A)^2 -> (A - k)^2.
        const double shifted = a - k[j];
        spectrum[j] *= 0.5 * shifted * shifted;
    }
    GridFunction out = idft(spectrum);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += setup.potential(psi.grid().point(i), t) * psi[i];
    return out;
}

double spectral_radius_estimate(const TdseSetup& setup, double t) {
    const auto k = wavenumbers(setup.grid());
    double k_max = 0.0;
    for (double v : k) k_max = std::max(k_max, std::abs(v));
    double u_max = 0.0;
    for (std::size_t i = 0; i < setup.grid().count(); ++i) {
        u_max = std::max(u_max, std::abs(setup.potential(setup.grid().point(i), t)));
    }
    const double kin = k_max + std::abs(setup.vector_potential(t));
    return 0.5 * kin * kin + u_max;
}

std::vector<std::vector<double>> cumulative_weights(int q) {
    if (q < 2) throw std::invalid_argument("cumulative_weights: need at least 2 nodes");
    const auto n = static_cast<std::size_t>(q);
    std::vector<double> nodes(n);
    for (std::size_t m = 0; m < n; ++m) nodes[m] = static_cast<double>(m) / static_cast<double>(n - 1);

    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        // Monomial coefficients of the Lagrange basis polynomial l_j.
        std::vector<double> coeff{1.0};
        for (std::size_t m = 0; m < n; ++m) {
            if (m == j) continue;
            const double denom = nodes[j] - nodes[m];
            std::vector<double> next(coeff.size() + 1, 0.0);
            for (std::size_t p = 0; p < coeff.size(); ++p) {
                next[p + 1] += coeff[p] / denom;
                next[p] -= coeff[p] * nodes[m] / denom;
            }
            coeff = std::move(next);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            double power = nodes[i];
            for (std::size_t p = 0; p < coeff.size(); ++p) {
                s += coeff[p] * power / static_cast<double>(p + 1);
                power *= nodes[i];
            }
            w[i][j] = s;
        }
    }
    return w;
}

GridFunction cod_step(const TdseSetup& setup, const PropagatorStep& step, const GridFunction& psi, double t) {
    step.validate();
    const auto q = static_cast<std::size_t>(step.quadrature_nodes);
    const auto weights = cumulative_weights(step.quadrature_nodes);
    std::vector<double> tau(q);
    for (std::size_t j = 0; j < q; ++j) tau[j] = t + step.dt * static_cast<double>(j) / static_cast<double>(q - 1);

    // term_0 is psi at every sub-node: the generating function is constant in time.
    std::vector<GridFunction> term(q, psi);
    GridFunction result = psi;
    const cplx minus_i_dt(0.0, -step.dt);
    for (int n = 1; n <= step.n_terms; ++n) {
        std::vector<GridFunction> h_term;
        h_term.reserve(q);
        for (std::size_t j = 0; j < q; ++j) h_term.push_back(hamiltonian_apply(setup, term[j], tau[j]));

        std::vector<GridFunction> next(q, GridFunction(psi.grid()));
        for (std::size_t i = 1; i < q; ++i) {
            for (std::size_t j = 0; j < q; ++j) {
                const cplx w = minus_i_dt * weights[i][j];
                if (weights[i][j] == 0.0) continue;
                auto out = next[i].values();
                auto in = h_term[j].values();
                for (std::size_t x = 0; x < out.size(); ++x) out[x] += w * in[x];
            }
        }
        if (!all_finite(next[q - 1])) throw PropagationError("non-finite value in series term " + std::to_string(n));
        result += next[q - 1];
        term = std::move(next);
    }
    return result;
}

PropagationResult propagate(const TdseSetup& setup, const PropagatorStep& step, double t_final,
                            const std::function<void(const StepRecord&, const GridFunction&)>& on_step) {
    step.validate();
    if (!(t_final > 0.0)) throw std::invalid_argument("propagate: t_final must be positive");
    const double ratio = t_final / step.dt;
    const auto n_steps = static_cast<long>(std::llround(ratio));
    if (n_steps < 1 || std::abs(ratio - static_cast<double>(n_steps)) > 1e-9 * std::max(1.0, ratio)) {
        throw std::invalid_argument("propagate: t_final must be a multiple of dt");
    }

    PropagationResult result{setup.psi0(), {}};
    const double radius = spectral_radius_estimate(setup, 0.0);
    if (step.dt * radius >= 1.0) {
        result.report.warnings.push_back("dt * spectral radius estimate = " + format_double(step.dt * radius) +
                                         " >= 1; high modes may be damped or amplified");
    }

    for (long s = 1; s <= n_steps; ++s) {
        const double t0 = static_cast<double>(s - 1) * step.dt;
        result.psi = cod_step(setup, step, result.psi, t0);
        StepRecord rec{static_cast<int>(s), static_cast<double>(s) * step.dt, l2_norm(result.psi), 0.0};
        rec.drift = std::abs(rec.norm - 1.0);
        result.report.max_drift = std::max(result.report.max_drift, rec.drift);
        result.report.steps.push_back(rec);
        if (on_step) on_step(rec, result.psi);
        if (!(rec.drift <= 0.1)) throw PropagationError("propagation unstable");
    }
    return result;
}

std::string step_record_json(const StepRecord& r) {
    nlohmann::ordered_json j;
    j["step"] = r.step;
    j["t"] = r.t;
    j["norm"] = r.norm;
    j["drift"] = r.drift;
    return dump_json(j);
}

} // namespace cod::tdse
