#include "cod/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cod::oracles {

namespace {

struct State {
    cplx f;
    cplx df;
};

State rk4_step(const ComplexFn& omega_sq, double t, const State& y, double h) {
    auto rhs = [&](double tt, const State& s) { return State{s.df, -omega_sq(tt) * s.f}; };
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, {y.f + 0.5 * h * k1.f, y.df + 0.5 * h * k1.df});
    const State k3 = rhs(t + 0.5 * h, {y.f + 0.5 * h * k2.f, y.df + 0.5 * h * k2.df});
    const State k4 = rhs(t + h, {y.f + h * k3.f, y.df + h * k3.df});
    return {y.f + h / 6.0 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f),
            y.df + h / 6.0 * (k1.df + 2.0 * k2.df + 2.0 * k3.df + k4.df)};
}

// Dense periodic collocation matrix (1/n) sum_m symbol(k_m) exp(i k_m (x_j - x_l)).
Eigen::MatrixXcd fourier_matrix(const Grid& grid, const std::function<cplx(double, std::size_t)>& symbol) {
    const std::size_t n = grid.count();
    const double length = grid.step() * static_cast<double>(n);
    std::vector<double> k(n);
    for (std::size_t m = 0; m < n; ++m) {
        const long sm = m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
        k[m] = 2.0 * std::numbers::pi * static_cast<double>(sm) / length;
    }
    // The matrix is circulant: entry (j, l) depends only on (j - l) mod n.
    std::vector<cplx> column(n);
    for (std::size_t d = 0; d < n; ++d) {
        cplx s = 0.0;
        const double dx = static_cast<double>(d) * grid.step();
        for (std::size_t m = 0; m < n; ++m) s += symbol(k[m], m) * std::polar(1.0, k[m] * dx);
        column[d] = s / static_cast<double>(n);
    }
    Eigen::MatrixXcd mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = column[(j + n - l) % n];
    }
    return mat;
}

Eigen::MatrixXcd dense_hamiltonian(const tdse::TdseSetup& setup, double t) {
    const double a = setup.vector_potential(t);
    Eigen::MatrixXcd h = fourier_matrix(setup.grid(), [a](double k, std::size_t) {
        const double s = a - k;
        return cplx(0.5 * s * s);
    });
    for (std::size_t j = 0; j < setup.grid().count(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        h(jj, jj) += setup.potential(setup.grid().point(j), t);
    }
    return h;
}

Eigen::VectorXcd to_vector(const GridFunction& f) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = f[i];
    return v;
}

GridFunction from_vector(const Grid& grid, const Eigen::VectorXcd& v) {
    GridFunction f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = v(static_cast<Eigen::Index>(i));
    return f;
}

double sup_difference(const GridFunction& a, const GridFunction& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

} // namespace

GridFunction rk4_oscillator_fixed(const ComplexFn& omega_sq, cplx a, cplx b, double t0, const Grid& grid,
                                  int substeps) {
    if (substeps < 1) throw std::invalid_argument("rk4: substeps must be >= 1");
    const std::size_t i0 = grid.index_of(t0);
    GridFunction out(grid);
    const double h = grid.step() / substeps;

    State y{a, b};
    out[i0] = a;
    for (std::size_t i = i0 + 1; i < grid.count(); ++i) {
        for (int s = 0; s < substeps; ++s) y = rk4_step(omega_sq, grid.point(i - 1) + s * h, y, h);
        out[i] = y.f;
    }
    y = {a, b};
    for (std::size_t i = i0; i-- > 0;) {
        for (int s = 0; s < substeps; ++s) y = rk4_step(omega_sq, grid.point(i + 1) - s * h, y, -h);
        out[i] = y.f;
    }
    return out;
}

OracleResult<GridFunction> rk4_oscillator(const ComplexFn& omega_sq, cplx a, cplx b, double t0, const Grid& grid,
                                          double target) {
    int substeps = 1;
    GridFunction coarse = rk4_oscillator_fixed(omega_sq, a, b, t0, grid, substeps);
    for (int round = 0; round < 14; ++round) {
        GridFunction fine = rk4_oscillator_fixed(omega_sq, a, b, t0, grid, 2 * substeps);
        const double estimate = sup_difference(coarse, fine) / 15.0;
        substeps *= 2;
        if (estimate <= target || round == 13) {
            return {std::move(fine), "rk4", grid.step() / substeps, estimate};
        }
        coarse = std::move(fine);
    }
    throw std::logic_error("unreachable");
}

GridFunction crank_nicolson_from(const tdse::TdseSetup& setup, const GridFunction& psi, double t0, double duration,
                                 int n_steps, bool time_independent) {
    if (n_steps < 1) throw std::invalid_argument("crank_nicolson: n_steps must be >= 1");
    const double h = duration / n_steps;
    const auto n = static_cast<Eigen::Index>(setup.grid().count());
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);
    const cplx half_step(0.0, 0.5 * h);

    Eigen::VectorXcd v = to_vector(psi);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    Eigen::MatrixXcd explicit_part;
    for (int s = 0; s < n_steps; ++s) {
        if (s == 0 || !time_independent) {
            const Eigen::MatrixXcd hmat = dense_hamiltonian(setup, t0 + (s + 0.5) * h);
            lu.compute(identity + half_step * hmat);
            explicit_part = identity - half_step * hmat;
        }
        v = lu.solve(explicit_part * v);
        if (!v.allFinite()) throw std::runtime_error("crank_nicolson: linear solve failed");
    }
    return from_vector(setup.grid(), v);
}

OracleResult<GridFunction> crank_nicolson(const tdse::TdseSetup& setup, double dt, double t_final,
                                          const CrankNicolsonOptions& options) {
    if (!(dt > 0.0) || !(t_final > 0.0)) throw std::invalid_argument("crank_nicolson: dt and t_final must be positive");
    const int outer = std::max(1, static_cast<int>(std::llround(t_final / dt)));
    const int steps = outer * options.substeps;
    GridFunction coarse = crank_nicolson_from(setup, setup.psi0(), 0.0, t_final, steps, options.time_independent);
    GridFunction fine = crank_nicolson_from(setup, setup.psi0(), 0.0, t_final, 2 * steps, options.time_independent);
    const double estimate = sup_difference(coarse, fine) / 3.0;
    if (!options.richardson) return {std::move(fine), "crank-nicolson", t_final / (2 * steps), estimate};

    GridFunction extrapolated = fine;
    for (std::size_t i = 0; i < fine.size(); ++i) extrapolated[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return {std::move(extrapolated), "crank-nicolson+richardson", t_final / (2 * steps), estimate};
}

namespace {

LeapfrogResult leapfrog_run(const std::vector<double>& eps, const wave::WaveProblem& p, const Grid& x_grid,
                            const Grid& t_grid, int substeps, const Eigen::MatrixXcd& d2) {
    const std::size_t nx = x_grid.count();
    const double h = t_grid.step() / substeps;
    Eigen::VectorXd inv_eps(static_cast<Eigen::Index>(nx));
    for (std::size_t i = 0; i < nx; ++i) inv_eps(static_cast<Eigen::Index>(i)) = 1.0 / eps[i];

    auto accel = [&](const Eigen::VectorXcd& a) -> Eigen::VectorXcd {
        return (d2 * a).cwiseProduct(inv_eps.cast<cplx>());
    };
    // Staggered energy sum eps |a_{n+1} - a_n|^2 / h^2 - Re <a_n, D2 a_{n+1}>, exactly conserved by leapfrog.
    auto energy = [&](const Eigen::VectorXcd& cur, const Eigen::VectorXcd& next) {
        const Eigen::VectorXcd v = (next - cur) / h;
        double e = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) e += eps[static_cast<std::size_t>(i)] * std::norm(v(i));
        e -= cur.dot(d2 * next).real();
        return e * x_grid.step();
    };

    wave::SpaceTimeField field(x_grid, t_grid);
    Eigen::VectorXcd a_prev = to_vector(p.S);
    const Eigen::VectorXcd r = to_vector(p.R);
    Eigen::VectorXcd a_cur = a_prev + h * r + 0.5 * h * h * accel(a_prev);
    for (std::size_t i = 0; i < nx; ++i) field(0, i) = p.S[i];

    const double e0 = energy(a_prev, a_cur);
    double drift = 0.0;
    long step = 1;  // a_cur holds time step * h
    const long total = static_cast<long>(t_grid.count() - 1) * substeps;
    while (step <= total) {
        if (step % substeps == 0) {
            const auto row = static_cast<std::size_t>(step / substeps);
            for (std::size_t i = 0; i < nx; ++i) field(row, i) = a_cur(static_cast<Eigen::Index>(i));
        }
        if (step == total) break;
        Eigen::VectorXcd a_next = 2.0 * a_cur - a_prev + h * h * accel(a_cur);
        if (e0 > 0.0) drift = std::max(drift, std::abs(energy(a_cur, a_next) - e0) / e0);
        a_prev = std::move(a_cur);
        a_cur = std::move(a_next);
        ++step;
    }
    if (!wave::all_finite(field)) throw std::runtime_error("leapfrog: non-finite field");
    return {{std::move(field), "leapfrog", h, 0.0}, drift};
}

} // namespace

LeapfrogResult leapfrog_wave(const wave::WaveProblem& p, const Grid& x_grid, const Grid& t_grid, int substeps) {
    if (substeps < 1) throw std::invalid_argument("leapfrog: substeps must be >= 1");
    const std::size_t nx = x_grid.count();
    std::vector<double> eps(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        if (!(p.epsilon[i].real() > 0.0)) throw std::invalid_argument("leapfrog: permittivity must be positive");
        eps[i] = p.epsilon[i].real();
    }
    const double eps_min = *std::min_element(eps.begin(), eps.end());
    const double h = t_grid.step() / substeps;
    // Spectral second derivative reaches k = pi/dx, so stability needs h <= 2 dx sqrt(eps_min) / pi.
    if (h > 2.0 / std::numbers::pi * x_grid.step() * std::sqrt(eps_min)) {
        throw std::invalid_argument("leapfrog: CFL condition violated");
    }

    const Eigen::MatrixXcd d2 = fourier_matrix(x_grid, [](double k, std::size_t) { return cplx(-k * k); });
    LeapfrogResult fine = leapfrog_run(eps, p, x_grid, t_grid, 2 * substeps, d2);
    const LeapfrogResult coarse = leapfrog_run(eps, p, x_grid, t_grid, substeps, d2);
    fine.oracle.error_estimate = wave::sup_norm(fine.oracle.solution - coarse.oracle.solution) / 3.0;
    fine.energy_drift = std::max(fine.energy_drift, coarse.energy_drift);
    return fine;
}

} // namespace cod::oracles
