#include "cod/oracles.hpp"
#include "cod/tdse.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cod;
using namespace cod::tdse;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

GridFunction plane_wave(const Grid& g, double k) {
    return GridFunction::sample(g, [k](double x) { return std::polar(1.0, k * x); });
}

// Smooth, band-limited-in-practice state on [0, 2pi).
GridFunction smooth_state(const Grid& g) {
    return normalized(GridFunction::sample(g, [](double x) { return std::exp(cplx(std::cos(x), 0.5 * std::sin(2.0 * x))); }));
}

// sum_{n<=N} (-i H dt)^n / n! psi by repeated application of H.
GridFunction taylor_oracle(const TdseSetup& setup, const GridFunction& psi, double dt, int n_terms) {
    GridFunction sum = psi;
    GridFunction term = psi;
    for (int n = 1; n <= n_terms; ++n) {
        term = hamiltonian_apply(setup, term, 0.0);
        term *= cplx(0.0, -dt / n);
        sum += term;
    }
    return sum;
}

double expectation_x(const GridFunction& psi) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        num += psi.grid().point(i) * std::norm(psi[i]);
        den += std::norm(psi[i]);
    }
    return num / den;
}

// Time of the first local maximum after t_min, refined by a parabola through three samples.
double first_maximum_after(const std::vector<double>& t, const std::vector<double>& y, double t_min) {
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (t[i] > t_min && y[i] >= y[i - 1] && y[i] > y[i + 1]) {
            const double h = t[i] - t[i - 1];
            const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
            return t[i] + 0.5 * h * (y[i - 1] - y[i + 1]) / denom;
        }
    }
    return -1.0;
}

} // namespace

TEST_CASE("kinetic energy of a plane wave") {
    const Grid g = Grid::periodic(0.0, two_pi, 32);
    for (double k : {0.0, 1.0, -3.0, 5.0}) {
        CAPTURE(k);
        const auto psi = plane_wave(g, k);
        const TdseSetup free(g, {}, {}, normalized(psi));
        CHECK(sup_norm(hamiltonian_apply(free, psi, 0.0) - (0.5 * k * k) * psi) < 1e-12);

        const double a0 = 0.7;
        const TdseSetup shifted(g, {}, [a0](double) { return a0; }, normalized(psi));
        CHECK(sup_norm(hamiltonian_apply(shifted, psi, 0.0) - (0.5 * (k - a0) * (k - a0)) * psi) < 1e-12);
    }
}

TEST_CASE("constant potential adds u0 psi") {
    const Grid g = Grid::periodic(0.0, two_pi, 32);
    const auto psi = smooth_state(g);
    const TdseSetup free(g, {}, {}, psi);
    const TdseSetup lifted(g, [](double, double) { return 0.25; }, {}, psi);
    CHECK(sup_norm(hamiltonian_apply(lifted, psi, 0.0) - hamiltonian_apply(free, psi, 0.0) - 0.25 * psi) < 1e-13);
}

TEST_CASE("setup validation") {
    const Grid g = Grid::periodic(0.0, two_pi, 16);
    CHECK_THROWS_AS(TdseSetup(g, {}, {}, plane_wave(g, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(TdseSetup(g, {}, {}, normalized(plane_wave(Grid::periodic(0.0, two_pi, 8), 1.0))), GridError);
    CHECK_THROWS_AS(PropagatorStep({.dt = 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(PropagatorStep({.n_terms = 0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(PropagatorStep({.quadrature_nodes = 1}).validate(), std::invalid_argument);
}

TEST_CASE("cumulative weights integrate polynomials exactly") {
    for (int q : {2, 3, 5, 8}) {
        const auto w = cumulative_weights(q);
        for (int degree = 0; degree < q; ++degree) {
            for (int i = 0; i < q; ++i) {
                const double s = static_cast<double>(i) / (q - 1);
                double approx = 0.0;
                for (int j = 0; j < q; ++j) approx += w[i][j] * std::pow(static_cast<double>(j) / (q - 1), degree);
                CHECK(approx == doctest::Approx(std::pow(s, degree + 1) / (degree + 1)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("one-term step on a plane wave") {
    const Grid g = Grid::periodic(0.0, two_pi, 32);
    const double k = 3.0, dt = 0.01;
    const auto psi = normalized(plane_wave(g, k));
    const TdseSetup free(g, {}, {}, psi);
    const auto out = cod_step(free, {.dt = dt, .n_terms = 1, .quadrature_nodes = 2}, psi, 0.0);
    CHECK(sup_norm(out - cplx(1.0, -0.5 * k * k * dt) * psi) < 1e-14);
}

TEST_CASE("time-independent step equals the Taylor polynomial") {
    const Grid g = Grid::periodic(0.0, two_pi, 32);
    const auto psi = smooth_state(g);
    const TdseSetup setup(g, [](double x, double) { return std::cos(x); }, [](double) { return 0.3; }, psi);
    for (int n : {1, 2, 3, 4, 6}) {
        for (double dt : {0.05, 0.01}) {
            CAPTURE(n);
            CAPTURE(dt);
            const int nodes = std::max(n, 2);
            const auto step = cod_step(setup, {.dt = dt, .n_terms = n, .quadrature_nodes = nodes}, psi, 0.0);
            CHECK(sup_norm(step - taylor_oracle(setup, psi, dt, n)) <= 1e-12);
        }
    }
}

TEST_CASE("step error converges with order N + 1") {
    const Grid g = Grid::periodic(0.0, two_pi, 32);
    const auto psi = smooth_state(g);
    const TdseSetup setup(g, [](double x, double) { return std::cos(x); }, {}, psi);
    const std::vector<double> dts = {0.04, 0.02, 0.01};
    for (int n : {1, 2, 3}) {
        CAPTURE(n);
        std::vector<double> log_dt, log_err;
        for (double dt : dts) {
            const auto truth = oracles::crank_nicolson(setup, dt, dt, {.substeps = 64, .time_independent = true, .richardson = true});
            const auto step = cod_step(setup, {.dt = dt, .n_terms = n, .quadrature_nodes = 5}, psi, 0.0);
            log_dt.push_back(std::log(dt));
            log_err.push_back(std::log(sup_norm(step - truth.solution)));
        }
        // Least-squares slope.
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < dts.size(); ++i) mx += log_dt[i], my += log_err[i];
        mx /= dts.size();
        my /= dts.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < dts.size(); ++i) {
            sxy += (log_dt[i] - mx) * (log_err[i] - my);
            sxx += (log_dt[i] - mx) * (log_dt[i] - mx);
        }
        CHECK(std::abs(sxy / sxx - (n + 1)) <= 0.3);
    }
}

TEST_CASE("free propagation reproduces the dispersion phases") {
    const Grid g = Grid::periodic(0.0, two_pi, 16);
    const std::vector<std::pair<int, cplx>> modes = {{-2, {0.3, 0.1}}, {-1, {0.5, 0.0}}, {0, {0.2, -0.4}}, {1, {0.6, 0.2}}, {2, {-0.1, 0.3}}};
    auto psi0 = GridFunction::sample(g, [&](double x) {
        cplx v = 0.0;
        for (auto [k, c] : modes) v += c * std::polar(1.0, k * x);
        return v;
    });
    psi0 = normalized(psi0);
    const TdseSetup free(g, {}, {}, psi0);
    const auto result = propagate(free, {.dt = 1e-2, .n_terms = 4, .quadrature_nodes = 5}, 1.0);
    CHECK(result.report.steps.size() == 100);
    CHECK(result.report.max_drift <= 1e-8);
    CHECK(result.report.warnings.empty());

    const auto before = dft(psi0);
    const auto after = dft(result.psi);
    const auto k = wavenumbers(g);
    for (std::size_t j = 0; j < g.count(); ++j) {
        const cplx expected = before[j] * std::polar(1.0, -0.5 * k[j] * k[j]);
        CHECK(std::abs(after[j] - expected) <= 1e-7);
    }
}

TEST_CASE("uniform time-dependent potential adds the integrated phase") {
    const Grid g = Grid::periodic(0.0, two_pi, 16);
    const double k = 2.0, u0 = 1.5;
    const auto psi0 = normalized(plane_wave(g, k));
    const TdseSetup setup(g, [u0](double, double t) { return u0 * t; }, {}, psi0);
    const auto result = propagate(setup, {.dt = 1e-2, .n_terms = 4, .quadrature_nodes = 5}, 1.0);
    const cplx phase = std::polar(1.0, -(0.5 * k * k + 0.5 * u0));
    CHECK(sup_norm(result.psi - phase * psi0) <= 1e-8);
}

TEST_CASE("per-step norm drift is bounded by the truncation order") {
    const Grid g = Grid::periodic(0.0, two_pi, 32);
    const auto psi = smooth_state(g);
    const TdseSetup setup(g, [](double x, double) { return std::cos(x); }, {}, psi);
    const double rho = spectral_radius_estimate(setup, 0.0);
    for (int n : {1, 2, 3, 4}) {
        const double dt = 0.01;
        const auto out = cod_step(setup, {.dt = dt, .n_terms = n, .quadrature_nodes = 5}, psi, 0.0);
        const double bound = 2.0 * std::pow(rho * dt, n + 1) / std::tgamma(n + 2.0);
        CHECK(std::abs(l2_norm(out) - 1.0) <= bound);
    }
}

TEST_CASE("step is linear in psi") {
    const Grid g = Grid::periodic(0.0, two_pi, 32);
    std::mt19937 rng(42);
    std::normal_distribution<double> n01;
    auto random_state = [&] {
        return GridFunction::sample(g, [&](double) { return cplx(n01(rng), n01(rng)); });
    };
    const auto a = random_state(), b = random_state();
    const TdseSetup setup(g, [](double x, double t) { return std::sin(x) * (1.0 + t); }, [](double t) { return 0.2 * t; },
                          smooth_state(g));
    const PropagatorStep step{.dt = 0.01, .n_terms = 3, .quadrature_nodes = 4};
    const cplx ca(0.3, -1.1), cb(-0.7, 0.4);
    GridFunction mix = a;
    mix *= ca;
    GridFunction bb = b;
    bb *= cb;
    mix += bb;
    GridFunction expected = cod_step(setup, step, a, 0.2);
    expected *= ca;
    GridFunction eb = cod_step(setup, step, b, 0.2);
    eb *= cb;
    expected += eb;
    CHECK(sup_norm(cod_step(setup, step, mix, 0.2) - expected) <= 1e-12);
}

TEST_CASE("harmonic coherent state oscillates with period 2 pi") {
    const Grid g = Grid::periodic(-10.0, 20.0, 128);
    const double x0 = 2.0;
    const auto psi0 = normalized(GridFunction::sample(g, [x0](double x) { return std::exp(-0.5 * (x - x0) * (x - x0)); }));
    const TdseSetup setup(g, [](double x, double) { return 0.5 * x * x; }, {}, psi0);
    const double dt = 0.0025;

    std::vector<double> t{0.0}, center{expectation_x(psi0)};
    const auto result = propagate(setup, {.dt = dt, .n_terms = 4, .quadrature_nodes = 5}, 6.5,
                                  [&](const StepRecord& r, const GridFunction& psi) {
                                      t.push_back(r.t);
                                      center.push_back(expectation_x(psi));
                                  });
    CHECK(result.report.warnings.empty());
    const double period = first_maximum_after(t, center, 3.0);
    CHECK(std::abs(period - two_pi) <= 0.01 * two_pi);

    // Crank-Nicolson oracle on the same box, sampled every 0.05.
    const double sample = 0.05;
    GridFunction cn = psi0;
    std::vector<double> cn_t{0.0}, cn_center{expectation_x(psi0)};
    for (int s = 1; s * sample <= 6.5 + 1e-12; ++s) {
        cn = oracles::crank_nicolson_from(setup, cn, (s - 1) * sample, sample, 20, true);
        cn_t.push_back(s * sample);
        cn_center.push_back(expectation_x(cn));
    }
    const double cn_period = first_maximum_after(cn_t, cn_center, 3.0);
    CHECK(std::abs(cn_period - two_pi) <= 0.005 * two_pi);
    CHECK(std::abs(period - cn_period) <= 0.01 * cn_period);
    for (std::size_t s = 0; s < cn_t.size(); ++s) {
        const auto i = static_cast<std::size_t>(std::llround(cn_t[s] / dt));
        CHECK(std::abs(center[i] - cn_center[s]) <= 1e-3);
    }
}

TEST_CASE("oversized steps abort as unstable") {
    const Grid g = Grid::periodic(0.0, two_pi, 64);
    const auto psi = normalized(GridFunction::sample(g, [](double x) { return 1.0 + 0.1 * std::cos(31.0 * x); }));
    const TdseSetup free(g, {}, {}, psi);
    CHECK_THROWS_WITH_AS(propagate(free, {.dt = 0.5, .n_terms = 1, .quadrature_nodes = 2}, 5.0), "propagation unstable",
                         PropagationError);
    CHECK_THROWS_AS(propagate(free, {.dt = 0.3}, 1.0), std::invalid_argument);
}

TEST_CASE("step records serialize as JSON lines") {
    CHECK(step_record_json({3, 0.03, 1.0, 0.0}) == R"({"step":3,"t":0.029999999999999999,"norm":1,"drift":0})");
}
