#include "cod/oracles.hpp"
#include "cod/oscillator.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cod;
using namespace cod::oracles;

namespace {

constexpr double pi = std::numbers::pi;

double observed_order(double coarse_err, double fine_err) { return std::log2(coarse_err / fine_err); }

GridFunction constant(const Grid& g, double c) {
    return GridFunction::sample(g, [c](double) { return c; });
}

} // namespace

TEST_CASE("RK4 reproduces closed forms") {
    const Grid g = Grid::closed(0.0, 1.0, 101);
    const auto c = rk4_oscillator([](double) { return cplx(1.0); }, 1.0, 0.0, 0.0, g);
    const auto ch = rk4_oscillator([](double) { return cplx(-1.0); }, 1.0, 0.0, 0.0, g);
    CHECK(c.method == "rk4");
    CHECK(c.error_estimate <= 1e-9);
    for (std::size_t i = 0; i < g.count(); ++i) {
        CHECK(std::abs(c.solution[i] - std::cos(g.point(i))) <= 1e-9);
        CHECK(std::abs(ch.solution[i] - std::cosh(g.point(i))) <= 1e-9);
    }

    const auto airy = rk4_oscillator([](double t) { return cplx(-t); }, 1.0, 0.0, 0.0, g);
    CHECK(std::abs(airy.solution[g.count() - 1] - oscillator::power_series_solution(1.0, 25).eval(1.0)) <= 1e-7);
}

TEST_CASE("RK4 covers both sides of an interior start") {
    const Grid g = Grid::closed(-1.0, 1.0, 201);
    const auto r = rk4_oscillator([](double) { return cplx(1.0); }, 1.0, 0.0, 0.0, g);
    for (std::size_t i = 0; i < g.count(); ++i) CHECK(std::abs(r.solution[i] - std::cos(g.point(i))) <= 1e-9);
}

TEST_CASE("RK4 observed order is four") {
    const Grid g = Grid::closed(0.0, 2.0, 11);
    auto w2 = [](double t) { return cplx(1.0 + t); };
    const auto truth = rk4_oscillator_fixed(w2, 1.0, 0.5, 0.0, g, 512);
    const double e1 = sup_norm(rk4_oscillator_fixed(w2, 1.0, 0.5, 0.0, g, 2) - truth);
    const double e2 = sup_norm(rk4_oscillator_fixed(w2, 1.0, 0.5, 0.0, g, 4) - truth);
    CHECK(std::abs(observed_order(e1, e2) - 4.0) <= 0.3);
}

TEST_CASE("Crank-Nicolson order, norm and free phases") {
    const Grid g = Grid::periodic(0.0, 2.0 * pi, 32);
    const auto psi0 = tdse::normalized(GridFunction::sample(g, [](double x) { return std::exp(cplx(std::cos(x), std::sin(x))); }));
    const tdse::TdseSetup setup(g, [](double x, double) { return std::cos(x); }, {}, psi0);

    const auto truth = crank_nicolson_from(setup, psi0, 0.0, 0.5, 4096, true);
    const double e1 = sup_norm(crank_nicolson_from(setup, psi0, 0.0, 0.5, 64, true) - truth);
    const double e2 = sup_norm(crank_nicolson_from(setup, psi0, 0.0, 0.5, 128, true) - truth);
    CHECK(std::abs(observed_order(e1, e2) - 2.0) <= 0.3);

    const auto long_run = crank_nicolson_from(setup, psi0, 0.0, 10.0, 1000, true);
    CHECK(std::abs(tdse::l2_norm(long_run) - 1.0) <= 1e-12);

    const Grid g16 = Grid::periodic(0.0, 2.0 * pi, 16);
    const auto packet = tdse::normalized(GridFunction::sample(g16, [](double x) {
        return std::polar(1.0, x) + 0.5 * std::polar(1.0, -2.0 * x) + 0.3;
    }));
    const tdse::TdseSetup free(g16, {}, {}, packet);
    const auto cn = crank_nicolson(free, 0.01, 1.0, {.substeps = 16, .time_independent = true});
    CHECK(cn.error_estimate <= 1e-6);
    const auto before = dft(packet);
    const auto after = dft(cn.solution);
    const auto k = wavenumbers(g16);
    for (std::size_t j = 0; j < g16.count(); ++j) {
        CHECK(std::abs(after[j] - before[j] * std::polar(1.0, -0.5 * k[j] * k[j])) <= 1e-6);
    }
}

TEST_CASE("Crank-Nicolson harmonic revival") {
    const Grid g = Grid::periodic(-10.0, 20.0, 128);
    const auto psi0 = tdse::normalized(GridFunction::sample(g, [](double x) { return std::exp(-0.5 * (x - 2.0) * (x - 2.0)); }));
    const tdse::TdseSetup setup(g, [](double x, double) { return 0.5 * x * x; }, {}, psi0);
    // After exactly one period the coherent state returns to itself up to a global phase.
    const auto back = crank_nicolson_from(setup, psi0, 0.0, 2.0 * pi, 2000, true);
    double overlap_re = 0.0, overlap_im = 0.0;
    for (std::size_t i = 0; i < g.count(); ++i) {
        const cplx o = std::conj(psi0[i]) * back[i] * g.step();
        overlap_re += o.real();
        overlap_im += o.imag();
    }
    CHECK(std::abs(cplx(overlap_re, overlap_im)) >= 0.999);
    // Half a period later it sits at -x0: the overlap with the start is tiny.
    const auto half = crank_nicolson_from(setup, psi0, 0.0, pi, 1000, true);
    cplx ov = 0.0;
    for (std::size_t i = 0; i < g.count(); ++i) ov += std::conj(psi0[i]) * half[i] * g.step();
    CHECK(std::abs(ov) <= 0.05);
}

TEST_CASE("leapfrog oracle") {
    const Grid x = Grid::periodic(0.0, 2.0 * pi, 16);
    const Grid t = Grid::closed(0.0, pi, 401);
    const wave::WaveProblem unit{constant(x, 1.0), GridFunction::sample(x, [](double v) { return std::sin(v); }), constant(x, 0.0)};
    const auto lf = leapfrog_wave(unit, x, t, 4);
    CHECK(lf.oracle.method == "leapfrog");
    double err = 0.0;
    for (std::size_t it = 0; it < t.count(); ++it) {
        for (std::size_t ix = 0; ix < x.count(); ++ix) {
            err = std::max(err, std::abs(lf.oracle.solution(it, ix) - std::sin(x.point(ix)) * std::cos(t.point(it))));
        }
    }
    CHECK(err <= 1e-5);
    CHECK(lf.oracle.error_estimate <= 1e-5);

    const wave::WaveProblem varying{GridFunction::sample(x, [](double v) { return 1.0 + 0.5 * std::cos(v); }),
                                    GridFunction::sample(x, [](double v) { return std::sin(v); }),
                                    GridFunction::sample(x, [](double v) { return 0.2 * std::cos(2.0 * v); })};
    const Grid t1 = Grid::closed(0.0, 1.0, 101);
    const auto fine = leapfrog_wave(varying, x, t1, 64);
    CHECK(fine.energy_drift <= 1e-6);
    const double e1 = wave::sup_norm(leapfrog_wave(varying, x, t1, 4).oracle.solution - fine.oracle.solution);
    const double e2 = wave::sup_norm(leapfrog_wave(varying, x, t1, 8).oracle.solution - fine.oracle.solution);
    CHECK(std::abs(observed_order(e1, e2) - 2.0) <= 0.3);

    const wave::WaveProblem zero{constant(x, 1.0), constant(x, 0.0), constant(x, 0.0)};
    CHECK(wave::sup_norm(leapfrog_wave(zero, x, t1, 2).oracle.solution) == 0.0);
}

TEST_CASE("leapfrog rejects unstable steps") {
    const Grid x = Grid::periodic(0.0, 2.0 * pi, 64);
    const Grid t = Grid::closed(0.0, 1.0, 11);
    const wave::WaveProblem p{constant(x, 1.0), constant(x, 0.0), constant(x, 0.0)};
    CHECK_THROWS_WITH_AS(leapfrog_wave(p, x, t, 1), "leapfrog: CFL condition violated", std::invalid_argument);
    CHECK_THROWS_AS(leapfrog_wave({constant(x, -1.0), p.S, p.R}, x, t, 100), std::invalid_argument);
}
