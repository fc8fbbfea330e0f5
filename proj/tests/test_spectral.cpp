#include "cod/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace cod;
using namespace cod::spectral;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

PeriodicField random_field(std::size_t n, double length, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PeriodicField f({n}, {length});
    for (auto& v : f.values()) v = cplx(u(rng), u(rng));
    return f;
}

PeriodicField delta_1d(std::size_t n, double length, std::size_t at = 0) {
    PeriodicField f({n}, {length});
    f[at] = 1.0;
    return f;
}

PeriodicField shifted(const PeriodicField& f, std::size_t s) {
    PeriodicField out = f;
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i) out[(i + s) % n] = f[i];
    return out;
}

PeriodicField cosine_potential(std::size_t n, double length, double eps) {
    const double k1 = two_pi / length;
    return PeriodicField::sample_1d(n, length, [=](double x) { return eps * std::cos(k1 * x); });
}

} // namespace

TEST_CASE("inverse Laplacian of a fundamental sine") {
    for (double length : {two_pi, 3.0}) {
        const double k1 = two_pi / length;
        const auto f = PeriodicField::sample_1d(64, length, [k1](double x) { return std::sin(k1 * x); });
        const auto g = inverse_laplacian(f);
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(std::abs(g[i] + std::sin(k1 * f.coordinate(0, i)) / (k1 * k1)) < 1e-13);
        }
    }
}

TEST_CASE("inverse Laplacian annihilates constants") {
    const auto one = PeriodicField::sample_1d(32, two_pi, [](double) { return 1.0; });
    CHECK(sup_norm(inverse_laplacian(one)) < 1e-15);
}

TEST_CASE("Laplacian after inverse Laplacian projects out the mean") {
    const auto f = random_field(64, 5.0, 7);
    const auto g = inverse_laplacian(f);
    PeriodicField expected = f;
    const cplx m = mean(f);
    for (auto& v : expected.values()) v -= m;
    CHECK(sup_norm(laplacian(g) - expected) <= 1e-10);
    CHECK(std::abs(mean(g)) <= 1e-15 * (1.0 + sup_norm(g)));

    const auto f2 = PeriodicField::sample_2d(16, 4.0, [](double x, double y) { return 2.0 + std::sin(x) * y; });
    CHECK(std::abs(mean(inverse_laplacian(f2))) <= 1e-15 * (1.0 + sup_norm(f2)));
}

TEST_CASE("resolvent on a single mode") {
    const double k1 = 1.0;
    PeriodicField f({32}, {two_pi});
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::polar(1.0, k1 * f.coordinate(0, i));
    const auto g = resolvent(f, -0.5);
    CHECK(sup_norm(g - (1.0 / (-1.0 - k1 * k1)) * f) < 1e-14);
}

TEST_CASE("resolvent inverts 2E + Laplacian") {
    const auto f = random_field(64, two_pi, 11);
    CHECK(sup_norm(helmholtz(resolvent(f, -1.0), -1.0) - f) <= 1e-10);

    const auto delta = delta_1d(64, two_pi);
    const auto kernel = resolvent(delta, -0.5);
    CHECK(sup_norm(helmholtz(kernel, -0.5) - delta) <= 1e-8);
    // Yukawa-like kernel: real, symmetric, peaked at the source and negative.
    for (std::size_t i = 1; i < 32; ++i) {
        CHECK(std::abs(kernel[i] - kernel[64 - i]) < 1e-14);
        CHECK(kernel[i].real() > kernel[0].real());
        CHECK(kernel[i].real() < 0.0);
    }
}

TEST_CASE("resolvent rejects on-shell modes") {
    const auto f = random_field(16, two_pi, 3);
    CHECK_THROWS_WITH_AS(resolvent(f, 0.5), "on-shell mode", ResonanceError);
    CHECK_THROWS_AS(resolvent(f, 0.0), ResonanceError);
    CHECK_THROWS_AS(build_stationary_scheme(f, 2.0, PeriodicField({16}, {two_pi}), Variant::resolvent),
                    ResonanceError);
}

TEST_CASE("free laplace series terminates at the constant with a nonzero defect") {
    const PeriodicField zero({32}, {two_pi});
    const auto c = PeriodicField::sample_1d(32, two_pi, [](double) { return cplx(0.7, -0.2); });
    for (double energy : {0.0, 0.3, -1.5}) {
        CAPTURE(energy);
        const auto run = solve_stationary(zero, energy, c, Variant::laplace, {.tol = 1e-12});
        CHECK(run.stop_reason == StopReason::converged);
        CHECK(run.terms_used == 0);
        CHECK(sup_norm(run.partial_sum - c) < 1e-15);
        const auto d = stationary_defect(zero, energy, run.partial_sum);
        CHECK(sup_norm(d - (2.0 * energy) * c) < 1e-14);
    }
}

TEST_CASE("first laplace term for a weak cosine potential") {
    const double eps = 0.01;
    for (double length : {two_pi, 4.0}) {
        const double k1 = two_pi / length;
        const auto u = cosine_potential(64, length, eps);
        const auto one = PeriodicField::sample_1d(64, length, [](double) { return 1.0; });
        const auto scheme = build_stationary_scheme(u, 0.0, one, Variant::laplace);
        const auto t1 = scheme.cycle_map(one);
        for (std::size_t i = 0; i < t1.size(); ++i) {
            CHECK(std::abs(t1[i] + 2.0 * eps * std::cos(k1 * u.coordinate(0, i)) / (k1 * k1)) <= 1e-10);
        }
        const auto run = run_cod(scheme, {.tol = 1e-13, .max_terms = 60});
        CHECK(run.stop_reason == StopReason::converged);
        CHECK(sup_norm(run.partial_sum - one - t1) <= 10.0 * eps * eps / std::pow(k1, 4));
    }
}

TEST_CASE("source-driven resolvent series with a delta source") {
    const auto source = delta_1d(64, two_pi);
    for (double eps : {0.01, 0.05, 0.1}) {
        CAPTURE(eps);
        const auto u = cosine_potential(64, two_pi, eps);
        const auto run = solve_stationary_with_source(u, -0.5, source, Variant::resolvent, {.tol = 1e-14, .max_terms = 80});
        CHECK(run.stop_reason == StopReason::converged);
        CHECK(sup_norm(stationary_defect(u, -0.5, run.partial_sum) - source) <= 1e-6);
    }
}

TEST_CASE("two-dimensional resolvent series") {
    const std::size_t n = 16;
    const auto u = PeriodicField::sample_2d(n, two_pi, [](double x, double y) { return 0.1 * std::cos(x) * std::cos(y); });
    PeriodicField source({n, n}, {two_pi, two_pi});
    source[0] = 1.0;
    const auto run = solve_stationary_with_source(u, -0.5, source, Variant::resolvent, {.tol = 1e-14, .max_terms = 80});
    CHECK(run.stop_reason == StopReason::converged);
    CHECK(sup_norm(stationary_defect(u, -0.5, run.partial_sum) - source) <= 1e-6);
    // Symmetric under x <-> y because U and the source are.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(run.partial_sum[i * n + j] - run.partial_sum[j * n + i]) < 1e-12);
    }
}

TEST_CASE("solutions commute with grid translations") {
    const std::size_t n = 64;
    const auto u = PeriodicField::sample_1d(n, two_pi, [](double x) { return 0.05 * (std::cos(x) + std::sin(2.0 * x)); });
    const auto source = delta_1d(n, two_pi, 5);
    const StopPolicy policy{.tol = 1e-14, .max_terms = 80};
    const auto base = solve_stationary_with_source(u, -0.5, source, Variant::resolvent, policy);

    const auto one = PeriodicField::sample_1d(n, two_pi, [](double) { return 1.0; });
    const auto base_laplace = solve_stationary(u, 0.0, one, Variant::laplace, policy);
    for (std::size_t s : {1u, 7u, 32u}) {
        CAPTURE(s);
        const auto moved = solve_stationary_with_source(shifted(u, s), -0.5, shifted(source, s), Variant::resolvent, policy);
        CHECK(sup_norm(moved.partial_sum - shifted(base.partial_sum, s)) <= 1e-10);
        const auto moved_laplace = solve_stationary(shifted(u, s), 0.0, one, Variant::laplace, policy);
        CHECK(sup_norm(moved_laplace.partial_sum - shifted(base_laplace.partial_sum, s)) <= 1e-10);
    }
}

TEST_CASE("telescoping defect identity for both variants") {
    const std::size_t n = 64;
    const auto u = PeriodicField::sample_1d(n, two_pi, [](double x) { return 0.3 * std::cos(x) + 0.1 * std::sin(3.0 * x); });
    for (int terms : {1, 2}) {
        CAPTURE(terms);
        const StopPolicy policy{.tol = 1e-300, .max_terms = terms};

        // Resolvent variant with a source: D S_N - phi = -V T_N exactly.
        const auto source = random_field(n, two_pi, 5);
        const PeriodicField zero({n}, {two_pi});
        const auto rs = build_stationary_scheme(u, -0.5, zero, Variant::resolvent);
        const auto rr = run_cod_with_source(rs, source, policy);
        REQUIRE(rr.terms_used == terms);
        CHECK(sup_norm(defect(rs, rr, source) - telescoped_defect(rs, rr)) <= 1e-10);

        // Laplace variant: the pseudo-inverse drops each term's mean, so
        // D S_N = -V T_N - sum_{n<N} mean(V T_n).
        const auto one = PeriodicField::sample_1d(n, two_pi, [](double) { return 1.0; });
        const auto ls = build_stationary_scheme(u, 0.0, one, Variant::laplace);
        const auto lr = run_cod(ls, policy);
        REQUIRE(lr.terms_used == terms);
        PeriodicField expected = telescoped_defect(ls, lr);
        PeriodicField term = one;
        for (int k = 0; k < terms; ++k) {
            const cplx m = mean(ls.apply_v(term));
            for (auto& v : expected.values()) v -= m;
            term = ls.cycle_map(term);
        }
        CHECK(sup_norm(defect(ls, lr) - expected) <= 1e-10);
    }
}

TEST_CASE("layout validation") {
    CHECK_THROWS_AS(PeriodicField({3}, {1.0}), GridError);
    CHECK_NOTHROW(PeriodicField({6}, {1.0}));
    CHECK_THROWS_AS(PeriodicField({8, 16}, {1.0, 1.0}), GridError);
    CHECK_THROWS_AS(PeriodicField({8, 8}, {1.0, 2.0}), GridError);
    CHECK_THROWS_AS(PeriodicField({8}, {0.0}), GridError);
    CHECK_THROWS_AS(PeriodicField({4}, {1.0}) + PeriodicField({8}, {1.0}), GridError);
}

TEST_CASE("CSV and metadata") {
    const auto f1 = PeriodicField::sample_1d(4, 2.0, [](double x) { return cplx(x, -x); });
    std::ostringstream csv;
    write_csv(csv, f1);
    CHECK(csv.str() == "x,re,im\n0,0,-0\n0.5,0.5,-0.5\n1,1,-1\n1.5,1.5,-1.5\n");

    const auto f2 = PeriodicField::sample_2d(4, 1.0, [](double x, double y) { return cplx(x, y); });
    std::ostringstream grid;
    write_csv(grid, f2);
    CHECK(grid.str().substr(0, grid.str().find('\n')) == "0,0,0,0.25,0,0.5,0,0.75");

    std::ostringstream meta;
    write_metadata(meta, f2);
    CHECK(meta.str().find("\"shape\"") != std::string::npos);
    CHECK(meta.str().find("k=0") != std::string::npos);
}
