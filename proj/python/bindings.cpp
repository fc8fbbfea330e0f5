#include "cod/acceptance.hpp"
#include "cod/engine.hpp"
#include "cod/exp_potential.hpp"
#include "cod/oracles.hpp"
#include "cod/oscillator.hpp"
#include "cod/spectral.hpp"
#include "cod/tdse.hpp"
#include "cod/wave.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using cod::cplx;
using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<cplx> to_vector(const ComplexArray& a) { return {a.data(), a.data() + a.size()}; }

ComplexArray to_array(std::span<const cplx> v, std::vector<py::ssize_t> shape = {}) {
    if (shape.empty()) shape = {static_cast<py::ssize_t>(v.size())};
    ComplexArray out(shape);
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

RealArray points(const cod::Grid& g) {
    const auto p = g.points();
    RealArray out(static_cast<py::ssize_t>(p.size()));
    std::copy(p.begin(), p.end(), out.mutable_data());
    return out;
}

cod::GridFunction periodic_samples(const ComplexArray& a, double x_min, double length) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1D array");
    return {cod::Grid::periodic(x_min, length, static_cast<std::size_t>(a.size())), to_vector(a)};
}

template <class F>
py::dict run_summary(const cod::SeriesRun<F>& run) {
    return py::dict("terms_used"_a = run.terms_used, "stop_reason"_a = cod::to_string(run.stop_reason),
                    "term_sup_norms"_a = run.term_sup_norms);
}

py::dict oscillator_solve(const ComplexArray& omega_sq, double t_min, double t_max, std::optional<double> t_a,
                          std::optional<double> t_b, cplx a, cplx b, double tol, int max_terms) {
    if (omega_sq.ndim() != 1) throw std::invalid_argument("omega_sq must be 1D");
    const auto g = cod::Grid::closed(t_min, t_max, static_cast<std::size_t>(omega_sq.size()));
    const double ta = t_a.value_or(t_min);
    const auto scheme = cod::oscillator::build_scheme({{g, to_vector(omega_sq)}, ta, t_b.value_or(ta), a, b});
    const auto run = cod::run_cod(scheme, {.tol = tol, .max_terms = max_terms});
    auto out = run_summary(run);
    out["t"] = points(g);
    out["f"] = to_array(run.partial_sum.values());
    out["defect_sup_norm"] = cod::sup_norm(cod::defect(scheme, run));
    out["label"] = scheme.label();
    return out;
}

py::dict rk4_oscillator(const std::function<cplx(double)>& omega_sq, cplx a, cplx b, double t_min, double t_max,
                        std::size_t points_count) {
    const auto g = cod::Grid::closed(t_min, t_max, points_count);
    const auto r = cod::oracles::rk4_oscillator(omega_sq, a, b, t_min, g);
    return py::dict("t"_a = points(g), "f"_a = to_array(r.solution.values()), "step_used"_a = r.step_used,
                    "error_estimate"_a = r.error_estimate);
}

RealArray power_series(double alpha, int terms, const RealArray& t) {
    const auto s = cod::oscillator::power_series_solution(alpha, terms);
    RealArray out(t.request().shape);
    for (py::ssize_t i = 0; i < t.size(); ++i) out.mutable_data()[i] = s.eval(t.data()[i]);
    return out;
}

ComplexArray exp_potential(const RealArray& x, double m, double amplitude, cplx c1, cplx c2, int terms) {
    const auto psi = cod::exp_potential::general_solution({m, amplitude, c1, c2}, terms);
    ComplexArray out(x.request().shape);
    for (py::ssize_t i = 0; i < x.size(); ++i) out.mutable_data()[i] = psi(x.data()[i]);
    return out;
}

double exp_residual(double m, double amplitude, int terms, double x_min, double x_max, std::size_t points_count) {
    const auto psi = cod::exp_potential::general_solution({m, amplitude, 1.0, 0.0}, terms);
    return cod::sup_norm(
        cod::exp_potential::residual(psi, cod::Grid::closed(x_min, x_max, points_count), m, amplitude));
}

cod::spectral::PeriodicField field_from(const ComplexArray& a, double length) {
    std::vector<std::size_t> shape;
    for (py::ssize_t d = 0; d < a.ndim(); ++d) shape.push_back(static_cast<std::size_t>(a.shape(d)));
    if (shape.empty() || shape.size() > 2) throw std::invalid_argument("fields must be 1D or 2D");
    return {shape, std::vector<double>(shape.size(), length), to_vector(a)};
}

ComplexArray field_array(const cod::spectral::PeriodicField& f) {
    std::vector<py::ssize_t> shape(f.shape().begin(), f.shape().end());
    return to_array(f.values(), shape);
}

py::dict stationary_solve(const ComplexArray& potential, double length, double energy, const std::string& variant,
                          std::optional<ComplexArray> generating, std::optional<ComplexArray> source, double tol,
                          int max_terms) {
    using namespace cod::spectral;
    if (variant != "laplace" && variant != "resolvent") throw std::invalid_argument("variant must be laplace or resolvent");
    const auto u = field_from(potential, length);
    const auto v = variant == "laplace" ? Variant::laplace : Variant::resolvent;
    const cod::StopPolicy policy{.tol = tol, .max_terms = max_terms};
    if (v == Variant::resolvent && !source) throw std::invalid_argument("the resolvent variant needs a source");
    PeriodicField psi_g(u.shape(), u.box_lengths());
    if (generating) {
        psi_g = field_from(*generating, length);
    } else if (!source) {
        for (auto& c : psi_g.values()) c = 1.0;
    }
    const auto run = source ? solve_stationary_with_source(u, energy, field_from(*source, length), v, policy)
                            : solve_stationary(u, energy, psi_g, v, policy);
    auto residual = stationary_defect(u, energy, run.partial_sum);
    if (source) residual -= field_from(*source, length);
    auto out = run_summary(run);
    out["psi"] = field_array(run.partial_sum);
    out["defect_sup_norm"] = sup_norm(residual);
    out["defect_mean"] = mean(residual);
    return out;
}

py::dict tdse_propagate(const ComplexArray& psi0, double length, double dt, double t_final, int terms, int nodes,
                        std::optional<cod::tdse::Potential> potential,
                        std::optional<cod::tdse::VectorPotential> vector_potential, double x_min) {
    const auto start = periodic_samples(psi0, x_min, length);
    const cod::tdse::TdseSetup setup(start.grid(), potential.value_or([](double, double) { return 0.0; }),
                                     vector_potential.value_or([](double) { return 0.0; }),
                                     cod::tdse::normalized(start));
    const auto result = cod::tdse::propagate(setup, {dt, terms, nodes}, t_final);
    std::vector<double> norms;
    for (const auto& r : result.report.steps) norms.push_back(r.norm);
    return py::dict("x"_a = points(start.grid()), "psi"_a = to_array(result.psi.values()), "norms"_a = norms,
                    "max_drift"_a = result.report.max_drift, "warnings"_a = result.report.warnings);
}

py::dict wave_solve(const RealArray& epsilon, const RealArray& S, const RealArray& R, double length, double t_max,
                    std::size_t t_points, double tol, int max_terms) {
    if (epsilon.ndim() != 1 || S.size() != epsilon.size() || R.size() != epsilon.size()) {
        throw std::invalid_argument("epsilon, S and R must be 1D arrays of equal length");
    }
    const auto x = cod::Grid::periodic(0.0, length, static_cast<std::size_t>(epsilon.size()));
    const auto t = cod::Grid::closed(0.0, t_max, t_points);
    auto sampled = [&](const RealArray& a) {
        return cod::GridFunction(x, std::vector<cplx>(a.data(), a.data() + a.size()));
    };
    const auto sol = cod::wave::solve_wave({sampled(epsilon), sampled(S), sampled(R)}, x, t,
                                           {.tol = tol, .max_terms = max_terms});
    auto out = run_summary(sol.run);
    out["x"] = points(x);
    out["t"] = points(t);
    out["field"] = to_array(sol.field.values(), {static_cast<py::ssize_t>(t.count()), static_cast<py::ssize_t>(x.count())});
    out["initial_value_error"] = sol.initial_value_error;
    out["initial_derivative_error"] = sol.initial_derivative_error;
    out["message"] = sol.message;
    return out;
}

py::list run_acceptance(bool quick, unsigned threads) {
    std::vector<cod::acceptance::CriterionResult> results;
    {
        py::gil_scoped_release release;
        results = cod::acceptance::run_acceptance({.quick = quick, .threads = threads});
    }
    py::list out;
    for (const auto& r : results) {
        out.append(py::dict("id"_a = r.id, "name"_a = r.name, "passed"_a = r.passed, "detail"_a = r.detail,
                            "guards"_a = r.guards));
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Series solutions of linear operator equations by cyclic operator decomposition";

    py::register_exception<cod::GridError>(m, "GridError", PyExc_ValueError);
    py::register_exception<cod::SchemeError>(m, "SchemeError", PyExc_ValueError);
    py::register_exception<cod::tdse::PropagationError>(m, "PropagationError", PyExc_RuntimeError);

    m.def("format_double", &cod::format_double, "x"_a, "Shortest %.17g rendering used by every output file.");

    m.def("oscillator_solve", &oscillator_solve, "omega_sq"_a, "t_min"_a = 0.0, "t_max"_a = 1.0, "t_a"_a = py::none(),
          "t_b"_a = py::none(), "a"_a = cplx(1.0), "b"_a = cplx(0.0), "tol"_a = 1e-12, "max_terms"_a = 100,
          "Series solution of f'' + omega^2 f = 0 with omega^2 sampled on a closed grid.");
    m.def("rk4_oscillator", &rk4_oscillator, "omega_sq"_a, "a"_a, "b"_a, "t_min"_a, "t_max"_a, "points"_a,
          "RK4 reference solution with step-halving error estimate.");
    m.def("term_bound", &cod::oscillator::term_bound, "n"_a, "g_sup"_a, "c_max"_a, "t"_a,
          "g_sup c_max^n t^(2n) / (2n)!");
    m.def("power_series", &power_series, "alpha"_a, "terms"_a, "t"_a,
          "Closed-form series solution for omega^2 = -t^alpha, f(0) = 1, f'(0) = 0.");
    m.def("upper_estimate", py::vectorize(&cod::oscillator::upper_estimate), "alpha"_a, "t"_a);
    m.def("asymptotic_exponent", py::vectorize(&cod::oscillator::asymptotic_exponent), "alpha"_a, "t"_a);

    m.def("resolvent_ratio", &cod::exp_potential::resolvent_ratio, "m"_a, "lam"_a);
    m.def("nested_inverse_partial", &cod::exp_potential::nested_inverse_partial, "m"_a, "lam"_a, "K"_a);
    m.def("exp_potential", &exp_potential, "x"_a, "m"_a = 1.0, "amplitude"_a = 1.0, "c1"_a = cplx(1.0),
          "c2"_a = cplx(0.0), "terms"_a = 30, "Closed-form solution of psi'' + (m^2 - A e^x) psi = 0.");
    m.def("exp_residual", &exp_residual, "m"_a = 1.0, "amplitude"_a = 1.0, "terms"_a = 30, "x_min"_a = -5.0,
          "x_max"_a = 1.0, "points"_a = 6001, "Sup-norm of the central-difference residual of the particular solution.");

    m.def("stationary_solve", &stationary_solve, "potential"_a, "length"_a, "energy"_a = 0.0, "variant"_a = "laplace",
          "generating"_a = py::none(), "source"_a = py::none(), "tol"_a = 1e-12, "max_terms"_a = 100,
          "Series solution of [Laplacian + 2(E - U)] psi = source on a periodic 1D or 2D box.");
    m.def("tdse_propagate", &tdse_propagate, "psi0"_a, "length"_a, "dt"_a, "t_final"_a, "terms"_a = 4, "nodes"_a = 5,
          "potential"_a = py::none(), "vector_potential"_a = py::none(), "x_min"_a = 0.0,
          "Propagates a normalized state on a periodic grid with the series step.");
    m.def("wave_solve", &wave_solve, "epsilon"_a, "S"_a, "R"_a, "length"_a, "t_max"_a, "t_points"_a,
          "tol"_a = 1e-14, "max_terms"_a = 100,
          "Series solution of d/dt(eps dA/dt) = d^2A/dx^2; field has shape (t_points, len(epsilon)).");

    m.def("run_acceptance", &run_acceptance, "quick"_a = false, "threads"_a = 0u,
          "Runs the acceptance checks; returns one dict per criterion.");
}
