#include "commands.hpp"

#include "cli_support.hpp"

#include "cod/acceptance.hpp"
#include "cod/engine.hpp"
#include "cod/exp_potential.hpp"
#include "cod/json_text.hpp"
#include "cod/oracles.hpp"
#include "cod/oscillator.hpp"
#include "cod/report.hpp"
#include "cod/spectral.hpp"
#include "cod/tdse.hpp"
#include "cod/wave.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

namespace cod::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double two_pi = 2.0 * std::numbers::pi;
const double nan = std::numeric_limits<double>::quiet_NaN();

int exit_for(StopReason r, const std::string& what) {
    switch (r) {
        case StopReason::converged: return ok;
        case StopReason::divergence_detected:
            std::cerr << what << ": divergence detected\n";
            return divergence;
        case StopReason::max_terms:
            std::cerr << what << ": term cap reached before convergence\n";
            return solver_error;
    }
    return solver_error;
}

void require(bool condition, const std::string& message) {
    if (!condition) throw UsageError(message);
}

json grid_json(const Grid& g) {
    json j;
    j["start"] = g.start();
    j["step"] = g.step();
    j["count"] = g.count();
    return j;
}

std::string csv_of(const GridFunction& f) {
    std::ostringstream out;
    write_csv(out, f);
    return out.str();
}

// ---------------------------------------------------------------- oscillator

struct OscillatorArgs {
    std::string omega_sq = "1";
    std::string from_csv;
    double t_min = 0.0, t_max = 1.0;
    std::size_t points = 1001;
    std::optional<double> t_a, t_b;
    double a = 1.0, b = 0.0;
    double tol = 1e-12;
    int max_terms = 100;
    std::string out = ".";
};

int run_oscillator(const OscillatorArgs& o) {
    GridFunction w2 = [&] {
        if (!o.from_csv.empty()) return load_csv(o.from_csv);
        require(o.t_max > o.t_min, "--t-max must exceed --t-min");
        require(o.points >= 4, "--points must be at least 4");
        return sample_expression(Grid::closed(o.t_min, o.t_max, o.points), o.omega_sq, "t");
    }();
    const Grid g = w2.grid();
    require(g.count() >= 4, "need at least 4 grid points");
    const double t_a = o.t_a.value_or(g.start());
    const double t_b = o.t_b.value_or(t_a);
    try {
        g.index_of(t_a);
        g.index_of(t_b);
    } catch (const GridError&) {
        throw UsageError("--t-a and --t-b must be grid points");
    }
    const StopPolicy policy{.tol = o.tol, .max_terms = o.max_terms};

    const auto scheme = oscillator::build_scheme({w2, t_a, t_b, o.a, o.b});
    const auto run = run_cod(scheme, policy);
    const double defect_sup = sup_norm(defect(scheme, run));

    GridFunction two_term = scheme.generating();
    two_term += scheme.cycle_map(scheme.generating());
    const double two_term_deviation = sup_norm(run.partial_sum - two_term);

    std::optional<oracles::OracleResult<GridFunction>> oracle;
    if (t_a == t_b) {
        oracle = oracles::rk4_oscillator(
            [&](double t) {
                // Piecewise-linear interpolation of the sampled omega^2 between grid points.
                const double s = (t - g.start()) / g.step();
                const auto i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, static_cast<double>(g.count() - 2)));
                const double w = s - static_cast<double>(i);
                return (1.0 - w) * w2[i] + w * w2[i + 1];
            },
            o.a, o.b, t_a, g);
    }

    const auto dir = prepare_output_dir(o.out);
    std::ostringstream sol;
    sol << "t,f_re,f_im,oracle_re,oracle_im\n";
    for (std::size_t i = 0; i < g.count(); ++i) {
        const cplx f = run.partial_sum[i];
        const cplx r = oracle ? oracle->solution[i] : cplx(nan, nan);
        sol << num(g.point(i)) << ',' << num(f.real()) << ',' << num(f.imag()) << ',' << num(r.real()) << ','
            << num(r.imag()) << '\n';
    }
    write_text(dir / "oscillator_solution.csv", sol.str());

    double c_max = 0.0;
    for (auto v : w2.values()) c_max = std::max(c_max, std::abs(v));
    const double g_sup = sup_norm(scheme.generating());
    const double span = g.end() - g.start();
    std::ostringstream terms;
    terms << "n,term_sup_norm,factorial_bound\n";
    for (std::size_t n = 0; n < run.term_sup_norms.size(); ++n) {
        const double bound = n == 0 ? g_sup : oscillator::term_bound(static_cast<int>(n), g_sup, c_max, span);
        terms << n << ',' << num(run.term_sup_norms[n]) << ',' << num(bound) << '\n';
    }
    write_text(dir / "oscillator_terms.csv", terms.str());

    json report = convergence_report(scheme.label(), run, defect_sup);
    report["grid"] = grid_json(g);
    report["two_term_deviation"] = two_term_deviation;
    if (oracle) {
        report["oracle"] = {{"method", oracle->method},
                            {"step_used", oracle->step_used},
                            {"error_estimate", oracle->error_estimate},
                            {"sup_difference", sup_norm(run.partial_sum - oracle->solution)}};
    } else {
        report["oracle"] = nullptr;
    }
    write_text(dir / "oscillator_report.json", dump_json(report, 2) + "\n");

    std::cout << "oscillator: " << to_string(run.stop_reason) << " after " << run.terms_used
              << " terms; two-term deviation " << num(two_term_deviation) << "; defect " << num(defect_sup);
    if (oracle) std::cout << "; RK4 difference " << num(sup_norm(run.partial_sum - oracle->solution));
    std::cout << '\n';
    return exit_for(run.stop_reason, "oscillator");
}

// ---------------------------------------------------------------- power-series

struct PowerSeriesArgs {
    double alpha = 0.0;
    int terms = 25;
    double t_max = 1.0;
    std::size_t points = 201;
    std::string out = ".";
};

int run_power_series(const PowerSeriesArgs& o) {
    require(o.alpha > -1.0, "--alpha must exceed -1");
    require(o.t_max > 0.0, "--t-max must be positive");
    require(o.points >= 4, "--points must be at least 4");
    const auto series = oscillator::power_series_solution(o.alpha, o.terms);
    const Grid g = Grid::closed(0.0, o.t_max, o.points);
    const auto f = GridFunction::sample(g, [&](double t) { return cplx(series.eval(t)); });

    std::ostringstream csv;
    csv << "t,f,upper_estimate,below_upper\n";
    bool all_below = true;
    for (std::size_t i = 0; i < g.count(); ++i) {
        const double t = g.point(i);
        const double up = oscillator::upper_estimate(o.alpha, t);
        const bool below = t > 0.0 ? f[i].real() < up : f[i].real() <= up;
        all_below = all_below && below;
        csv << num(t) << ',' << num(f[i].real()) << ',' << num(up) << ',' << (below ? "true" : "false") << '\n';
    }

    // Residual f'' - t^alpha f on the interior.
    const auto d2 = second_derivative(f);
    double residual = 0.0;
    for (std::size_t i = 1; i + 1 < g.count(); ++i) {
        residual = std::max(residual, std::abs(d2[i] - std::pow(g.point(i), o.alpha) * f[i]));
    }
    std::vector<double> term_norms;
    for (std::size_t n = 0; n < series.coefficients().size(); ++n) {
        term_norms.push_back(static_cast<double>(series.coefficients()[n]) * std::pow(o.t_max, series.exponents()[n]));
    }
    std::vector<double> coeffs;
    for (auto c : series.coefficients()) coeffs.push_back(static_cast<double>(c));

    json report;
    report["label"] = "power-series";
    report["terms_used"] = o.terms;
    report["stop_reason"] = to_string(StopReason::max_terms);
    report["term_sup_norms"] = term_norms;
    report["defect_sup_norm"] = residual;
    report["alpha"] = o.alpha;
    report["coefficients"] = coeffs;
    report["exponents"] = series.exponents();
    report["all_below_upper_estimate"] = all_below;
    report["log_f_over_asymptotic_exponent"] =
        static_cast<double>(std::log(series.eval_extended(o.t_max))) / oscillator::asymptotic_exponent(o.alpha, o.t_max);

    const auto dir = prepare_output_dir(o.out);
    write_text(dir / "power_series.csv", csv.str());
    write_text(dir / "power_series_report.json", dump_json(report, 2) + "\n");
    std::cout << "power-series: alpha " << num(o.alpha) << ", " << o.terms << " terms; upper estimate "
              << (all_below ? "holds" : "VIOLATED") << " on [0, " << num(o.t_max) << "]\n";
    return ok;
}

// ---------------------------------------------------------------- exp-potential

struct ExpArgs {
    double m = 1.0, amplitude = 1.0;
    double c1_re = 1.0, c1_im = 0.0, c2_re = 0.0, c2_im = 0.0;
    int terms = 30;
    double x_min = -5.0, x_max = 1.0;
    std::size_t points = 6001;
    std::string out = ".";
};

int run_exp_potential(const ExpArgs& o) {
    require(o.x_max > o.x_min, "--x-max must exceed --x-min");
    require(o.points >= 4, "--points must be at least 4");
    const exp_potential::ExpPotentialProblem p{o.m, o.amplitude, cplx(o.c1_re, o.c1_im), cplx(o.c2_re, o.c2_im)};
    const auto psi = exp_potential::general_solution(p, o.terms);
    const auto particular = exp_potential::particular_solution(p, o.terms);
    const Grid g = Grid::closed(o.x_min, o.x_max, o.points);
    const auto values = psi.sample(g);
    const auto residual = exp_potential::residual(psi, g, o.m, o.amplitude);

    std::ostringstream csv;
    csv << "x,psi_re,psi_im,residual_abs\n";
    for (std::size_t i = 0; i < g.count(); ++i) {
        csv << num(g.point(i)) << ',' << num(values[i].real()) << ',' << num(values[i].imag()) << ','
            << num(std::abs(residual[i])) << '\n';
    }

    const double z = std::abs(o.amplitude) * std::exp(o.x_max);
    std::vector<double> term_norms{1.0};
    double zn = 1.0;
    for (auto c : particular.product_coeffs()) {
        zn *= z;
        term_norms.push_back(std::abs(c) * zn);
    }
    const bool converged = term_norms.back() <= 1e-15 * (1.0 + sup_norm(values));

    json report;
    report["label"] = "exp-potential";
    report["terms_used"] = o.terms;
    report["stop_reason"] = to_string(converged ? StopReason::converged : StopReason::max_terms);
    report["term_sup_norms"] = term_norms;
    report["defect_sup_norm"] = sup_norm(residual);
    report["grid"] = grid_json(g);

    const auto dir = prepare_output_dir(o.out);
    write_text(dir / "exp_potential.csv", csv.str());
    write_text(dir / "exp_potential_report.json", dump_json(report, 2) + "\n");
    std::cout << "exp-potential: residual sup-norm " << num(sup_norm(residual)) << " on [" << num(o.x_min) << ", "
              << num(o.x_max) << "]\n";
    return ok;
}

// ---------------------------------------------------------------- stationary

struct StationaryArgs {
    int dims = 1;
    std::size_t points = 64;
    double length = two_pi;
    std::string potential = "0";
    std::string from_csv;
    double energy = 0.0;
    std::string variant = "laplace";
    std::string generating = "1";
    std::string source;
    double tol = 1e-12;
    int max_terms = 100;
    std::string out = ".";
};

spectral::PeriodicField sample_field(const StationaryArgs& o, const std::string& source) {
    if (o.dims == 1) {
        const auto e = expr::Expression::parse(source, {"x"});
        return spectral::PeriodicField::sample_1d(o.points, o.length, [&](double x) { return e(x); });
    }
    const auto e = expr::Expression::parse(source, {"x", "y"});
    return spectral::PeriodicField::sample_2d(o.points, o.length, [&](double x, double y) { return e({x, y}); });
}

int run_stationary(StationaryArgs o) {
    require(o.dims == 1 || o.dims == 2, "--dims must be 1 or 2");
    spectral::PeriodicField potential = [&] {
        if (!o.from_csv.empty()) {
            require(o.dims == 1, "--from-csv supports 1D potentials only");
            const auto f = load_csv(o.from_csv);
            require(std::abs(f.grid().start()) <= 1e-12, "periodic potential samples must start at x = 0");
            o.points = f.size();
            o.length = f.grid().period();
            try {
                return spectral::PeriodicField::from_grid_function(f);
            } catch (const GridError& e) {
                throw UsageError(e.what());
            }
        }
        require(o.points >= 4 && o.points % 2 == 0, "--points must be even and at least 4");
        require(o.length > 0.0, "--length must be positive");
        return sample_field(o, o.potential);
    }();
    const auto variant = o.variant == "laplace" ? spectral::Variant::laplace : spectral::Variant::resolvent;
    require(variant == spectral::Variant::laplace || !o.source.empty(), "--variant resolvent needs --source");
    const StopPolicy policy{.tol = o.tol, .max_terms = o.max_terms};

    spectral::PeriodicField source(potential.shape(), potential.box_lengths());
    const bool driven = !o.source.empty();
    if (o.source == "delta") {
        source[0] = 1.0;
    } else if (driven) {
        source = sample_field(o, o.source);
    }

    const auto generating = driven ? spectral::PeriodicField(potential.shape(), potential.box_lengths())
                                   : sample_field(o, o.generating);
    const auto scheme = spectral::build_stationary_scheme(potential, o.energy, generating, variant);
    const auto run = driven ? run_cod_with_source(scheme, source, policy) : run_cod(scheme, policy);
    const auto residual = spectral::stationary_defect(potential, o.energy, run.partial_sum) - source;

    json report = convergence_report(scheme.label(), run, spectral::sup_norm(residual));
    report["energy"] = o.energy;
    report["source"] = driven ? o.source : "none";
    report["defect_mean"] = {spectral::mean(residual).real(), spectral::mean(residual).imag()};
    report["zero_mode"] =
        "inverse Laplacian maps the k=0 mode to 0, so G G^-1 is the identity only on mean-free fields";

    const auto dir = prepare_output_dir(o.out);
    std::ostringstream csv, meta;
    spectral::write_csv(csv, run.partial_sum);
    spectral::write_metadata(meta, run.partial_sum);
    write_text(dir / "stationary.csv", csv.str());
    write_text(dir / "stationary_meta.json", meta.str());
    write_text(dir / "stationary_report.json", dump_json(report, 2) + "\n");
    std::cout << "stationary: " << to_string(run.stop_reason) << " after " << run.terms_used << " terms; defect "
              << num(spectral::sup_norm(residual)) << '\n';
    return exit_for(run.stop_reason, "stationary");
}

// ---------------------------------------------------------------- tdse

struct TdseArgs {
    std::size_t points = 64;
    double x_min = 0.0, length = two_pi;
    std::string potential = "0";
    std::string vector_potential = "0";
    std::string psi0 = "exp(-2*(x-pi)^2)";
    std::string psi0_im = "0";
    std::string from_csv;
    double dt = 1e-3;
    int terms = 4;
    int nodes = 5;
    double t_final = 0.1;
    bool compare_cn = false;
    std::string out = ".";
};

int run_tdse(const TdseArgs& o) {
    GridFunction psi0 = [&] {
        if (!o.from_csv.empty()) {
            const auto f = load_csv(o.from_csv);
            return GridFunction(Grid::periodic(f.grid().start(), f.grid().period(), f.size()),
                                std::vector<cplx>(f.values().begin(), f.values().end()));
        }
        require(o.points >= 4, "--points must be at least 4");
        require(o.length > 0.0, "--length must be positive");
        const Grid g = Grid::periodic(o.x_min, o.length, o.points);
        const auto re = expr::Expression::parse(o.psi0, {"x"});
        const auto im = expr::Expression::parse(o.psi0_im, {"x"});
        return GridFunction::sample(g, [&](double x) { return cplx(re(x), im(x)); });
    }();
    require(tdse::l2_norm(psi0) > 0.0, "initial state is identically zero");
    psi0 = tdse::normalized(psi0);
    const Grid g = psi0.grid();

    const auto u = std::make_shared<expr::Expression>(expr::Expression::parse(o.potential, {"x", "t"}));
    const auto a = std::make_shared<expr::Expression>(expr::Expression::parse(o.vector_potential, {"t"}));
    const tdse::TdseSetup setup(g, [u](double x, double t) { return (*u)({x, t}); }, [a](double t) { return (*a)(t); },
                                psi0);
    const tdse::PropagatorStep step{.dt = o.dt, .n_terms = o.terms, .quadrature_nodes = o.nodes};
    try {
        step.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const double ratio = o.t_final / o.dt;
    require(o.t_final > 0.0 && std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio),
            "--t-final must be a positive multiple of --dt");

    const auto dir = prepare_output_dir(o.out);
    std::ofstream lines(dir / "tdse_steps.jsonl", std::ios::binary);
    if (!lines) throw std::runtime_error("cannot write tdse_steps.jsonl");

    json report;
    report["label"] = "tdse";
    report["terms_used"] = o.terms;
    report["stop_reason"] = to_string(StopReason::max_terms);
    report["dt"] = o.dt;
    report["quadrature_nodes"] = o.nodes;
    report["t_final"] = o.t_final;
    report["spectral_radius_estimate"] = tdse::spectral_radius_estimate(setup, 0.0);

    tdse::PropagationResult result{psi0, {}};
    GridFunction latest = psi0, before_last = psi0;
    try {
        result = tdse::propagate(setup, step, o.t_final, [&](const tdse::StepRecord& r, const GridFunction& psi) {
            lines << tdse::step_record_json(r) << '\n';
            before_last = std::move(latest);
            latest = psi;
        });
    } catch (const tdse::PropagationError& e) {
        lines.flush();
        report["error"] = e.what();
        write_text(dir / "tdse_report.json", dump_json(report, 2) + "\n");
        throw;
    }
    lines.flush();

    // Term norms of the final step, from differences of successive truncations.
    const double t_last = result.report.steps.empty() ? 0.0 : result.report.steps.back().t - o.dt;
    std::vector<double> term_norms{sup_norm(before_last)};
    GridFunction previous = before_last;
    for (int n = 1; n <= o.terms; ++n) {
        GridFunction current = tdse::cod_step(setup, {o.dt, n, o.nodes}, before_last, t_last);
        term_norms.push_back(sup_norm(current - previous));
        previous = std::move(current);
    }
    report["term_sup_norms"] = term_norms;
    report["defect_sup_norm"] = nullptr;
    report["max_drift"] = result.report.max_drift;
    report["final_norm"] = tdse::l2_norm(result.psi);
    report["warnings"] = result.report.warnings;
    if (o.compare_cn) {
        const auto cn = oracles::crank_nicolson(setup, o.dt, o.t_final, {.substeps = 4});
        report["oracle"] = {{"method", cn.method},
                            {"step_used", cn.step_used},
                            {"error_estimate", cn.error_estimate},
                            {"sup_difference", sup_norm(result.psi - cn.solution)}};
    }
    write_text(dir / "tdse_final.csv", csv_of(result.psi));
    write_text(dir / "tdse_report.json", dump_json(report, 2) + "\n");
    for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "tdse: " << result.report.steps.size() << " steps; max norm drift " << num(result.report.max_drift)
              << '\n';
    return ok;
}

// ---------------------------------------------------------------- wave

struct WaveArgs {
    std::size_t points = 32;
    double length = two_pi;
    double t_max = 1.0;
    std::size_t t_points = 1001;
    std::string epsilon = "1";
    std::string from_csv;
    std::string S = "sin(x)";
    std::string R = "0";
    double tol = 1e-14;
    int max_terms = 100;
    std::optional<double> snapshot;
    bool compare_leapfrog = false;
    std::string out = ".";
};

int run_wave(const WaveArgs& o) {
    GridFunction eps = [&] {
        if (!o.from_csv.empty()) {
            const auto f = load_csv(o.from_csv);
            return GridFunction(Grid::periodic(f.grid().start(), f.grid().period(), f.size()),
                                std::vector<cplx>(f.values().begin(), f.values().end()));
        }
        require(o.points >= 4, "--points must be at least 4");
        require(o.length > 0.0, "--length must be positive");
        return sample_expression(Grid::periodic(0.0, o.length, o.points), o.epsilon, "x");
    }();
    const Grid x = eps.grid();
    require(o.t_max > 0.0, "--t-max must be positive");
    require(o.t_points >= 4, "--t-points must be at least 4");
    require(x.count() <= wave::max_axis_points && o.t_points <= wave::max_axis_points,
            "at most 2048 points per axis");
    for (auto v : eps.values()) require(v.real() > 0.0 && v.imag() == 0.0, "permittivity must be real and positive");
    if (o.snapshot) require(*o.snapshot >= 0.0 && *o.snapshot <= o.t_max, "--snapshot must lie in [0, t-max]");
    const Grid t = Grid::closed(0.0, o.t_max, o.t_points);
    const wave::WaveProblem p{eps, sample_expression(x, o.S, "x"), sample_expression(x, o.R, "x")};

    const auto sol = wave::solve_wave(p, x, t, {.tol = o.tol, .max_terms = o.max_terms});
    const auto scheme = wave::build_wave_scheme(p, x, t);
    json report = convergence_report(scheme.label(), sol.run, wave::sup_norm(defect(scheme, sol.run)));
    report["initial_value_error"] = sol.initial_value_error;
    report["initial_derivative_error"] = sol.initial_derivative_error;
    report["message"] = sol.message;
    if (o.compare_leapfrog) {
        double eps_min = std::numeric_limits<double>::infinity();
        for (auto v : eps.values()) eps_min = std::min(eps_min, v.real());
        const double h_max = 0.5 * 2.0 / std::numbers::pi * x.step() * std::sqrt(eps_min);
        const int substeps = std::max(1, static_cast<int>(std::ceil(t.step() / h_max)));
        const auto lf = oracles::leapfrog_wave(p, x, t, substeps);
        report["oracle"] = {{"method", lf.oracle.method},
                            {"step_used", lf.oracle.step_used},
                            {"error_estimate", lf.oracle.error_estimate},
                            {"energy_drift", lf.energy_drift},
                            {"sup_difference", wave::sup_norm(sol.field - lf.oracle.solution)}};
    }

    const auto dir = prepare_output_dir(o.out);
    std::ostringstream csv, meta;
    wave::write_csv(csv, sol.field);
    wave::write_metadata(meta, sol.field);
    write_text(dir / "wave.csv", csv.str());
    write_text(dir / "wave_meta.json", meta.str());
    if (o.snapshot) {
        const std::size_t row = t.nearest_index(*o.snapshot);
        report["snapshot_t"] = t.point(row);
        write_text(dir / "wave_snapshot.csv", csv_of(sol.field.row_function(row)));
    }
    write_text(dir / "wave_report.json", dump_json(report, 2) + "\n");
    if (!sol.message.empty()) std::cerr << "wave: " << sol.message << '\n';
    std::cout << "wave: " << to_string(sol.run.stop_reason) << " after " << sol.run.terms_used << " terms\n";
    return exit_for(sol.run.stop_reason, "wave");
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    bool quick = false;
    std::string out;
};

int run_verify(const VerifyArgs& o) {
    const auto results = acceptance::run_acceptance({.quick = o.quick});
    int failed = 0;
    json list = json::array();
    for (const auto& r : results) {
        std::cout << acceptance::format_line(r) << '\n';
        if (!r.passed) ++failed;
        list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"guards", r.guards}});
    }
    std::cout << results.size() - static_cast<std::size_t>(failed) << '/' << results.size() << " criteria passed\n";
    if (!o.out.empty()) {
        const auto dir = prepare_output_dir(o.out);
        write_text(dir / "verify_report.json", dump_json(json{{"quick", o.quick}, {"criteria", list}}, 2) + "\n");
    }
    return failed == 0 ? ok : solver_error;
}

void add_stop_policy(CLI::App* c, double& tol, int& max_terms) {
    c->add_option("--tol", tol, "relative stopping tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--max-terms", max_terms, "term cap")->check(CLI::Range(1, 100000))->capture_default_str();
}

} // namespace

void register_commands(CLI::App& app, std::function<int()>& action) {
    app.add_option("--config", "key=value file applied to the subcommand (place after the subcommand name)");

    {
        auto o = std::make_shared<OscillatorArgs>();
        auto* c = app.add_subcommand("oscillator", "f'' + omega^2(t) f = 0 with f(t_a) = a, f'(t_b) = b");
        c->add_option("--omega-sq", o->omega_sq, "omega^2 as an expression in t")->capture_default_str();
        c->add_option("--from-csv", o->from_csv, "sampled omega^2 (t,re,im); replaces the grid options")
            ->check(CLI::ExistingFile);
        c->add_option("--t-min", o->t_min)->capture_default_str();
        c->add_option("--t-max", o->t_max)->capture_default_str();
        c->add_option("--points", o->points, "grid points")->capture_default_str();
        c->add_option("--t-a", o->t_a, "point where f = a (default: t-min)");
        c->add_option("--t-b", o->t_b, "point where f' = b (default: t-a)");
        c->add_option("--a", o->a)->capture_default_str();
        c->add_option("--b", o->b)->capture_default_str();
        add_stop_policy(c, o->tol, o->max_terms);
        c->add_option("--out", o->out, "output directory")->capture_default_str();
        c->callback([o, &action] { action = [o] { return run_oscillator(*o); }; });
    }
    {
        auto o = std::make_shared<PowerSeriesArgs>();
        auto* c = app.add_subcommand("power-series", "closed-form series for omega^2 = -t^alpha");
        c->add_option("--alpha", o->alpha)->capture_default_str();
        c->add_option("--terms", o->terms)->check(CLI::Range(1, 100000))->capture_default_str();
        c->add_option("--t-max", o->t_max)->capture_default_str();
        c->add_option("--points", o->points)->capture_default_str();
        c->add_option("--out", o->out, "output directory")->capture_default_str();
        c->callback([o, &action] { action = [o] { return run_power_series(*o); }; });
    }
    {
        auto o = std::make_shared<ExpArgs>();
        auto* c = app.add_subcommand("exp-potential", "psi'' + (m^2 - A e^x) psi = 0 in closed form");
        c->add_option("--m", o->m)->capture_default_str();
        c->add_option("--amplitude", o->amplitude, "A")->capture_default_str();
        c->add_option("--c1-re", o->c1_re)->capture_default_str();
        c->add_option("--c1-im", o->c1_im)->capture_default_str();
        c->add_option("--c2-re", o->c2_re)->capture_default_str();
        c->add_option("--c2-im", o->c2_im)->capture_default_str();
        c->add_option("--terms", o->terms)->check(CLI::Range(1, 100000))->capture_default_str();
        c->add_option("--x-min", o->x_min)->capture_default_str();
        c->add_option("--x-max", o->x_max)->capture_default_str();
        c->add_option("--points", o->points)->capture_default_str();
        c->add_option("--out", o->out, "output directory")->capture_default_str();
        c->callback([o, &action] { action = [o] { return run_exp_potential(*o); }; });
    }
    {
        auto o = std::make_shared<StationaryArgs>();
        auto* c = app.add_subcommand("stationary", "[Delta + 2(E - U)] psi = source on a periodic box");
        c->add_option("--dims", o->dims)->check(CLI::IsMember({1, 2}))->capture_default_str();
        c->add_option("--points", o->points, "points per axis (even)")->capture_default_str();
        c->add_option("--length", o->length, "box length per axis")->capture_default_str();
        c->add_option("--potential", o->potential, "U(x) or U(x, y)")->capture_default_str();
        c->add_option("--from-csv", o->from_csv, "sampled 1D potential (x,re,im) starting at x = 0")
            ->check(CLI::ExistingFile);
        c->add_option("--energy", o->energy)->capture_default_str();
        c->add_option("--variant", o->variant)->check(CLI::IsMember({"laplace", "resolvent"}))->capture_default_str();
        c->add_option("--generating", o->generating, "generating function (used without --source)")
            ->capture_default_str();
        c->add_option("--source", o->source, "source expression or 'delta'");
        add_stop_policy(c, o->tol, o->max_terms);
        c->add_option("--out", o->out, "output directory")->capture_default_str();
        c->callback([o, &action] { action = [o] { return run_stationary(*o); }; });
    }
    {
        auto o = std::make_shared<TdseArgs>();
        auto* c = app.add_subcommand("tdse", "i dpsi/dt = [1/2 (i d/dx + A(t))^2 + U(x, t)] psi on a periodic grid");
        c->add_option("--points", o->points)->capture_default_str();
        c->add_option("--x-min", o->x_min)->capture_default_str();
        c->add_option("--length", o->length)->capture_default_str();
        c->add_option("--potential", o->potential, "U(x, t)")->capture_default_str();
        c->add_option("--vector-potential", o->vector_potential, "A(t)")->capture_default_str();
        c->add_option("--psi0", o->psi0, "real part of psi(x, 0); normalized automatically")->capture_default_str();
        c->add_option("--psi0-im", o->psi0_im, "imaginary part of psi(x, 0)")->capture_default_str();
        c->add_option("--from-csv", o->from_csv, "sampled psi(x, 0) (x,re,im)")->check(CLI::ExistingFile);
        c->add_option("--dt", o->dt)->check(CLI::PositiveNumber)->capture_default_str();
        c->add_option("--terms", o->terms)->check(CLI::Range(1, 64))->capture_default_str();
        c->add_option("--nodes", o->nodes, "quadrature nodes per step")->check(CLI::Range(2, 16))->capture_default_str();
        c->add_option("--t-final", o->t_final)->capture_default_str();
        c->add_flag("--compare-cn", o->compare_cn, "compare with a Crank-Nicolson run");
        c->add_option("--out", o->out, "output directory")->capture_default_str();
        c->callback([o, &action] { action = [o] { return run_tdse(*o); }; });
    }
    {
        auto o = std::make_shared<WaveArgs>();
        auto* c = app.add_subcommand("wave", "d/dt(eps(x) dA/dt) = d^2A/dx^2 with A = S, dA/dt = R at t = 0");
        c->add_option("--points", o->points)->capture_default_str();
        c->add_option("--length", o->length)->capture_default_str();
        c->add_option("--t-max", o->t_max)->capture_default_str();
        c->add_option("--t-points", o->t_points)->capture_default_str();
        c->add_option("--epsilon", o->epsilon, "eps(x)")->capture_default_str();
        c->add_option("--from-csv", o->from_csv, "sampled eps(x) (x,re,im)")->check(CLI::ExistingFile);
        c->add_option("--S", o->S, "A(x, 0)")->capture_default_str();
        c->add_option("--R", o->R, "dA/dt(x, 0)")->capture_default_str();
        add_stop_policy(c, o->tol, o->max_terms);
        c->add_option("--snapshot", o->snapshot, "also write the time row nearest to t");
        c->add_flag("--compare-leapfrog", o->compare_leapfrog, "compare with a leapfrog run");
        c->add_option("--out", o->out, "output directory")->capture_default_str();
        c->callback([o, &action] { action = [o] { return run_wave(*o); }; });
    }
    {
        auto o = std::make_shared<VerifyArgs>();
        auto* c = app.add_subcommand("verify", "run the acceptance checks and print a pass/fail table");
        c->add_flag("--quick", o->quick, "fewer parameter values, same resolutions");
        c->add_option("--out", o->out, "write verify_report.json here");
        c->callback([o, &action] { action = [o] { return run_verify(*o); }; });
    }
}

} // namespace cod::cli
