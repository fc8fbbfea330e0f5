#include "cod/wave.hpp"

#include "cod/fft.hpp"
#include "cod/json_text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace cod::wave {

SpaceTimeField::SpaceTimeField(Grid x_grid, Grid t_grid)
    : x_grid_(x_grid), t_grid_(t_grid), values_(x_grid.count() * t_grid.count()) {}

GridFunction SpaceTimeField::row_function(std::size_t it) const {
    auto r = row(it);
    return GridFunction(x_grid_, std::vector<cplx>(r.begin(), r.end()));
}

void SpaceTimeField::require_same(const SpaceTimeField& other) const {
    if (!(x_grid_ == other.x_grid_) || !(t_grid_ == other.t_grid_)) throw GridError("space-time grid mismatch");
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& other) {
    require_same(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& other) {
    require_same(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(cplx c) {
    for (auto& v : values_) v *= c;
    return *this;
}

double sup_norm(const SpaceTimeField& f) {
    double s = 0.0;
    for (auto v : f.values()) s = std::max(s, std::abs(v));
    return s;
}

bool all_finite(const SpaceTimeField& f) {
    return std::all_of(f.values().begin(), f.values().end(),
                       [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

SpaceTimeField spatial_second_derivative(const SpaceTimeField& f) {
    SpaceTimeField out = f;
    const auto k = wavenumbers(f.x_grid());
    const double inv_n = 1.0 / static_cast<double>(f.nx());
    for (std::size_t it = 0; it < f.nt(); ++it) {
        auto r = out.row(it);
        fft::transform_1d(r, fft::Direction::forward);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] *= -k[j] * k[j] * inv_n;
        fft::transform_1d(r, fft::Direction::backward);
    }
    return out;
}

namespace {

// Trapezoid antiderivative along t for every column, from t = 0.
void integrate_in_time(SpaceTimeField& f) {
    const double half = 0.5 * f.t_grid().step();
    std::vector<cplx> prev(f.row(0).begin(), f.row(0).end());
    std::fill(f.row(0).begin(), f.row(0).end(), cplx(0.0));
    for (std::size_t it = 1; it < f.nt(); ++it) {
        auto below = f.row(it - 1);
        auto cur = f.row(it);
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            const cplx raw = cur[ix];
            cur[ix] = below[ix] + half * (prev[ix] + raw);
            prev[ix] = raw;
        }
    }
}

void scale_columns(SpaceTimeField& f, const std::vector<double>& weight) {
    for (std::size_t it = 0; it < f.nt(); ++it) {
        auto r = f.row(it);
        for (std::size_t ix = 0; ix < f.nx(); ++ix) r[ix] *= weight[ix];
    }
}

SpaceTimeField time_second_derivative(const SpaceTimeField& f) {
    const std::size_t nt = f.nt();
    if (nt < 4) throw GridError("time axis needs at least 4 points");
    const double inv_h2 = 1.0 / (f.t_grid().step() * f.t_grid().step());
    SpaceTimeField out(f.x_grid(), f.t_grid());
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
        for (std::size_t it = 1; it + 1 < nt; ++it) {
            out(it, ix) = (f(it - 1, ix) - 2.0 * f(it, ix) + f(it + 1, ix)) * inv_h2;
        }
        out(0, ix) = (2.0 * f(0, ix) - 5.0 * f(1, ix) + 4.0 * f(2, ix) - f(3, ix)) * inv_h2;
        out(nt - 1, ix) =
            (2.0 * f(nt - 1, ix) - 5.0 * f(nt - 2, ix) + 4.0 * f(nt - 3, ix) - f(nt - 4, ix)) * inv_h2;
    }
    return out;
}

std::vector<double> real_positive(const GridFunction& eps) {
    std::vector<double> out(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i].real() > 0.0) || eps[i].imag() != 0.0) {
            throw std::invalid_argument("permittivity must be real and positive everywhere");
        }
        out[i] = eps[i].real();
    }
    return out;
}

} // namespace

CodScheme<SpaceTimeField> build_wave_scheme(const WaveProblem& p, const Grid& x_grid, const Grid& t_grid) {
    if (x_grid.count() > max_axis_points || t_grid.count() > max_axis_points) {
        throw std::invalid_argument("space-time grid exceeds 2048 points per axis");
    }
    if (t_grid.start() != 0.0) throw std::invalid_argument("time grid must start at t = 0");
    if (t_grid.count() < 4) throw std::invalid_argument("time grid needs at least 4 points");
    if (!(p.epsilon.grid() == x_grid) || !(p.S.grid() == x_grid) || !(p.R.grid() == x_grid)) {
        throw std::invalid_argument("epsilon, S and R must be sampled on the x grid");
    }
    const std::vector<double> eps = real_positive(p.epsilon);
    std::vector<double> inv_eps(eps.size());
    std::transform(eps.begin(), eps.end(), inv_eps.begin(), [](double e) { return 1.0 / e; });

    SpaceTimeField generating(x_grid, t_grid);
    for (std::size_t it = 0; it < t_grid.count(); ++it) {
        const double t = t_grid.point(it);
        auto r = generating.row(it);
        for (std::size_t ix = 0; ix < x_grid.count(); ++ix) r[ix] = p.S[ix] + t * inv_eps[ix] * p.R[ix];
    }

    auto g_op = [eps](const SpaceTimeField& f) {
        SpaceTimeField out = time_second_derivative(f);
        scale_columns(out, eps);
        return out;
    };
    auto g_inverse = [inv_eps](const SpaceTimeField& f) {
        SpaceTimeField out = f;
        integrate_in_time(out);
        scale_columns(out, inv_eps);
        integrate_in_time(out);
        return out;
    };
    auto v_op = [](const SpaceTimeField& f) { return spatial_second_derivative(f); };

    const double dt = t_grid.step();
    const double eps_max = *std::max_element(eps.begin(), eps.end());
    const double tol =
        64.0 * std::numeric_limits<double>::epsilon() * (1.0 + sup_norm(generating)) * eps_max / (dt * dt);
    return CodScheme<SpaceTimeField>("wave", std::move(generating), g_op, g_inverse, v_op, tol);
}

WaveSolution solve_wave(const WaveProblem& p, const Grid& x_grid, const Grid& t_grid, const StopPolicy& policy) {
    const auto scheme = build_wave_scheme(p, x_grid, t_grid);
    auto run = run_cod(scheme, policy);
    WaveSolution sol{run.partial_sum, std::move(run), 0.0, 0.0, {}};

    const double dt = t_grid.step();
    for (std::size_t ix = 0; ix < x_grid.count(); ++ix) {
        sol.initial_value_error = std::max(sol.initial_value_error, std::abs(sol.field(0, ix) - p.S[ix]));
        const cplx d0 = (-3.0 * sol.field(0, ix) + 4.0 * sol.field(1, ix) - sol.field(2, ix)) / (2.0 * dt);
        sol.initial_derivative_error = std::max(sol.initial_derivative_error, std::abs(d0 - p.R[ix]));
    }
    if (sol.run.stop_reason == StopReason::divergence_detected) {
        sol.message = "series diverging: the time window is too long for the spatial bandwidth; shorten t_max";
    } else if (sol.run.stop_reason == StopReason::max_terms) {
        sol.message = "term cap reached before convergence; raise max_terms or shorten t_max";
    }
    return sol;
}

void write_csv(std::ostream& out, const SpaceTimeField& f) {
    for (std::size_t it = 0; it < f.nt(); ++it) {
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            if (ix > 0) out << ',';
            out << format_double(f(it, ix).real()) << ',' << format_double(f(it, ix).imag());
        }
        out << '\n';
    }
}

void write_metadata(std::ostream& out, const SpaceTimeField& f) {
    nlohmann::ordered_json j;
    j["rows"] = "time";
    j["columns"] = "x, as re,im pairs";
    j["nt"] = f.nt();
    j["nx"] = f.nx();
    j["t_start"] = f.t_grid().start();
    j["t_step"] = f.t_grid().step();
    j["x_start"] = f.x_grid().start();
    j["x_step"] = f.x_grid().step();
    j["x_period"] = f.x_grid().period();
    out << dump_json(j, 2) << '\n';
}

} // namespace cod::wave
