#include "cod/spectral.hpp"

#include "cod/fft.hpp"
#include "cod/json_text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace cod::spectral {

namespace {

void validate_layout(const std::vector<std::size_t>& shape, const std::vector<double>& lengths) {
    if (shape.empty() || shape.size() > 2) throw GridError("periodic field must be 1D or 2D");
    if (lengths.size() != shape.size()) throw GridError("one box length per axis is required");
    for (std::size_t a = 0; a < shape.size(); ++a) {
        if (shape[a] < 4 || shape[a] % 2 != 0) throw GridError("periodic sizes must be even and >= 4");
        if (!(lengths[a] > 0.0)) throw GridError("box lengths must be positive");
    }
    if (shape.size() == 2 && (shape[0] != shape[1] || lengths[0] != lengths[1])) {
        throw GridError("2D periodic fields must use square boxes");
    }
}

std::size_t total_size(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (auto s : shape) n *= s;
    return n;
}

double signed_wavenumber(std::size_t j, std::size_t n, double length) {
    const double sj = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    return 2.0 * std::numbers::pi * sj / length;
}

template <class Multiplier>
PeriodicField apply_modewise(const PeriodicField& f, Multiplier&& multiplier) {
    PeriodicField out = f;
    fft::transform(out.values(), f.shape(), fft::Direction::forward);
    const auto k2 = f.k_squared();
    const double inv_n = 1.0 / static_cast<double>(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= multiplier(k2[i]) * inv_n;
    fft::transform(out.values(), f.shape(), fft::Direction::backward);
    return out;
}

void require_same_layout(const PeriodicField& a, const PeriodicField& b) {
    if (!a.same_layout(b)) throw GridError("periodic field layout mismatch");
}

} // namespace

PeriodicField::PeriodicField(std::vector<std::size_t> shape, std::vector<double> box_lengths)
    : shape_(std::move(shape)), box_lengths_(std::move(box_lengths)) {
    validate_layout(shape_, box_lengths_);
    values_.assign(total_size(shape_), cplx(0.0));
}

PeriodicField::PeriodicField(std::vector<std::size_t> shape, std::vector<double> box_lengths, std::vector<cplx> values)
    : shape_(std::move(shape)), box_lengths_(std::move(box_lengths)), values_(std::move(values)) {
    validate_layout(shape_, box_lengths_);
    if (values_.size() != total_size(shape_)) throw GridError("value count does not match shape");
}

PeriodicField PeriodicField::from_grid_function(const GridFunction& f) {
    const auto v = f.values();
    return PeriodicField({f.size()}, {f.grid().period()}, std::vector<cplx>(v.begin(), v.end()));
}

GridFunction PeriodicField::to_grid_function() const {
    if (dims() != 1) throw GridError("only 1D fields convert to GridFunction");
    return GridFunction(Grid::periodic(0.0, box_lengths_[0], shape_[0]), values_);
}

std::vector<double> PeriodicField::k_squared() const {
    std::vector<double> k2(values_.size());
    if (dims() == 1) {
        for (std::size_t j = 0; j < shape_[0]; ++j) {
            const double k = signed_wavenumber(j, shape_[0], box_lengths_[0]);
            k2[j] = k * k;
        }
        return k2;
    }
    for (std::size_t i = 0; i < shape_[0]; ++i) {
        const double ki = signed_wavenumber(i, shape_[0], box_lengths_[0]);
        for (std::size_t j = 0; j < shape_[1]; ++j) {
            const double kj = signed_wavenumber(j, shape_[1], box_lengths_[1]);
            k2[i * shape_[1] + j] = ki * ki + kj * kj;
        }
    }
    return k2;
}

bool PeriodicField::same_layout(const PeriodicField& other) const {
    return shape_ == other.shape_ && box_lengths_ == other.box_lengths_;
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& other) {
    require_same_layout(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& other) {
    require_same_layout(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

PeriodicField& PeriodicField::operator*=(cplx c) {
    for (auto& v : values_) v *= c;
    return *this;
}

double sup_norm(const PeriodicField& f) {
    double s = 0.0;
    for (auto v : f.values()) s = std::max(s, std::abs(v));
    return s;
}

bool all_finite(const PeriodicField& f) {
    return std::all_of(f.values().begin(), f.values().end(),
                       [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

cplx mean(const PeriodicField& f) {
    cplx s = 0.0;
    for (auto v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

PeriodicField multiply(const PeriodicField& a, const PeriodicField& b) {
    require_same_layout(a, b);
    PeriodicField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return out;
}

PeriodicField laplacian(const PeriodicField& f) {
    return apply_modewise(f, [](double k2) { return cplx(-k2); });
}

PeriodicField inverse_laplacian(const PeriodicField& f) {
    return apply_modewise(f, [](double k2) { return k2 == 0.0 ? cplx(0.0) : cplx(-1.0 / k2); });
}

PeriodicField helmholtz(const PeriodicField& f, double energy) {
    return apply_modewise(f, [energy](double k2) { return cplx(2.0 * energy - k2); });
}

PeriodicField resolvent(const PeriodicField& f, double energy) {
    const auto k2 = f.k_squared();
    for (double v : k2) {
        if (std::abs(2.0 * energy - v) <= 1e-12 * std::max(1.0, v)) throw ResonanceError("on-shell mode");
    }
    return apply_modewise(f, [energy](double k) { return cplx(1.0 / (2.0 * energy - k)); });
}

CodScheme<PeriodicField> build_stationary_scheme(const PeriodicField& potential, double energy,
                                                 const PeriodicField& psi_g, Variant variant) {
    require_same_layout(potential, psi_g);
    const auto k2 = potential.k_squared();
    const double k2_max = *std::max_element(k2.begin(), k2.end());
    const double tol = 1e-10 * (1.0 + sup_norm(psi_g)) * (1.0 + k2_max + 2.0 * std::abs(energy));

    if (variant == Variant::laplace) {
        // V = -2(E - U) = 2U - 2E, applied pointwise.
        PeriodicField weight = potential;
        for (auto& w : weight.values()) w = 2.0 * w - 2.0 * energy;
        auto v_op = [weight](const PeriodicField& f) { return multiply(weight, f); };
        return CodScheme<PeriodicField>("stationary/laplace", psi_g, laplacian, inverse_laplacian, v_op, tol);
    }

    // Fail early if the resolvent is undefined on this grid.
    resolvent(psi_g, energy);
    PeriodicField weight = potential;
    weight *= 2.0;
    auto v_op = [weight](const PeriodicField& f) { return multiply(weight, f); };
    auto g_op = [energy](const PeriodicField& f) { return helmholtz(f, energy); };
    auto g_inv = [energy](const PeriodicField& f) { return resolvent(f, energy); };
    return CodScheme<PeriodicField>("stationary/resolvent", psi_g, g_op, g_inv, v_op, tol);
}

SeriesRun<PeriodicField> solve_stationary(const PeriodicField& potential, double energy, const PeriodicField& psi_g,
                                          Variant variant, const StopPolicy& policy) {
    return run_cod(build_stationary_scheme(potential, energy, psi_g, variant), policy);
}

SeriesRun<PeriodicField> solve_stationary_with_source(const PeriodicField& potential, double energy,
                                                      const PeriodicField& source, Variant variant,
                                                      const StopPolicy& policy) {
    PeriodicField zero(source.shape(), source.box_lengths());
    return run_cod_with_source(build_stationary_scheme(potential, energy, zero, variant), source, policy);
}

PeriodicField stationary_defect(const PeriodicField& potential, double energy, const PeriodicField& psi) {
    PeriodicField out = laplacian(psi);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += 2.0 * (energy - potential[i]) * psi[i];
    return out;
}

void write_csv(std::ostream& out, const PeriodicField& f) {
    if (f.dims() == 1) {
        write_csv(out, f.to_grid_function());
        return;
    }
    const std::size_t rows = f.shape()[0];
    const std::size_t cols = f.shape()[1];
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const cplx v = f[i * cols + j];
            if (j > 0) out << ',';
            out << format_double(v.real()) << ',' << format_double(v.imag());
        }
        out << '\n';
    }
}

void write_metadata(std::ostream& out, const PeriodicField& f) {
    nlohmann::ordered_json j;
    j["dims"] = f.dims();
    j["shape"] = f.shape();
    j["box_lengths"] = f.box_lengths();
    j["layout"] = f.dims() == 1 ? "x,re,im" : "row-major, re,im pairs per column";
    j["zero_mode"] = "inverse Laplacian maps the k=0 mode to 0";
    out << dump_json(j, 2) << '\n';
}

} // namespace cod::spectral
