#include "cod/grid.hpp"

#include "cod/fft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace cod {

Grid::Grid(double start, double step, std::size_t count) : start_(start), step_(step), count_(count) {
    if (!(step > 0.0) || !std::isfinite(step)) throw GridError("grid step must be positive");
    if (count < 2) throw GridError("grid needs at least 2 points");
    if (!std::isfinite(start)) throw GridError("grid start must be finite");
}

Grid Grid::closed(double lo, double hi, std::size_t count) {
    if (count < 2) throw GridError("grid needs at least 2 points");
    return Grid(lo, (hi - lo) / static_cast<double>(count - 1), count);
}

Grid Grid::periodic(double lo, double period, std::size_t count) {
    return Grid(lo, period / static_cast<double>(count), count);
}

std::vector<double> Grid::points() const {
    std::vector<double> p(count_);
    for (std::size_t i = 0; i < count_; ++i) p[i] = point(i);
    return p;
}

std::size_t Grid::index_of(double x) const {
    const double pos = (x - start_) / step_;
    const double rounded = std::round(pos);
    if (rounded < 0.0 || rounded > static_cast<double>(count_ - 1) || std::abs(pos - rounded) > 1e-9) {
        throw GridError("limit not on grid");
    }
    return static_cast<std::size_t>(rounded);
}

std::size_t Grid::nearest_index(double x) const {
    const double pos = std::round((x - start_) / step_);
    return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(count_ - 1)));
}

GridFunction::GridFunction(Grid grid) : grid_(grid), values_(grid.count()) {}

GridFunction::GridFunction(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.count()) throw GridError("value count does not match grid");
}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) throw GridError("grid mismatch");
}

} // namespace

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx c) {
    for (auto& v : values_) v *= c;
    return *this;
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    GridFunction out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

Norms norms(const GridFunction& f) {
    Norms n;
    double sum = 0.0;
    for (auto v : f.values()) {
        const double a = std::abs(v);
        n.sup = std::max(n.sup, a);
        sum += a * a;
    }
    n.l2 = std::sqrt(f.grid().step() * sum);
    return n;
}

double sup_norm(const GridFunction& f) {
    double s = 0.0;
    for (auto v : f.values()) s = std::max(s, std::abs(v));
    return s;
}

bool all_finite(const GridFunction& f) {
    return std::all_of(f.values().begin(), f.values().end(),
                       [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

GridFunction cumulative_integral(const GridFunction& f, double lower_limit) {
    const Grid& g = f.grid();
    const std::size_t i0 = g.index_of(lower_limit);
    const double half = 0.5 * g.step();
    GridFunction out(g);
    out[i0] = 0.0;
    for (std::size_t i = i0 + 1; i < g.count(); ++i) out[i] = out[i - 1] + half * (f[i - 1] + f[i]);
    for (std::size_t i = i0; i-- > 0;) out[i] = out[i + 1] - half * (f[i] + f[i + 1]);
    return out;
}

GridFunction second_derivative(const GridFunction& f) {
    const Grid& g = f.grid();
    const std::size_t n = g.count();
    if (n < 3) throw GridError("second derivative needs at least 3 points");
    const double inv_h2 = 1.0 / (g.step() * g.step());
    GridFunction out(g);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv_h2;
    if (n >= 4) {
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv_h2;
        out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv_h2;
    } else {
        out[0] = out[1];
        out[2] = out[1];
    }
    return out;
}

std::vector<double> wavenumbers(const Grid& grid) {
    const std::size_t n = grid.count();
    const double base = 2.0 * std::numbers::pi / grid.period();
    std::vector<double> k(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto signed_j = j < (n + 1) / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
        k[j] = base * signed_j;
    }
    return k;
}

GridFunction dft(const GridFunction& f) {
    GridFunction out = f;
    fft::transform_1d(out.values(), fft::Direction::forward);
    // Phase so that the transform is relative to the grid origin rather than index 0.
    const auto k = wavenumbers(f.grid());
    const double inv_n = 1.0 / static_cast<double>(f.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= inv_n * std::polar(1.0, -k[j] * f.grid().start());
    return out;
}

GridFunction idft(const GridFunction& spectrum) {
    GridFunction out = spectrum;
    const auto k = wavenumbers(spectrum.grid());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::polar(1.0, k[j] * spectrum.grid().start());
    fft::transform_1d(out.values(), fft::Direction::backward);
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const GridFunction& f) {
    out << "x,re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out << format_double(f.grid().point(i)) << ',' << format_double(f[i].real()) << ','
            << format_double(f[i].imag()) << '\n';
    }
}

GridFunction read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw GridError("empty csv");
    std::vector<double> xs;
    std::vector<cplx> vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x = 0, re = 0, im = 0;
        if (!(row >> x >> re)) throw GridError("malformed csv row: " + line);
        if (!(row >> im)) im = 0.0;
        xs.push_back(x);
        vs.emplace_back(re, im);
    }
    if (xs.size() < 2) throw GridError("csv needs at least 2 rows");
    const Grid grid = Grid::closed(xs.front(), xs.back(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(grid.point(i) - xs[i]) > 1e-9 * std::max(1.0, std::abs(xs[i]))) {
            throw GridError("csv x column is not uniformly spaced");
        }
    }
    return GridFunction(grid, std::move(vs));
}

} // namespace cod
