#pragma once

// Generic cyclic-operator series: psi = sum_n (G^-1 V)^n psi_g, built by the
// recurrence term_{n+1} = cycle_map(term_n).

#include "cod/grid.hpp"

#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cod {

/// Anything the engine can sum: a vector space with a sup norm and a finiteness check.
template <class F>
concept SeriesField = std::copyable<F> && requires(F a, const F& b, cplx c) {
    { a += b } -> std::same_as<F&>;
    { a -= b } -> std::same_as<F&>;
    { a *= c } -> std::same_as<F&>;
    { sup_norm(b) } -> std::convertible_to<double>;
    { all_finite(b) } -> std::convertible_to<bool>;
};

class SchemeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values showed up in a series term.
class SeriesBlowUp : public std::runtime_error {
public:
    explicit SeriesBlowUp(int term)
        : std::runtime_error("series blow-up at term " + std::to_string(term)), term_(term) {}
    int term() const { return term_; }

private:
    int term_;
};

enum class StopReason { converged, max_terms, divergence_detected };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::converged: return "converged";
        case StopReason::max_terms: return "max_terms";
        case StopReason::divergence_detected: return "divergence_detected";
    }
    return "unknown";
}

struct StopPolicy {
    double tol = 1e-12;
    int max_terms = 100;
    int divergence_window = 5;
    double divergence_factor = 10.0;

    void validate() const {
        if (!(tol > 0.0)) throw std::invalid_argument("stop policy: tol must be positive");
        if (max_terms < 1) throw std::invalid_argument("stop policy: max_terms must be >= 1");
        if (divergence_window < 1) throw std::invalid_argument("stop policy: divergence_window must be >= 1");
        if (!(divergence_factor > 1.0)) throw std::invalid_argument("stop policy: divergence_factor must exceed 1");
    }
};

template <SeriesField F>
struct SeriesRun {
    F partial_sum;
    F last_term;
    std::vector<double> term_sup_norms;
    int terms_used = 0;
    StopReason stop_reason = StopReason::max_terms;
};

/**
 * A decomposition D = G - V together with a generating function.
 *
 * The scheme is assembled from the actions of G, G^-1 and V. The cycle map is
 * G^-1 V and the defect operator is G - V. Construction checks that G annihilates
 * the generating function up to `generating_tol`.
 *
 * Schemes are immutable after construction and can be shared across threads as
 * long as the supplied callables are themselves pure.
 */
template <SeriesField F>
class CodScheme {
public:
    using Map = std::function<F(const F&)>;

    CodScheme(std::string label, F generating, Map g_op, Map g_inverse, Map v_op, double generating_tol)
        : label_(std::move(label)),
          generating_(std::move(generating)),
          g_op_(std::move(g_op)),
          g_inverse_(std::move(g_inverse)),
          v_op_(std::move(v_op)) {
        if (!g_op_ || !g_inverse_ || !v_op_) throw SchemeError("scheme '" + label_ + "': missing operator");
        const double residual = sup_norm(g_op_(generating_));
        if (!(residual <= generating_tol)) {
            throw SchemeError("scheme '" + label_ + "': generating function is not annihilated by G (residual " +
                              format_double(residual) + ")");
        }
    }

    const std::string& label() const { return label_; }
    const F& generating() const { return generating_; }

    F cycle_map(const F& f) const { return g_inverse_(v_op_(f)); }
    F g_inverse(const F& f) const { return g_inverse_(f); }
    F apply_g(const F& f) const { return g_op_(f); }
    F apply_v(const F& f) const { return v_op_(f); }

    /// D f = G f - V f.
    F defect_op(const F& f) const {
        F out = g_op_(f);
        out -= v_op_(f);
        return out;
    }

private:
    std::string label_;
    F generating_;
    Map g_op_;
    Map g_inverse_;
    Map v_op_;
};

namespace detail {

inline bool growing_over_window(const std::vector<double>& norms, const StopPolicy& policy) {
    const auto n = norms.size();
    const auto w = static_cast<std::size_t>(policy.divergence_window);
    if (n <= w) return false;
    for (std::size_t i = n - w; i < n; ++i) {
        if (!(norms[i] > norms[i - 1])) return false;
    }
    return norms[n - 1] >= policy.divergence_factor * norms[n - 1 - w];
}

template <SeriesField F>
SeriesRun<F> sum_series(const CodScheme<F>& scheme, F seed, const StopPolicy& policy) {
    policy.validate();
    if (!all_finite(seed)) throw SeriesBlowUp(0);

    SeriesRun<F> run{seed, seed, {sup_norm(seed)}, 0, StopReason::max_terms};
    if (run.term_sup_norms.front() == 0.0) {
        run.stop_reason = StopReason::converged;
        return run;
    }

    int small_in_a_row = 0;
    F term = std::move(seed);
    for (int n = 1; n <= policy.max_terms; ++n) {
        F next = scheme.cycle_map(term);
        if (!all_finite(next)) throw SeriesBlowUp(n);
        const double norm = sup_norm(next);

        // An identically vanishing term ends the series exactly; it is not counted.
        if (norm == 0.0) {
            run.stop_reason = StopReason::converged;
            return run;
        }

        run.partial_sum += next;
        run.term_sup_norms.push_back(norm);
        run.terms_used = n;
        term = std::move(next);
        run.last_term = term;

        const double threshold = policy.tol * (1.0 + sup_norm(run.partial_sum));
        small_in_a_row = norm <= threshold ? small_in_a_row + 1 : 0;
        if (small_in_a_row >= 2) {
            run.stop_reason = StopReason::converged;
            return run;
        }
        if (growing_over_window(run.term_sup_norms, policy)) {
            run.stop_reason = StopReason::divergence_detected;
            return run;
        }
    }
    run.stop_reason = StopReason::max_terms;
    return run;
}

} // namespace detail

/// Sums the homogeneous series seeded by the generating function.
template <SeriesField F>
SeriesRun<F> run_cod(const CodScheme<F>& scheme, const StopPolicy& policy) {
    return detail::sum_series(scheme, scheme.generating(), policy);
}

/// Sums the series seeded by psi_g + G^-1 source, a particular solution of D psi = source.
template <SeriesField F>
SeriesRun<F> run_cod_with_source(const CodScheme<F>& scheme, const F& source, const StopPolicy& policy) {
    F seed = scheme.generating();
    seed += scheme.g_inverse(source);
    return detail::sum_series(scheme, std::move(seed), policy);
}

/// Residual D(partial_sum).
template <SeriesField F>
F defect(const CodScheme<F>& scheme, const SeriesRun<F>& run) {
    return scheme.defect_op(run.partial_sum);
}

/// Residual D(partial_sum) - source for the source-driven series.
template <SeriesField F>
F defect(const CodScheme<F>& scheme, const SeriesRun<F>& run, const F& source) {
    F out = scheme.defect_op(run.partial_sum);
    out -= source;
    return out;
}

/// Exact truncation residual -V(last_term); equals defect() up to discretization error.
template <SeriesField F>
F telescoped_defect(const CodScheme<F>& scheme, const SeriesRun<F>& run) {
    F out = scheme.apply_v(run.last_term);
    out *= cplx(-1.0);
    return out;
}

} // namespace cod
