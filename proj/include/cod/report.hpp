#pragma once

#include "cod/engine.hpp"

#include <json.hpp>

#include <string>

namespace cod {

/// Convergence report: label, terms_used, stop_reason, term_sup_norms, defect_sup_norm.
template <SeriesField F>
nlohmann::ordered_json convergence_report(const std::string& label, const SeriesRun<F>& run, double defect_sup_norm) {
    nlohmann::ordered_json j;
    j["label"] = label;
    j["terms_used"] = run.terms_used;
    j["stop_reason"] = to_string(run.stop_reason);
    j["term_sup_norms"] = run.term_sup_norms;
    j["defect_sup_norm"] = defect_sup_norm;
    return j;
}

} // namespace cod
