#pragma once

// The ten acceptance checks, each against an analytic value, a bound or an oracle.

#include <string>
#include <vector>

namespace cod::acceptance {

struct Options {
    bool quick = false;    // fewer parameter values, same resolutions
    unsigned threads = 0;  // 0: COD_THREADS, else hardware concurrency
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string guards;  // the property a failure puts in doubt
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs every criterion; results are ordered by id regardless of thread count.
std::vector<CriterionResult> run_acceptance(const Options& options = {});

/// "[PASS] 3 constant-frequency closed form: ..." or "[FAIL] ... guards: ...".
std::string format_line(const CriterionResult& r);

/// COD_THREADS if set (positive integer), else std::thread::hardware_concurrency(), at least 1.
/// Throws std::invalid_argument for a malformed COD_THREADS.
unsigned thread_count_from_env();

} // namespace cod::acceptance
