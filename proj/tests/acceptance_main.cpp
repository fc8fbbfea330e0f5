#include "cod/acceptance.hpp"

#include <cstdio>
#include <cstring>
#include <exception>

int main(int argc, char** argv) {
    cod::acceptance::Options options;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            options.quick = true;
        } else {
            std::fprintf(stderr, "usage: %s [--quick]\n", argv[0]);
            return 3;
        }
    }
    try {
        const auto results = cod::acceptance::run_acceptance(options);
        int failed = 0;
        for (const auto& r : results) {
            std::printf("%s\n", cod::acceptance::format_line(r).c_str());
            if (!r.passed) ++failed;
        }
        std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
        return failed == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
