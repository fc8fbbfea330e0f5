#include "cod/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace cod::fft {

namespace {

// FFTW planning is not thread-safe; executing a plan on new arrays is.
struct PlanCache {
    std::mutex mutex;
    std::map<std::tuple<std::vector<std::size_t>, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::span<const std::size_t> shape, int sign) {
        std::vector<std::size_t> dims(shape.begin(), shape.end());
        std::lock_guard lock(mutex);
        auto key = std::make_tuple(dims, sign);
        if (auto it = plans.find(key); it != plans.end()) return it->second;

        std::size_t total = 1;
        std::vector<int> n;
        for (auto d : dims) {
            total *= d;
            n.push_back(static_cast<int>(d));
        }
        std::vector<fftw_complex> scratch(total);
        fftw_plan plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), scratch.data(), scratch.data(),
                                       sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("fftw planning failed");
        plans.emplace(key, plan);
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

} // namespace

void transform(std::span<std::complex<double>> data, std::span<const std::size_t> shape, Direction dir) {
    if (shape.empty() || shape.size() > 2) throw std::invalid_argument("fft: rank must be 1 or 2");
    std::size_t total = 1;
    for (auto d : shape) total *= d;
    if (total != data.size()) throw std::invalid_argument("fft: shape does not match data size");
    if (total == 0) return;

    fftw_plan plan = cache().get(shape, dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

} // namespace cod::fft
