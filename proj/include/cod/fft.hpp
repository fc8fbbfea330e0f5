#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace cod::fft {

enum class Direction { forward, backward };

/// Unnormalized in-place complex transform over a row-major array of the given shape (rank 1 or 2).
/// Forward uses exp(-i k x); backward uses exp(+i k x).
void transform(std::span<std::complex<double>> data, std::span<const std::size_t> shape, Direction dir);

inline void transform_1d(std::span<std::complex<double>> data, Direction dir) {
    const std::size_t n = data.size();
    transform(data, std::span<const std::size_t>(&n, 1), dir);
}

} // namespace cod::fft
