#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace transducer {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Laplace variable on the physical axis. Im(s) = -omega.
inline constexpr cplx physical_s(double omega) noexcept { return cplx{0.0, -omega}; }

// The Laplace variable carried with its convention.
struct ComplexFrequency {
    cplx s;

    static constexpr ComplexFrequency physical(double omega) noexcept { return {physical_s(omega)}; }
    constexpr double omega() const noexcept { return -s.imag(); }
};

// Pairwise (cascade) summation. Result depends only on element order.
template <typename T>
T pairwise_sum(std::span<const T> values) {
    constexpr std::size_t block = 8;
    if (values.size() <= block) {
        T acc{};
        for (const T& v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(std::span<const T>(values));
}

// n evenly spaced points on [lo, hi]; n == 1 yields {lo}.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw std::invalid_argument("linspace: zero points");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

// n logarithmically spaced points on [lo, hi], lo > 0.
inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("logspace: bounds must be positive");
    auto exps = linspace(std::log(lo), std::log(hi), n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(exps[i]);
    out.front() = lo;
    if (n > 1) out.back() = hi;
    return out;
}

inline double relative_difference(cplx a, cplx b) noexcept {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double relative_difference(double a, double b) noexcept {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Vertex abscissa of the parabola through three equally spaced samples,
// expressed as an offset in units of the spacing, clamped to [-1, 1].
inline double parabolic_vertex_offset(double left, double centre, double right) noexcept {
    const double denom = left - 2.0 * centre + right;
    if (denom == 0.0) return 0.0;
    const double off = 0.5 * (left - right) / denom;
    return std::clamp(off, -1.0, 1.0);
}

}  // namespace transducer
