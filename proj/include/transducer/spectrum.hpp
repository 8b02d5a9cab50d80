#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "transducer/numeric.hpp"

namespace transducer {

// Values sampled on an angular-frequency grid [rad/s].
template <typename T>
struct Spectrum {
    std::vector<double> omega;
    std::vector<T> value;

    std::size_t size() const noexcept { return omega.size(); }
};

using ComplexSpectrum = Spectrum<cplx>;
using RealSpectrum = Spectrum<double>;

// Grid must be non-empty and strictly increasing.
inline void require_increasing_grid(const std::vector<double>& grid, const char* who) {
    if (grid.empty()) throw std::invalid_argument(std::string(who) + ": empty frequency grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument(std::string(who) + ": frequency grid is not strictly increasing");
}

template <typename F>
auto sample(const std::vector<double>& grid, F&& f) {
    using T = decltype(f(grid.front()));
    Spectrum<T> out;
    out.omega = grid;
    out.value.reserve(grid.size());
    for (double w : grid) out.value.push_back(f(w));
    return out;
}

}  // namespace transducer
