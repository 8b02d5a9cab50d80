#pragma once

#include <random>
#include <string>

#include "transducer/transducer.hpp"

namespace transducer::testing {

inline std::string source_path(const std::string& rel) { return std::string(TRANSDUCER_SOURCE_DIR) + "/" + rel; }

// Random configuration with every rate positive. Rates are spread over a
// few decades around the reference device.
inline TransducerConfig random_config(std::mt19937_64& rng) {
    auto lu = [&](double lo, double hi) {
        std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
        return std::exp(d(rng));
    };
    TransducerConfig c = reference_config();
    c.kappa_ex = two_pi * lu(5e6, 500e6);
    c.kappa_0_1 = two_pi * lu(1e6, 100e6);
    c.kappa_0_2 = two_pi * lu(1e6, 100e6);
    c.omega_m = two_pi * lu(0.5e9, 10e9);
    c.omega_mw = c.omega_m * lu(0.98, 1.02);
    c.J = 0.5 * c.omega_m * lu(0.9, 1.1);
    c.omega_c_2 = c.omega_c_1 + two_pi * lu(1e5, 1e8) * (rng() % 2 ? 1.0 : -1.0);
    c.gamma_0 = two_pi * lu(0.1e6, 20e6);
    c.k_eff2 = lu(1e-4, 0.1);
    c.g0 = two_pi * lu(50.0, 5000.0);
    c.C0 = lu(20e-15, 2e-12);
    c.R0 = lu(1e3, 1e6);
    c.Z0 = lu(10.0, 200.0);
    c.P_in = lu(1e-5, 1.0);
    return c;
}

}  // namespace transducer::testing
