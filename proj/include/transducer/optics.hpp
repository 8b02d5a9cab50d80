#pragma once

// Optical side: pump placement on the dimer supermodes, susceptibilities,
// mean intracavity fields, bus transmission and the pump lineshape.
// Detunings follow Delta = omega_L - omega_c.

#include <cmath>
#include <vector>

#include "transducer/numeric.hpp"
#include "transducer/params.hpp"
#include "transducer/spectrum.hpp"

namespace transducer {

struct PumpPlacement {
    PumpTarget target = PumpTarget::symmetric;
    double omega_L = 0.0;  // rad/s
    double Delta_1 = 0.0;
    double Delta_2 = 0.0;
    double Delta_S = 0.0;  // symmetric supermode minus pump
    double Delta_A = 0.0;  // asymmetric supermode minus pump
};

// Supermodes of two coupled rings sit at mean -/+ sqrt(delta^2/4 + J^2).
inline std::pair<double, double> supermode_frequencies(const TransducerConfig& c) {
    const double mean = 0.5 * (c.omega_c_1 + c.omega_c_2);
    const double delta = c.omega_c_1 - c.omega_c_2;
    const double split = std::sqrt(0.25 * delta * delta + c.J * c.J);
    return {mean - split, mean + split};
}

inline PumpPlacement resolve_placement(const TransducerConfig& c, PumpTarget target) {
    const auto [w_s, w_a] = supermode_frequencies(c);
    PumpPlacement p;
    p.target = target;
    switch (target) {
        case PumpTarget::symmetric: p.omega_L = w_s; break;
        case PumpTarget::asymmetric: p.omega_L = w_a; break;
        case PumpTarget::explicit_detuning:
            if (!c.omega_L) throw ConfigError("omega_L", "missing key: omega_L (required by explicit pump placement)");
            p.omega_L = *c.omega_L;
            break;
    }
    p.Delta_1 = p.omega_L - c.omega_c_1;
    p.Delta_2 = p.omega_L - c.omega_c_2;
    p.Delta_S = w_s - p.omega_L;
    p.Delta_A = w_a - p.omega_L;
    return p;
}

inline PumpPlacement resolve_placement(const TransducerConfig& c) { return resolve_placement(c, c.pump_target); }

// Placement from explicit rotating-frame detunings.
inline PumpPlacement placement_from_detunings(const TransducerConfig& c, double Delta_1, double Delta_2) {
    const auto [w_s, w_a] = supermode_frequencies(c);
    PumpPlacement p;
    p.target = PumpTarget::explicit_detuning;
    p.Delta_1 = Delta_1;
    p.Delta_2 = Delta_2;
    p.omega_L = c.omega_c_1 + Delta_1;
    p.Delta_S = w_s - p.omega_L;
    p.Delta_A = w_a - p.omega_L;
    return p;
}

struct OpticalSusceptibilities {
    cplx chi_1;
    cplx chi_2;
};

inline OpticalSusceptibilities optical_susceptibilities(const TransducerConfig& c, const PumpPlacement& p, cplx s) {
    return {1.0 / (s - I * p.Delta_1 + 0.5 * c.kappa_1()), 1.0 / (s - I * p.Delta_2 + 0.5 * c.kappa_2())};
}

// Susceptibilities of the conjugate modes at the same s.
inline OpticalSusceptibilities conjugate_susceptibilities(const TransducerConfig& c, const PumpPlacement& p, cplx s) {
    return {1.0 / (s + I * p.Delta_1 + 0.5 * c.kappa_1()), 1.0 / (s + I * p.Delta_2 + 0.5 * c.kappa_2())};
}

struct MeanFields {
    cplx a_bar_1;
    cplx a_bar_2;
    cplx g_om;  // g0 * a_bar_2
    double flux = 0.0;  // input photons per second

    double photons_1() const noexcept { return std::norm(a_bar_1); }
    double photons_2() const noexcept { return std::norm(a_bar_2); }
};

// Steady state under a monochromatic pump of real amplitude sqrt(flux).
inline MeanFields mean_fields(const TransducerConfig& c, const PumpPlacement& p) {
    MeanFields m;
    m.flux = photon_flux(c.P_in, p.omega_L, c.hbar);
    const auto chi = optical_susceptibilities(c, p, cplx{0.0, 0.0});
    const double J2 = c.J * c.J;
    m.a_bar_1 = std::sqrt(c.kappa_ex) * chi.chi_1 / (1.0 + J2 * chi.chi_1 * chi.chi_2) * std::sqrt(m.flux);
    m.a_bar_2 = I * c.J * chi.chi_2 * m.a_bar_1;
    m.g_om = c.g0 * m.a_bar_2;
    return m;
}

struct DimerResponse {
    cplx t;    // bus transmission
    cplx a_1;  // ring amplitudes per unit input amplitude
    cplx a_2;
};

// Weak classical probe at absolute frequency omega.
inline DimerResponse dimer_response(const TransducerConfig& c, double omega) {
    const cplx chi_1 = 1.0 / (-I * (omega - c.omega_c_1) + 0.5 * c.kappa_1());
    const cplx chi_2 = 1.0 / (-I * (omega - c.omega_c_2) + 0.5 * c.kappa_2());
    DimerResponse r;
    r.a_1 = std::sqrt(c.kappa_ex) * chi_1 / (1.0 + c.J * c.J * chi_1 * chi_2);
    r.a_2 = I * c.J * chi_2 * r.a_1;
    r.t = 1.0 - std::sqrt(c.kappa_ex) * r.a_1;
    return r;
}

inline ComplexSpectrum transmission_spectrum(const TransducerConfig& c, const std::vector<double>& grid) {
    return sample(grid, [&](double w) { return dimer_response(c, w).t; });
}

// Lorentzian pump amplitude whose squared modulus integrates to the flux.
inline ComplexSpectrum laser_spectrum(double P_in, double omega_L, double kappa_L, double phi_L,
                                      const std::vector<double>& grid, double hbar = codata_hbar) {
    if (!(kappa_L > 0.0)) throw std::invalid_argument("laser_spectrum: kappa_L must be positive");
    const double amp = std::sqrt(photon_flux(P_in, omega_L, hbar)) * std::sqrt(0.5 * kappa_L / std::numbers::pi);
    const cplx phase = std::polar(1.0, phi_L);
    return sample(grid, [&](double w) { return amp * phase / (-I * (w - omega_L) + 0.5 * kappa_L); });
}

struct StaticShift {
    double delta_x_norm = 0.0;    // displacement-origin shift in units of x_zpf
    double detuning_shift = 0.0;  // rad/s, added to the optical detuning
};

inline StaticShift static_shift(const TransducerConfig& c, double photon_number) {
    if (photon_number < 0.0) throw std::invalid_argument("static_shift: negative photon number");
    StaticShift s;
    s.delta_x_norm = 2.0 * c.g0 * photon_number / c.omega_m;
    s.detuning_shift = c.g0 * s.delta_x_norm;
    return s;
}

}  // namespace transducer
