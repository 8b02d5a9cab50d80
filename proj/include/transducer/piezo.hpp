#pragma once

// Electromechanical side: g_EM, the Butterworth-Van Dyke (BVD) circuit,
// microwave port rates, one-port reflection and the adiabatic elimination of
// the microwave mode into effective mechanical rates.

#include <cmath>
#include <limits>
#include <vector>

#include "transducer/errors.hpp"
#include "transducer/numeric.hpp"
#include "transducer/params.hpp"
#include "transducer/spectrum.hpp"

namespace transducer {

inline double g_em(double k_eff2, double omega_m, double omega_mw) {
    if (k_eff2 < 0.0 || !(omega_m > 0.0) || !(omega_mw > 0.0)) throw std::invalid_argument("g_em: invalid input");
    return 0.5 * std::sqrt(k_eff2) * std::sqrt(omega_m * omega_mw);
}

inline double g_em(const TransducerConfig& c) { return g_em(c.k_eff2, c.omega_m, c.omega_mw); }

// ------------------------------------------------------------------ BVD ---

struct BvdParams {
    double C0 = 0.0;  // F
    double Cm = 0.0;  // F
    double Lm = 0.0;  // H
    double Rm = 0.0;  // Ohm
};

inline BvdParams bvd_from_values(double C0, double k_eff2, double omega_m, double gamma_0) {
    if (!(C0 > 0.0) || !(k_eff2 > 0.0) || !(omega_m > 0.0) || !(gamma_0 > 0.0))
        throw std::invalid_argument("bvd: non-positive input");
    BvdParams b;
    b.C0 = C0;
    b.Cm = k_eff2 * C0;
    b.Lm = 1.0 / (omega_m * omega_m * b.Cm);
    b.Rm = b.Lm * gamma_0;
    return b;
}

inline BvdParams bvd_from_config(const TransducerConfig& c) {
    return bvd_from_values(c.C0, c.k_eff2, c.omega_m, c.gamma_0);
}

inline cplx admittance_at(const BvdParams& b, double omega_m, double gamma_0, double omega) {
    const cplx iw = I * omega;
    return iw * b.C0 + (1.0 / b.Lm) * iw / (-omega * omega + iw * gamma_0 + omega_m * omega_m);
}

inline ComplexSpectrum admittance(const BvdParams& b, double omega_m, double gamma_0, const std::vector<double>& grid) {
    for (double w : grid)
        if (w < 0.0) throw std::invalid_argument("admittance: negative frequency");
    require_increasing_grid(grid, "admittance");
    return sample(grid, [&](double w) { return admittance_at(b, omega_m, gamma_0, w); });
}

// Same curve from the circuit elements alone.
inline ComplexSpectrum admittance(const BvdParams& b, const std::vector<double>& grid) {
    const double omega_m = 1.0 / std::sqrt(b.Lm * b.Cm);
    return admittance(b, omega_m, b.Rm / b.Lm, grid);
}

struct BvdExtraction {
    double omega_s = 0.0;        // series resonance, peak of Re Y
    double omega_p = 0.0;        // parallel resonance, peak of Re Z
    double omega_max_abs = 0.0;  // max |Y|
    double omega_min_abs = 0.0;  // min |Y|
    double omega_mid = 0.0;      // (omega_s + omega_p) / 2
    double omega_m = 0.0;        // motional resonance, equal to omega_s for the ideal curve
    double gamma_0 = 0.0;        // full width at half maximum of Re Y
    double k_eff2 = 0.0;         // (omega_p^2 - omega_s^2) / omega_p^2
    double k_eff2_abs = 0.0;     // same formula on the |Y| extrema; biased high at moderate Q
    BvdParams bvd;
};

namespace detail {

// Abscissa of the vertex of the parabola through three samples.
inline double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0);
    if (curv == 0.0) return x1;
    const double x = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
    return std::clamp(x, x0, x2);
}

inline double refine_extremum(const std::vector<double>& x, const std::vector<double>& y, std::size_t k) {
    return parabola_vertex(x[k - 1], y[k - 1], x[k], y[k], x[k + 1], y[k + 1]);
}

// Linear interpolation of the crossing of level between samples i and i+1.
inline double crossing(const std::vector<double>& x, const std::vector<double>& y, std::size_t i, double level) {
    const double t = (level - y[i]) / (y[i + 1] - y[i]);
    return x[i] + t * (x[i + 1] - x[i]);
}

}  // namespace detail

// Locates the resonance/antiresonance pair of an ideal BVD curve. The series
// resonance is the conductance peak, which for the BVD form sits exactly at
// 1/sqrt(Lm Cm) with full width Rm/Lm; the parallel resonance is the peak of
// Re Z. The |Y| extrema are reported too: loss pushes them apart by an
// amount comparable to the splitting once k_eff2 * Q is of order one.
// C0_hint supplies the static capacitance; when non-positive it is estimated
// from the susceptance at the lowest grid point.
inline BvdExtraction extract_bvd(const ComplexSpectrum& spectrum, double C0_hint = 0.0) {
    const auto& w = spectrum.omega;
    const std::size_t n = w.size();
    if (n < 5) throw NumericalError("extract_bvd: grid too small");
    require_increasing_grid(w, "extract_bvd");
    std::vector<double> mag(n), g(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = std::abs(spectrum.value[i]);
        g[i] = spectrum.value[i].real();
        r[i] = spectrum.value[i] == cplx{} ? 0.0 : (1.0 / spectrum.value[i]).real();
    }
    auto interior = [n](std::size_t i) { return i > 0 && i < n - 1; };
    const auto imax = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
    const auto imin = static_cast<std::size_t>(std::min_element(mag.begin(), mag.end()) - mag.begin());
    const auto ig = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
    const auto ir = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    if (!interior(imax) || !interior(imin) || !interior(ig) || !interior(ir))
        throw NumericalError("extract_bvd: no resonance/antiresonance pair inside the grid");

    BvdExtraction out;
    out.omega_max_abs = detail::refine_extremum(w, mag, imax);
    out.omega_min_abs = detail::refine_extremum(w, mag, imin);
    out.omega_s = detail::refine_extremum(w, g, ig);
    out.omega_p = detail::refine_extremum(w, r, ir);
    if (!(out.omega_p > out.omega_s) || !(out.omega_min_abs > out.omega_max_abs))
        throw NumericalError("extract_bvd: parallel resonance not above series resonance");
    auto coupling = [](double ws, double wp) { return (wp * wp - ws * ws) / (wp * wp); };
    out.k_eff2 = coupling(out.omega_s, out.omega_p);
    out.k_eff2_abs = coupling(out.omega_max_abs, out.omega_min_abs);
    out.omega_mid = 0.5 * (out.omega_s + out.omega_p);
    out.omega_m = out.omega_s;

    const double half = 0.5 * g[ig];
    std::size_t lo = ig, hi = ig;
    while (lo > 0 && g[lo] > half) --lo;
    while (hi < n - 1 && g[hi] > half) ++hi;
    if (g[lo] > half || g[hi] > half) throw NumericalError("extract_bvd: half-maximum of the conductance not resolved");
    out.gamma_0 = detail::crossing(w, g, hi - 1, half) - detail::crossing(w, g, lo, half);

    double C0 = C0_hint;
    if (!(C0 > 0.0)) C0 = spectrum.value.front().imag() / w.front();
    if (!(C0 > 0.0)) throw NumericalError("extract_bvd: cannot estimate static capacitance");
    out.bvd = bvd_from_values(C0, out.k_eff2, out.omega_m, out.gamma_0);
    return out;
}

inline double figure_of_merit(double k_eff2, double Q) { return k_eff2 * Q / (1.0 - k_eff2); }

// ----------------------------------------------------------- port rates ---

struct PortRates {
    double Gamma_ex = 0.0;  // rad/s
    double Gamma_0 = 0.0;
    double Gamma = 0.0;

    double overcoupling() const noexcept { return Gamma_ex / Gamma; }
};

inline PortRates port_rates(double C0, double R0, double Z0) {
    if (!(C0 > 0.0) || !(R0 > 0.0) || !(Z0 > 0.0)) throw std::invalid_argument("port_rates: non-positive input");
    PortRates p;
    p.Gamma_ex = 1.0 / (Z0 * C0);
    p.Gamma_0 = std::isinf(R0) ? 0.0 : 1.0 / (R0 * C0);
    p.Gamma = p.Gamma_ex + p.Gamma_0;
    return p;
}

inline PortRates port_rates(const TransducerConfig& c) { return port_rates(c.C0, c.R0, c.Z0); }

inline cplx chi_mw(const TransducerConfig& c, cplx s) { return 1.0 / (s + I * c.omega_mw + 0.5 * port_rates(c).Gamma); }

// Bare mechanical susceptibility (intrinsic linewidth only).
inline cplx chi_m_bare(const TransducerConfig& c, cplx s) { return 1.0 / (s + I * c.omega_m + 0.5 * c.gamma_0); }

inline cplx s11_at(const TransducerConfig& c, cplx s) {
    const double g = g_em(c);
    const cplx x = chi_mw(c, s);
    return -1.0 + port_rates(c).Gamma_ex * x / (1.0 + g * g * x * chi_m_bare(c, s));
}

inline ComplexSpectrum s11(const TransducerConfig& c, const std::vector<double>& grid) {
    return sample(grid, [&](double w) { return s11_at(c, physical_s(w)); });
}

// ---------------------------------------------------- effective mechanics ---

struct EffectiveMechanics {
    cplx gamma_m;        // effective linewidth, complex, at s
    cplx sqrt_gamma_ex;  // amplitude coupling to the microwave line, at s
    cplx gamma_ex;       // sqrt_gamma_ex squared
    double gamma_int = 0.0;      // Re gamma_m - |gamma_ex|: rate into all other baths
    double gamma_m_res = 0.0;    // |gamma_m(-i omega_m)|
    double gamma_ex_res = 0.0;   // |gamma_ex(-i omega_m)|
};

inline EffectiveMechanics effective_mechanics(const TransducerConfig& c, cplx s) {
    const double g = g_em(c);
    const auto rates = port_rates(c);
    EffectiveMechanics m;
    const cplx x = chi_mw(c, s);
    m.gamma_m = c.gamma_0 + 2.0 * g * g * x;
    m.sqrt_gamma_ex = I * g * x * std::sqrt(rates.Gamma_ex);
    m.gamma_ex = m.sqrt_gamma_ex * m.sqrt_gamma_ex;
    m.gamma_int = m.gamma_m.real() - std::norm(m.sqrt_gamma_ex);

    const cplx xr = chi_mw(c, physical_s(c.omega_m));
    m.gamma_m_res = std::abs(c.gamma_0 + 2.0 * g * g * xr);
    m.gamma_ex_res = g * g * std::norm(xr) * rates.Gamma_ex;
    return m;
}

// Evaluated on the mechanical resonance, the operating point of the network.
inline EffectiveMechanics effective_mechanics(const TransducerConfig& c) {
    return effective_mechanics(c, physical_s(c.omega_m));
}

}  // namespace transducer
