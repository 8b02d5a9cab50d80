#pragma once

// Linearized transducer network: state-space model, transfer matrices by
// inversion, closed-form rotating-wave transfer functions and conversion
// efficiencies, and the (P_in, kappa_ex) sweep.
//
// Ports. Inputs: a_in (optical bus), c_in (microwave line), f_o1, f_o2
// (intrinsic optical baths of rings 1 and 2), f_m (every other bath of the
// mechanics). Outputs: a_out, c_out. The state-space relation is
//   s x = A x + B u,   y = C x + D u,   evaluated at s = -i omega.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "transducer/errors.hpp"
#include "transducer/numeric.hpp"
#include "transducer/optics.hpp"
#include "transducer/params.hpp"
#include "transducer/piezo.hpp"

namespace transducer {

// Everything the network needs, resolved once from a configuration.
struct OperatingPoint {
    TransducerConfig config;
    PumpPlacement placement;
    MeanFields fields;
    EffectiveMechanics mechanics;  // at s = -i omega_m
    PortRates ports;
    double g_em = 0.0;
};

inline OperatingPoint resolve_operating_point(const TransducerConfig& c, const PumpPlacement& p) {
    OperatingPoint op;
    op.config = c;
    op.placement = p;
    op.fields = mean_fields(c, p);
    op.mechanics = effective_mechanics(c);
    op.ports = port_rates(c);
    op.g_em = g_em(c);
    return op;
}

inline OperatingPoint resolve_operating_point(const TransducerConfig& c) {
    return resolve_operating_point(c, resolve_placement(c));
}

// Same operating point with the pump-enhanced coupling replaced.
inline OperatingPoint with_coupling(OperatingPoint op, cplx g_om) {
    op.fields.g_om = g_om;
    return op;
}

// ------------------------------------------------------------ state space ---

struct StateSpaceModel {
    Eigen::MatrixXcd A, B, C, D;
    std::vector<std::string> states, inputs, outputs;
    bool rwa = true;
};

inline const std::array<std::string, 5>& port_inputs() {
    static const std::array<std::string, 5> names{"a_in", "c_in", "f_o1", "f_o2", "f_m"};
    return names;
}

inline const std::array<std::string, 2>& port_outputs() {
    static const std::array<std::string, 2> names{"a_out", "c_out"};
    return names;
}

namespace detail {

struct RwaBlocks {
    Eigen::Matrix3cd A;
    Eigen::Matrix<cplx, 3, 5> B;
    Eigen::Matrix<cplx, 2, 3> C;
    Eigen::Matrix<cplx, 2, 5> D;
};

inline RwaBlocks rwa_blocks(const OperatingPoint& op) {
    const auto& c = op.config;
    const auto& p = op.placement;
    const auto& m = op.mechanics;
    const cplx g = op.fields.g_om;
    RwaBlocks r;
    r.A.setZero();
    r.A(0, 0) = I * p.Delta_1 - 0.5 * c.kappa_1();
    r.A(0, 1) = I * c.J;
    r.A(1, 0) = I * c.J;
    r.A(1, 1) = I * p.Delta_2 - 0.5 * c.kappa_2();
    r.A(1, 2) = I * g;
    r.A(2, 1) = I * std::conj(g);
    r.A(2, 2) = -I * c.omega_m - 0.5 * m.gamma_m;

    r.B.setZero();
    r.B(0, 0) = std::sqrt(c.kappa_ex);
    r.B(2, 1) = m.sqrt_gamma_ex;
    r.B(0, 2) = std::sqrt(c.kappa_0_1);
    r.B(1, 3) = std::sqrt(c.kappa_0_2);
    r.B(2, 4) = std::sqrt(std::max(m.gamma_int, 0.0));

    // C = -D B^dagger on the measured ports: the network is passive.
    r.C.setZero();
    r.C(0, 0) = -std::sqrt(c.kappa_ex);
    r.C(1, 2) = std::conj(m.sqrt_gamma_ex);

    r.D.setZero();
    r.D(0, 0) = 1.0;
    r.D(1, 1) = -1.0;
    return r;
}

}  // namespace detail

// rwa = true: states (a1, a2, b). rwa = false: (a1, a2, b, a1+, a2+, b+) with
// the conjugate block and the counter-rotating couplings; inputs and outputs
// gain their conjugate partners as well.
inline StateSpaceModel build_state_space(const OperatingPoint& op, bool rwa) {
    const auto r = detail::rwa_blocks(op);
    StateSpaceModel m;
    m.rwa = rwa;
    m.states = {"a1", "a2", "b"};
    m.inputs.assign(port_inputs().begin(), port_inputs().end());
    m.outputs.assign(port_outputs().begin(), port_outputs().end());
    if (rwa) {
        m.A = r.A;
        m.B = r.B;
        m.C = r.C;
        m.D = r.D;
        return m;
    }
    const cplx g = op.fields.g_om;
    m.A = Eigen::MatrixXcd::Zero(6, 6);
    m.A.topLeftCorner(3, 3) = r.A;
    m.A.bottomRightCorner(3, 3) = r.A.conjugate();
    m.A(1, 5) = I * g;              // a2  <- b+
    m.A(2, 4) = I * g;              // b   <- a2+
    m.A(4, 2) = -I * std::conj(g);  // a2+ <- b
    m.A(5, 1) = -I * std::conj(g);  // b+  <- a2
    m.B = Eigen::MatrixXcd::Zero(6, 10);
    m.B.topLeftCorner(3, 5) = r.B;
    m.B.bottomRightCorner(3, 5) = r.B.conjugate();
    m.C = Eigen::MatrixXcd::Zero(4, 6);
    m.C.topLeftCorner(2, 3) = r.C;
    m.C.bottomRightCorner(2, 3) = r.C.conjugate();
    m.D = Eigen::MatrixXcd::Zero(4, 10);
    m.D.topLeftCorner(2, 5) = r.D;
    m.D.bottomRightCorner(2, 5) = r.D.conjugate();
    for (const char* s : {"a1+", "a2+", "b+"}) m.states.emplace_back(s);
    for (const auto& s : port_inputs()) m.inputs.push_back(s + "+");
    for (const auto& s : port_outputs()) m.outputs.push_back(s + "+");
    return m;
}

inline StateSpaceModel build_state_space(const TransducerConfig& c, bool rwa) {
    return build_state_space(resolve_operating_point(c), rwa);
}

// Square scattering model of the RWA network with every bath port measured:
// outputs (a_out, c_out, f_o1_out, f_o2_out, f_m_out), C = -D B^dagger with
// D = diag(1, -1, 1, 1, 1).
inline StateSpaceModel extended_scattering(const StateSpaceModel& rwa_model) {
    if (!rwa_model.rwa) throw std::invalid_argument("extended_scattering: requires the rotating-wave model");
    StateSpaceModel m = rwa_model;
    const Eigen::Index n_in = rwa_model.B.cols();
    m.D = Eigen::MatrixXcd::Identity(n_in, n_in);
    m.D(1, 1) = -1.0;
    m.C = -m.D * rwa_model.B.adjoint();
    m.outputs = {"a_out", "c_out", "f_o1_out", "f_o2_out", "f_m_out"};
    return m;
}

// Reciprocal condition below which (sI - A) counts as singular.
inline constexpr double singular_rcond = 1e-14;

inline Eigen::MatrixXcd transfer_at(const StateSpaceModel& m, double omega) {
    const cplx s = physical_s(omega);
    const Eigen::Index n = m.A.rows();
    const Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(n, n) - m.A;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    const double rc = lu.rcond();
    if (!(rc > singular_rcond)) throw SingularNetworkError(omega, "transfer_matrix: (sI - A) is singular at omega = " + std::to_string(omega) + " rad/s");
    return m.C * lu.solve(m.B) + m.D;
}

inline std::vector<Eigen::MatrixXcd> transfer_matrix(const StateSpaceModel& m, const std::vector<double>& grid) {
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(grid.size());
    for (double w : grid) out.push_back(transfer_at(m, w));
    return out;
}

// --------------------------------------------------- network functions ---

// Cooperativities, extraction efficiencies and intrinsic-port factors at s.
// The sqrt_* members are the factor-wise square roots used by the closed
// forms; e.g. sqrt_C_OM = |g_om| sqrt(chi_2) sqrt(chi_m).
struct NetworkFunctions {
    cplx chi_1, chi_2, chi_m;
    cplx C_OM, C_OO, eta_opt, eta_MW, theta_o1, theta_o2, theta_m;
    cplx sqrt_C_OM, sqrt_C_OO, sqrt_eta_opt, sqrt_eta_MW, sqrt_theta_o1, sqrt_theta_o2, sqrt_theta_m;
};

inline cplx chi_m_effective(const OperatingPoint& op, cplx s) {
    return 1.0 / (s + I * op.config.omega_m + 0.5 * op.mechanics.gamma_m);
}

inline NetworkFunctions network_functions(const OperatingPoint& op, cplx s) {
    const auto& c = op.config;
    const auto chi = optical_susceptibilities(c, op.placement, s);
    NetworkFunctions f;
    f.chi_1 = chi.chi_1;
    f.chi_2 = chi.chi_2;
    f.chi_m = chi_m_effective(op, s);
    const double g_abs = std::abs(op.fields.g_om);
    const double gex = op.mechanics.gamma_ex_res;
    const cplx r1 = std::sqrt(f.chi_1), r2 = std::sqrt(f.chi_2), rm = std::sqrt(f.chi_m);

    f.sqrt_C_OM = g_abs * r2 * rm;
    f.sqrt_C_OO = c.J * r1 * r2;
    f.sqrt_eta_opt = std::sqrt(0.5 * c.kappa_ex) * r1;
    f.sqrt_eta_MW = std::sqrt(0.5 * gex) * rm;
    f.sqrt_theta_o1 = std::sqrt(0.5 * c.kappa_0_1) * r1;
    f.sqrt_theta_o2 = std::sqrt(0.5 * c.kappa_0_2) * r2;
    f.sqrt_theta_m = std::sqrt(0.5 * std::max(op.mechanics.gamma_int, 0.0)) * rm;

    f.C_OM = g_abs * g_abs * f.chi_2 * f.chi_m;
    f.C_OO = c.J * c.J * f.chi_1 * f.chi_2;
    f.eta_opt = 0.5 * c.kappa_ex * f.chi_1;
    f.eta_MW = 0.5 * gex * f.chi_m;
    f.theta_o1 = 0.5 * c.kappa_0_1 * f.chi_1;
    f.theta_o2 = 0.5 * c.kappa_0_2 * f.chi_2;
    f.theta_m = 0.5 * std::max(op.mechanics.gamma_int, 0.0) * f.chi_m;
    return f;
}

using RwaTransfer = Eigen::Matrix<cplx, 2, 5>;

// The ten rotating-wave transfer functions G_ij (row: a_out, c_out; column:
// port_inputs order). The closed forms hold in the gauge where g_om and
// sqrt(gamma_ex) are real and positive; the phases p restore the gauge of the
// state-space model, G_ij = G'_ij p_j / p_i.
inline RwaTransfer closed_form_rwa_at(const OperatingPoint& op, cplx s) {
    const auto f = network_functions(op, s);
    const cplx den = f.C_OM + f.C_OO + 1.0;
    const cplx cm_co = f.sqrt_C_OM * f.sqrt_C_OO;
    RwaTransfer G;
    G(0, 0) = (f.C_OM + f.C_OO - 2.0 * f.eta_opt * (f.C_OM + 1.0) + 1.0) / den;
    G(0, 1) = 2.0 * cm_co * f.sqrt_eta_MW * f.sqrt_eta_opt / den;
    G(0, 2) = -2.0 * f.sqrt_eta_opt * f.sqrt_theta_o1 * (f.C_OM + 1.0) / den;
    G(0, 3) = -2.0 * I * f.sqrt_C_OO * f.sqrt_eta_opt * f.sqrt_theta_o2 / den;
    G(0, 4) = 2.0 * cm_co * f.sqrt_eta_opt * f.sqrt_theta_m / den;
    G(1, 0) = -2.0 * cm_co * f.sqrt_eta_MW * f.sqrt_eta_opt / den;
    G(1, 1) = (-f.C_OM - f.C_OO + 2.0 * f.eta_MW * (f.C_OO + 1.0) - 1.0) / den;
    G(1, 2) = -2.0 * cm_co * f.sqrt_eta_MW * f.sqrt_theta_o1 / den;
    G(1, 3) = 2.0 * I * f.sqrt_C_OM * f.sqrt_eta_MW * f.sqrt_theta_o2 / den;
    G(1, 4) = 2.0 * f.sqrt_eta_MW * f.sqrt_theta_m * (f.C_OO + 1.0) / den;

    const double arg_g = op.fields.g_om == cplx{} ? 0.0 : std::arg(op.fields.g_om);
    const double arg_ex = op.mechanics.sqrt_gamma_ex == cplx{} ? 0.0 : std::arg(op.mechanics.sqrt_gamma_ex);
    const cplx p_mw = std::polar(1.0, arg_ex + arg_g);
    const std::array<cplx, 5> p_in{1.0, p_mw, 1.0, 1.0, std::polar(1.0, arg_g)};
    const std::array<cplx, 2> p_out{1.0, p_mw};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 5; ++j) G(i, j) *= p_in[j] / p_out[i];
    return G;
}

inline std::vector<RwaTransfer> closed_form_rwa(const OperatingPoint& op, const std::vector<double>& grid) {
    std::vector<RwaTransfer> out;
    out.reserve(grid.size());
    for (double w : grid) out.push_back(closed_form_rwa_at(op, physical_s(w)));
    return out;
}

// ------------------------------------------------------------ efficiency ---

inline double efficiency_rwa_at(const OperatingPoint& op, cplx s) {
    const auto f = network_functions(op, s);
    return 4.0 * std::abs(f.C_OM * f.C_OO * f.eta_MW * f.eta_opt) / std::norm(f.C_OM + f.C_OO + 1.0);
}

inline RealSpectrum efficiency_rwa(const OperatingPoint& op, const std::vector<double>& grid) {
    return sample(grid, [&](double w) { return efficiency_rwa_at(op, physical_s(w)); });
}

inline RealSpectrum efficiency_rwa(const TransducerConfig& c, const std::vector<double>& grid) {
    return efficiency_rwa(resolve_operating_point(c), grid);
}

// Loop gains of the microwave-to-optical graph with counter-rotating terms.
// Susceptibilities marked _c belong to the conjugate modes at the same s.
struct CounterRotatingTerms {
    cplx chi_1, chi_2, chi_m, chi_1c, chi_2c, chi_mc;
    cplx L1, L2, L3, L4, L5, L6;  // {b,a2} {b+,a2+} {a1,a2} {a1+,a2+} {b,a2+} {b+,a2}
    cplx P1;                      // gain of the direct path c_in -> b -> a2 -> a1 -> a_out
};

inline CounterRotatingTerms counter_rotating_terms(const OperatingPoint& op, cplx s) {
    const auto& c = op.config;
    const auto chi = optical_susceptibilities(c, op.placement, s);
    const auto chic = conjugate_susceptibilities(c, op.placement, s);
    CounterRotatingTerms t;
    t.chi_1 = chi.chi_1;
    t.chi_2 = chi.chi_2;
    t.chi_1c = chic.chi_1;
    t.chi_2c = chic.chi_2;
    t.chi_m = chi_m_effective(op, s);
    t.chi_mc = 1.0 / (s - I * c.omega_m + 0.5 * std::conj(op.mechanics.gamma_m));
    const double g2 = std::norm(op.fields.g_om);
    const double J2 = c.J * c.J;
    t.L1 = -t.chi_2 * t.chi_m * g2;
    t.L2 = -t.chi_2c * t.chi_mc * g2;
    t.L3 = -t.chi_1 * t.chi_2 * J2;
    t.L4 = -t.chi_1c * t.chi_2c * J2;
    t.L5 = t.chi_2c * t.chi_m * g2;
    t.L6 = t.chi_2 * t.chi_mc * g2;
    t.P1 = op.mechanics.sqrt_gamma_ex * std::sqrt(c.kappa_ex) * c.J * op.fields.g_om * t.chi_1 * t.chi_2 * t.chi_m;
    return t;
}

// Numerator and denominator in the printed two-node-loop bookkeeping.
inline cplx printed_numerator(const CounterRotatingTerms& t) { return t.P1 * (1.0 - t.L4 - t.L2); }

inline cplx printed_denominator(const CounterRotatingTerms& t) {
    return 1.0 - (t.L1 + t.L2 + t.L3 + t.L4 + t.L5 + t.L6) + t.L1 * t.L2 + t.L1 * t.L4 + t.L2 * t.L3 + t.L3 * t.L4 +
           t.L3 * t.L5 + t.L4 * t.L6 + t.L5 * t.L6;
}

// Exact forms. The graph also holds the second forward path
// c_in -> b -> a2+ -> b+ -> a2 -> a1 -> a_out of gain P1 L2, and the two
// four-node loops b -> a2 -> b+ -> a2+ and its reverse, each of gain L1 L2
// (= L5 L6); with them the pair terms L1 L2 and L5 L6 cancel.
inline cplx exact_numerator(const CounterRotatingTerms& t) { return t.P1 * (1.0 - t.L4); }

inline cplx exact_denominator(const CounterRotatingTerms& t) {
    return 1.0 - (t.L1 + t.L2 + t.L3 + t.L4 + t.L5 + t.L6) + t.L1 * t.L4 + t.L2 * t.L3 + t.L3 * t.L4 + t.L3 * t.L5 +
           t.L4 * t.L6;
}

inline double efficiency_full_at(const OperatingPoint& op, cplx s) {
    const auto t = counter_rotating_terms(op, s);
    return std::norm(exact_numerator(t) / exact_denominator(t));
}

inline double efficiency_printed_at(const OperatingPoint& op, cplx s) {
    const auto t = counter_rotating_terms(op, s);
    return std::norm(printed_numerator(t) / printed_denominator(t));
}

inline RealSpectrum efficiency_full(const OperatingPoint& op, const std::vector<double>& grid) {
    return sample(grid, [&](double w) { return efficiency_full_at(op, physical_s(w)); });
}

inline RealSpectrum efficiency_full(const TransducerConfig& c, const std::vector<double>& grid) {
    return efficiency_full(resolve_operating_point(c), grid);
}

enum class Approximation { rwa, full };

inline double efficiency_at(const OperatingPoint& op, double omega, Approximation mode) {
    return mode == Approximation::rwa ? efficiency_rwa_at(op, physical_s(omega)) : efficiency_full_at(op, physical_s(omega));
}

struct EfficiencyPeak {
    double omega = 0.0;
    double eta = 0.0;
};

// Half-width of the window around omega_m that holds the conversion band.
inline double conversion_window(const OperatingPoint& op) {
    return 4.0 * (std::abs(op.fields.g_om) + op.mechanics.gamma_m_res + op.config.kappa_1() + op.config.kappa_2());
}

// Maximum over a coarse grid, polished by golden-section search in the
// bracketing cells.
inline EfficiencyPeak peak_efficiency(const OperatingPoint& op, Approximation mode = Approximation::rwa,
                                      std::size_t coarse_points = 801) {
    const double wm = op.config.omega_m;
    const double half = conversion_window(op);
    const auto grid = linspace(wm - half, wm + half, coarse_points);
    std::size_t best = 0;
    double best_eta = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double e = efficiency_at(op, grid[i], mode);
        if (e > best_eta) {
            best_eta = e;
            best = i;
        }
    }
    double lo = grid[best == 0 ? 0 : best - 1];
    double hi = grid[std::min(best + 1, grid.size() - 1)];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = efficiency_at(op, x1, mode), f2 = efficiency_at(op, x2, mode);
    for (int it = 0; it < 80 && hi - lo > 1e-9 * wm; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = efficiency_at(op, x2, mode);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = efficiency_at(op, x1, mode);
        }
    }
    EfficiencyPeak p{grid[best], best_eta};
    const double xm = 0.5 * (lo + hi);
    const double fm = efficiency_at(op, xm, mode);
    if (fm > p.eta) p = {xm, fm};
    return p;
}

inline EfficiencyPeak peak_efficiency(const TransducerConfig& c, Approximation mode = Approximation::rwa) {
    return peak_efficiency(resolve_operating_point(c), mode);
}

// ------------------------------------------------------------------ sweep ---

struct SweepSurface {
    std::vector<double> powers;     // W
    std::vector<double> kappa_ex;   // rad/s
    std::vector<double> eta_peak;   // [k * powers.size() + p]
    std::vector<double> omega_peak;

    double at(std::size_t k, std::size_t p) const { return eta_peak[k * powers.size() + p]; }

    // Index of the power maximizing eta for kappa_ex row k.
    std::size_t optimal_power_index(std::size_t k) const {
        std::size_t best = 0;
        for (std::size_t p = 1; p < powers.size(); ++p)
            if (at(k, p) > at(k, best)) best = p;
        return best;
    }
};

inline std::size_t default_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Peak efficiency for every (kappa_ex, P_in) cell. Cells are independent and
// land in fixed slots, so the surface does not depend on the job count.
inline SweepSurface sweep(const TransducerConfig& base, const std::vector<double>& power_grid,
                          const std::vector<double>& kappa_ex_grid, Approximation mode = Approximation::rwa,
                          std::size_t jobs = 0) {
    if (power_grid.empty() || kappa_ex_grid.empty()) throw std::invalid_argument("sweep: empty range");
    for (double p : power_grid)
        if (!(p > 0.0)) throw std::invalid_argument("sweep: powers must be positive");
    for (double k : kappa_ex_grid)
        if (!(k > 0.0)) throw std::invalid_argument("sweep: kappa_ex values must be positive");
    SweepSurface s;
    s.powers = power_grid;
    s.kappa_ex = kappa_ex_grid;
    const std::size_t cells = power_grid.size() * kappa_ex_grid.size();
    s.eta_peak.assign(cells, 0.0);
    s.omega_peak.assign(cells, 0.0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells && !failed; i = next++) {
            try {
                TransducerConfig c = base;
                c.kappa_ex = kappa_ex_grid[i / power_grid.size()];
                c.P_in = power_grid[i % power_grid.size()];
                const auto peak = peak_efficiency(c, mode);
                s.eta_peak[i] = peak.eta;
                s.omega_peak[i] = peak.omega;
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (jobs == 0) jobs = default_jobs();
    jobs = std::min(jobs, cells);
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return s;
}

}  // namespace transducer
